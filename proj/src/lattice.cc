// Copyright 2026 The PBoS Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pbos/lattice.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>

#include "pbos/utf8.h"

namespace pbos {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double LogAdd(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// Probability of every span w[i:j) of a word, looked up once.
class SpanProbs {
 public:
  SpanProbs(std::string_view word, const SubwordTable& table)
      : word_(word), offsets_(utf8::CharBoundaries(word)) {
    if (word.empty()) throw std::invalid_argument("empty word");
    len_ = offsets_.size() - 1;
    if (len_ > kMaxLatticeLength) {
      throw std::invalid_argument("word longer than " +
                                  std::to_string(kMaxLatticeLength) +
                                  " characters");
    }
    probs_.assign(len_ * (len_ + 1), 0.0);
    keys_.assign(len_ * (len_ + 1), 0);
    for (std::size_t i = 0; i < len_; ++i) {
      // Walk the table's trie from each start, one character per step.
      SubwordTable::Node node = SubwordTable::kRoot;
      for (std::size_t j = i + 1; j <= len_; ++j) {
        const std::optional<SubwordTable::Node> next =
            table.Extend(node, Span(j - 1, j));
        if (next && table.NodeProb(*next) > 0.0) {
          At(i, j) = table.NodeProb(*next);
          keys_[i * (len_ + 1) + j] = *next;
        } else if (j == i + 1) {
          At(i, j) = table.prob_eps();
          keys_[i * (len_ + 1) + j] = kUnstoredChar | CharBits(i);
        }
        // No stored string extends a missing prefix.
        if (!next) break;
        node = *next;
      }
    }
  }

  std::size_t size() const { return len_; }
  double operator()(std::size_t i, std::size_t j) const {
    return probs_[i * (len_ + 1) + j];
  }
  std::string_view Span(std::size_t i, std::size_t j) const {
    return word_.substr(offsets_[i], offsets_[j] - offsets_[i]);
  }
  // Equal for two spans exactly when they spell the same subword; only
  // meaningful where the span probability is nonzero.
  std::uint64_t Key(std::size_t i, std::size_t j) const {
    return keys_[i * (len_ + 1) + j];
  }

 private:
  double& At(std::size_t i, std::size_t j) {
    return probs_[i * (len_ + 1) + j];
  }

  // Stored spans are keyed by trie node; a single character missing from
  // the table is keyed by its bytes with the top bit set.
  static constexpr std::uint64_t kUnstoredChar = std::uint64_t{1} << 63;
  std::uint64_t CharBits(std::size_t i) const {
    std::uint64_t bits = 0;
    for (const char c : Span(i, i + 1)) {
      bits = bits << 8 | static_cast<unsigned char>(c);
    }
    return bits;
  }

  std::string_view word_;
  std::vector<std::size_t> offsets_;
  std::size_t len_ = 0;
  std::vector<double> probs_;
  std::vector<std::uint64_t> keys_;
};

std::vector<double> Forward(const SpanProbs& p) {
  const std::size_t l = p.size();
  std::vector<double> f(l + 1, 0.0);
  f[0] = 1.0;
  for (std::size_t j = 1; j <= l; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < j; ++i) sum += f[i] * p(i, j);
    f[j] = sum;
  }
  return f;
}

std::vector<double> Backward(const SpanProbs& p) {
  const std::size_t l = p.size();
  std::vector<double> b(l + 1, 0.0);
  b[l] = 1.0;
  for (std::size_t i = l; i-- > 0;) {
    double sum = 0.0;
    for (std::size_t j = i + 1; j <= l; ++j) sum += p(i, j) * b[j];
    b[i] = sum;
  }
  return b;
}

std::vector<double> LogForward(const SpanProbs& p) {
  const std::size_t l = p.size();
  std::vector<double> f(l + 1, kNegInf);
  f[0] = 0.0;
  for (std::size_t j = 1; j <= l; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (p(i, j) > 0.0) f[j] = LogAdd(f[j], f[i] + std::log(p(i, j)));
    }
  }
  return f;
}

std::vector<double> LogBackward(const SpanProbs& p) {
  const std::size_t l = p.size();
  std::vector<double> b(l + 1, kNegInf);
  b[l] = 0.0;
  for (std::size_t i = l; i-- > 0;) {
    for (std::size_t j = i + 1; j <= l; ++j) {
      if (p(i, j) > 0.0) b[i] = LogAdd(b[i], std::log(p(i, j)) + b[j]);
    }
  }
  return b;
}

double LogPartition(const SpanProbs& p) {
  const double z = Forward(p).back();
  if (z >= std::numeric_limits<double>::min()) return std::log(z);
  return LogForward(p).back();
}

// Accumulates per-occurrence scores into distinct subwords, keeping first
// occurrence order.
class WeightAccumulator {
 public:
  void Add(std::uint64_t key, std::string_view sub, double value) {
    auto [it, inserted] = index_.try_emplace(key, subwords_.size());
    if (inserted) {
      subwords_.push_back(sub);
      values_.push_back(value);
    } else {
      values_[it->second] += value;
    }
  }
  std::vector<std::string_view>& subwords() { return subwords_; }
  std::vector<double>& values() { return values_; }

 private:
  std::unordered_map<std::uint64_t, std::size_t> index_;
  std::vector<std::string_view> subwords_;
  std::vector<double> values_;
};

}  // namespace

std::string Segmentation::Joined() const {
  std::string out;
  for (const auto& s : segments) out += s;
  return out;
}

std::string Segmentation::ToString() const {
  std::string out;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (i > 0) out.push_back('/');
    out += segments[i];
  }
  return out;
}

double LatticeResult::WeightOf(std::string_view s) const {
  for (const auto& entry : weights) {
    if (entry.subword == s) return entry.weight;
  }
  return 0.0;
}

std::vector<double> ForwardSums(std::string_view word,
                                const SubwordTable& table) {
  return Forward(SpanProbs(word, table));
}

std::vector<double> BackwardSums(std::string_view word,
                                 const SubwordTable& table) {
  return Backward(SpanProbs(word, table));
}

double Partition(std::string_view word, const SubwordTable& table) {
  return Forward(SpanProbs(word, table)).back();
}

LatticeResult SubwordWeights(std::string_view word,
                             const SubwordTable& table) {
  const SpanProbs p(word, table);
  const std::size_t l = p.size();

  LatticeResult result;
  result.word = std::string(word);
  result.forward = Forward(p);
  result.backward = Backward(p);
  result.partition = result.forward[l];

  WeightAccumulator acc;
  if (result.partition >= std::numeric_limits<double>::min()) {
    result.log_partition = std::log(result.partition);
    double total = 0.0;
    for (std::size_t i = 0; i < l; ++i) {
      for (std::size_t j = i + 1; j <= l; ++j) {
        const double score = p(i, j) * result.forward[i] * result.backward[j];
        if (score == 0.0) continue;
        acc.Add(p.Key(i, j), p.Span(i, j), score);
        total += score;
      }
    }
    for (double& v : acc.values()) v /= total;
  } else {
    // Products of many small probabilities underflowed; redo in log space.
    result.log_space = true;
    const std::vector<double> lf = LogForward(p);
    const std::vector<double> lb = LogBackward(p);
    result.log_partition = lf[l];
    double log_total = kNegInf;
    for (std::size_t i = 0; i < l; ++i) {
      for (std::size_t j = i + 1; j <= l; ++j) {
        if (p(i, j) == 0.0) continue;
        const double score = std::log(p(i, j)) + lf[i] + lb[j];
        if (score == kNegInf) continue;
        log_total = LogAdd(log_total, score);
      }
    }
    for (std::size_t i = 0; i < l; ++i) {
      for (std::size_t j = i + 1; j <= l; ++j) {
        if (p(i, j) == 0.0) continue;
        const double score = std::log(p(i, j)) + lf[i] + lb[j];
        if (score == kNegInf) continue;
        acc.Add(p.Key(i, j), p.Span(i, j),
                std::exp(score - log_total));
      }
    }
  }

  result.weights.reserve(acc.subwords().size());
  for (std::size_t k = 0; k < acc.subwords().size(); ++k) {
    result.weights.push_back(
        {std::string(acc.subwords()[k]), acc.values()[k]});
  }
  return result;
}

double SegmentationLikelihood(std::string_view word, const Segmentation& seg,
                              const SubwordTable& table) {
  if (word.empty()) throw std::invalid_argument("empty word");
  for (const auto& s : seg.segments) {
    if (s.empty()) throw std::invalid_argument("empty segment");
  }
  if (seg.Joined() != word) {
    throw std::invalid_argument("segmentation '" + seg.ToString() +
                                "' does not spell '" + std::string(word) +
                                "'");
  }
  double log_mass = 0.0;
  for (const auto& s : seg.segments) {
    const double prob = table.Lookup(s);
    if (prob == 0.0) return 0.0;
    log_mass += std::log(prob);
  }
  return std::exp(log_mass - LogPartition(SpanProbs(word, table)));
}

std::vector<ScoredSegmentation> TopKSegmentations(std::string_view word,
                                                  const SubwordTable& table,
                                                  std::size_t k) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  const SpanProbs p(word, table);
  const std::size_t l = p.size();
  const double log_z = LogPartition(p);

  // A partial path ending at some node: its last edge starts at prev_node,
  // extending the prev_rank-th best path into prev_node.
  struct Entry {
    double log_score;
    std::size_t segments;
    std::size_t prev_node;
    std::size_t prev_rank;
  };
  std::vector<std::vector<Entry>> best(l + 1);
  best[0].push_back({0.0, 0, 0, 0});

  // Cut positions of the path (node, rank), from 0 to node.
  auto cuts_of = [&best](std::size_t node, std::size_t rank) {
    std::vector<std::size_t> cuts{node};
    while (node != 0) {
      const Entry& e = best[node][rank];
      node = e.prev_node;
      rank = e.prev_rank;
      cuts.push_back(node);
    }
    std::reverse(cuts.begin(), cuts.end());
    return cuts;
  };
  auto lex_less = [&p](const std::vector<std::size_t>& a,
                       const std::vector<std::size_t>& b) {
    for (std::size_t t = 0; t + 1 < a.size() && t + 1 < b.size(); ++t) {
      const std::string_view sa = p.Span(a[t], a[t + 1]);
      const std::string_view sb = p.Span(b[t], b[t + 1]);
      if (sa != sb) return sa < sb;
    }
    return a.size() < b.size();
  };

  struct Candidate {
    Entry entry;
    std::size_t node;
  };
  std::vector<Candidate> candidates;
  for (std::size_t j = 1; j <= l; ++j) {
    candidates.clear();
    for (std::size_t i = 0; i < j; ++i) {
      if (p(i, j) == 0.0) continue;
      const double log_edge = std::log(p(i, j));
      for (std::size_t r = 0; r < best[i].size(); ++r) {
        const Entry& prev = best[i][r];
        candidates.push_back(
            {{prev.log_score + log_edge, prev.segments + 1, i, r}, j});
      }
    }
    // Full path comparison is needed only on exact score and length ties.
    auto better = [&](const Candidate& a, const Candidate& b) {
      if (a.entry.log_score != b.entry.log_score) {
        return a.entry.log_score > b.entry.log_score;
      }
      if (a.entry.segments != b.entry.segments) {
        return a.entry.segments < b.entry.segments;
      }
      std::vector<std::size_t> ca =
          cuts_of(a.entry.prev_node, a.entry.prev_rank);
      std::vector<std::size_t> cb =
          cuts_of(b.entry.prev_node, b.entry.prev_rank);
      ca.push_back(j);
      cb.push_back(j);
      return lex_less(ca, cb);
    };
    const std::size_t keep = std::min(k, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + keep,
                      candidates.end(), better);
    for (std::size_t r = 0; r < keep; ++r) {
      best[j].push_back(candidates[r].entry);
    }
  }

  std::vector<ScoredSegmentation> out;
  out.reserve(best[l].size());
  for (std::size_t r = 0; r < best[l].size(); ++r) {
    const std::vector<std::size_t> cuts = cuts_of(l, r);
    ScoredSegmentation scored;
    for (std::size_t t = 0; t + 1 < cuts.size(); ++t) {
      scored.segmentation.segments.emplace_back(p.Span(cuts[t], cuts[t + 1]));
    }
    scored.probability = std::exp(best[l][r].log_score - log_z);
    out.push_back(std::move(scored));
  }
  return out;
}

std::vector<Segmentation> EnumerateAllSegmentations(std::string_view word) {
  if (word.empty()) throw std::invalid_argument("empty word");
  const std::vector<std::size_t> offsets = utf8::CharBoundaries(word);
  const std::size_t l = offsets.size() - 1;
  if (l > kMaxEnumerationLength) {
    throw std::invalid_argument("word longer than " +
                                std::to_string(kMaxEnumerationLength) +
                                " characters cannot be enumerated");
  }
  const std::uint32_t count = std::uint32_t{1} << (l - 1);
  std::vector<Segmentation> all;
  all.reserve(count);
  // Bit t of mask set means a cut after character t + 1.
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    Segmentation seg;
    std::size_t start = 0;
    for (std::size_t t = 1; t <= l; ++t) {
      if (t == l || (mask >> (t - 1)) & 1u) {
        seg.segments.emplace_back(
            word.substr(offsets[start], offsets[t] - offsets[start]));
        start = t;
      }
    }
    all.push_back(std::move(seg));
  }
  return all;
}

}  // namespace pbos
