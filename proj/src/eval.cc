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

#include "pbos/eval.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "pbos/lattice.h"
#include "pbos/utf8.h"

namespace pbos {

std::vector<double> AverageRanks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto by_value = [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  };
  std::stable_sort(order.begin(), order.end(), by_value);
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 hold equal values; ranks are 1-based.
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) ranks[order[t]] = rank;
    i = j;
  }
  return ranks;
}

double Spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("spearman: length mismatch");
  }
  if (xs.size() < 2) throw std::invalid_argument("spearman: need two pairs");
  const std::vector<double> rx = AverageRanks(xs);
  const std::vector<double> ry = AverageRanks(ys);
  const double n = static_cast<double>(rx.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw std::invalid_argument("spearman: constant input has no ranking");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

SimilarityReport WordSimilarity(const VectorLookup& lookup,
                                std::span<const SimilarityPair> pairs,
                                const SimilarityOptions& options) {
  if (pairs.empty()) throw std::invalid_argument("no similarity pairs");
  SimilarityReport report;
  report.pairs = pairs.size();
  std::vector<double> model_scores;
  std::vector<double> human_scores;
  model_scores.reserve(pairs.size());
  human_scores.reserve(pairs.size());
  auto fetch = [&](const std::string& word) -> std::optional<Vector> {
    auto v = lookup(options.lowercase ? utf8::Lowercase(word) : word);
    if (!v || v->norm() < options.norm_floor) return std::nullopt;
    return v;
  };
  for (const auto& pair : pairs) {
    const std::optional<Vector> a = fetch(pair.word1);
    const std::optional<Vector> b = fetch(pair.word2);
    double score = 0.0;
    if (a && b) {
      score = a->dot(*b) / (a->norm() * b->norm());
    } else {
      ++report.zeroed_pairs;
    }
    model_scores.push_back(score);
    human_scores.push_back(pair.human_score);
  }
  report.spearman = Spearman(model_scores, human_scores);
  return report;
}

SimilarityReport WordSimilarity(const PbosModel& model,
                                std::span<const SimilarityPair> pairs,
                                const SimilarityOptions& options) {
  return WordSimilarity(
      [&model](std::string_view word) -> std::optional<Vector> {
        if (word.empty()) return std::nullopt;
        return model.Compose(word);
      },
      pairs, options);
}

Affix MakeAffix(std::string label, AffixKind kind) {
  std::string_view text(label);
  while (!text.empty() && text.front() == '-') text.remove_prefix(1);
  while (!text.empty() && text.back() == '-') text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty affix '" + label + "'");
  Affix affix;
  affix.text = std::string(text);
  affix.label = std::move(label);
  affix.kind = kind;
  return affix;
}

bool IsPossibleAffix(std::string_view word, const Affix& affix) {
  if (word.size() <= affix.text.size()) return false;
  return affix.kind == AffixKind::kPrefix ? word.starts_with(affix.text)
                                          : word.ends_with(affix.text);
}

std::vector<const Affix*> PossibleAffixes(std::string_view word,
                                          const AffixInventory& inventory) {
  std::vector<const Affix*> out;
  for (const auto& affix : inventory) {
    if (IsPossibleAffix(word, affix)) out.push_back(&affix);
  }
  return out;
}

std::vector<AffixInstance> FilterAffixDataset(
    std::span<const AffixInstance> instances, const AffixInventory& inventory) {
  std::vector<AffixInstance> kept;
  for (const auto& instance : instances) {
    const auto gold = std::find_if(
        inventory.begin(), inventory.end(),
        [&](const Affix& a) { return a.label == instance.gold; });
    // -y is contained in -ly and -ity.
    if (gold != inventory.end() && gold->kind == AffixKind::kSuffix &&
        gold->text == "y") {
      continue;
    }
    if (PossibleAffixes(instance.word, inventory).size() < 2) continue;
    kept.push_back(instance);
  }
  return kept;
}

std::string PredictAffixPbos(const SubwordTable& table, std::string_view word,
                             const AffixInventory& inventory) {
  const std::vector<const Affix*> candidates = PossibleAffixes(word, inventory);
  if (candidates.empty()) {
    throw std::invalid_argument("no possible affix for '" + std::string(word) +
                                "'");
  }
  const LatticeResult lattice = SubwordWeights(word, table);
  const Affix* best = nullptr;
  double best_weight = 0.0;
  double best_prob = 0.0;
  for (const Affix* affix : candidates) {
    const double weight = lattice.WeightOf(affix->text);
    const double prob = table.Lookup(affix->text);
    const bool better =
        best == nullptr || weight > best_weight ||
        (weight == best_weight &&
         (prob > best_prob ||
          (prob == best_prob && affix->label < best->label)));
    if (better) {
      best = affix;
      best_weight = weight;
      best_prob = prob;
    }
  }
  return best->label;
}

std::string PredictAffixRandom(std::string_view word,
                               const AffixInventory& inventory,
                               std::mt19937_64& rng) {
  const std::vector<const Affix*> candidates = PossibleAffixes(word, inventory);
  if (candidates.empty()) {
    throw std::invalid_argument("no possible affix for '" + std::string(word) +
                                "'");
  }
  std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
  return candidates[pick(rng)]->label;
}

std::string PredictAffixRandom(std::string_view word,
                               const AffixInventory& inventory,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return PredictAffixRandom(word, inventory, rng);
}

PrfScores MacroPrf(std::span<const std::string> golds,
                   std::span<const std::string> predictions,
                   std::span<const std::string> labels) {
  if (golds.size() != predictions.size()) {
    throw std::invalid_argument("macro_prf: length mismatch");
  }
  if (labels.empty()) return {};
  struct Counts {
    std::size_t tp = 0, predicted = 0, gold = 0;
  };
  std::unordered_map<std::string_view, Counts> counts;
  for (const auto& label : labels) counts[label];
  for (std::size_t i = 0; i < golds.size(); ++i) {
    if (auto it = counts.find(predictions[i]); it != counts.end()) {
      ++it->second.predicted;
      if (predictions[i] == golds[i]) ++it->second.tp;
    }
    if (auto it = counts.find(golds[i]); it != counts.end()) ++it->second.gold;
  }
  PrfScores macro;
  for (const auto& label : labels) {
    const Counts& c = counts[label];
    const double p = c.predicted ? double(c.tp) / double(c.predicted) : 0.0;
    const double r = c.gold ? double(c.tp) / double(c.gold) : 0.0;
    const double f = (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
    macro.precision += p;
    macro.recall += r;
    macro.f1 += f;
  }
  const double n = static_cast<double>(labels.size());
  macro.precision /= n;
  macro.recall /= n;
  macro.f1 /= n;
  return macro;
}

AffixReport EvaluateAffixes(const SubwordTable& table,
                            std::span<const AffixInstance> instances,
                            const AffixInventory& inventory,
                            std::uint64_t seed, bool filter) {
  std::vector<AffixInstance> kept =
      filter ? FilterAffixDataset(instances, inventory)
             : std::vector<AffixInstance>(instances.begin(), instances.end());
  AffixReport report;
  std::set<std::string> labels;
  std::vector<std::string> golds, pbos, random;
  std::mt19937_64 rng(seed);
  for (const auto& instance : kept) {
    if (PossibleAffixes(instance.word, inventory).empty()) continue;
    labels.insert(instance.gold);
    golds.push_back(instance.gold);
    pbos.push_back(PredictAffixPbos(table, instance.word, inventory));
    random.push_back(PredictAffixRandom(instance.word, inventory, rng));
  }
  report.instances = golds.size();
  report.labels.assign(labels.begin(), labels.end());
  report.pbos = MacroPrf(golds, pbos, report.labels);
  report.random = MacroPrf(golds, random, report.labels);
  return report;
}

}  // namespace pbos
