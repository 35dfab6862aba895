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

#include "pbos/subword_stats.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "pbos/utf8.h"

namespace pbos {
namespace {

void CheckProbEps(double prob_eps) {
  if (!(prob_eps > 0.0 && prob_eps < 1.0)) {
    throw std::invalid_argument("prob_eps must lie in (0, 1)");
  }
}

void CheckMaxLen(std::optional<int> max_len) {
  if (max_len && *max_len < 1) {
    throw std::invalid_argument("max_len must be at least 1");
  }
}

}  // namespace

WordFreqList MergeDuplicates(const WordFreqList& freqs) {
  WordFreqList merged;
  StringMap<std::size_t> position;
  for (const auto& entry : freqs) {
    if (auto it = position.find(entry.word); it != position.end()) {
      merged[it->second].count += entry.count;
    } else {
      position.emplace(entry.word, merged.size());
      merged.push_back(entry);
    }
  }
  return merged;
}

SubwordTable SubwordTable::Build(const WordFreqList& freqs,
                                 std::optional<int> max_len, double prob_eps) {
  CheckProbEps(prob_eps);
  CheckMaxLen(max_len);
  const WordFreqList merged = MergeDuplicates(freqs);
  if (merged.empty()) throw std::invalid_argument("empty frequency list");

  StringMap<double> raw;
  double total = 0.0;
  for (const auto& [word, count] : merged) {
    if (word.empty()) throw std::invalid_argument("word has no characters");
    const std::vector<std::size_t> offsets = utf8::CharBoundaries(word);
    if (count == 0) continue;
    const std::size_t len = offsets.size() - 1;
    const std::size_t span_cap =
        max_len ? static_cast<std::size_t>(*max_len) : len;
    const auto weight = static_cast<double>(count);
    const std::string_view view(word);
    for (std::size_t i = 0; i < len; ++i) {
      const std::size_t last = std::min(len, i + span_cap);
      for (std::size_t j = i + 1; j <= last; ++j) {
        const std::string_view sub =
            view.substr(offsets[i], offsets[j] - offsets[i]);
        if (auto it = raw.find(sub); it != raw.end()) {
          it->second += weight;
        } else {
          raw.emplace(std::string(sub), weight);
        }
        total += weight;
      }
    }
  }
  if (total <= 0.0) {
    throw std::invalid_argument("all frequency counts are zero");
  }

  SubwordTable table;
  for (auto& [sub, value] : raw) value /= total;
  table.probs_ = std::move(raw);
  table.prob_eps_ = prob_eps;
  table.max_len_ = max_len;
  table.total_mass_ = total;
  table.prefix_closed_ = true;
  table.BuildTrie();
  return table;
}

SubwordTable SubwordTable::FromProbs(StringMap<double> probs, double prob_eps,
                                     std::optional<int> max_len,
                                     std::optional<double> total_mass) {
  CheckProbEps(prob_eps);
  CheckMaxLen(max_len);
  for (const auto& [sub, p] : probs) {
    if (sub.empty()) throw std::invalid_argument("empty subword in table");
    if (!utf8::IsValid(sub)) {
      throw std::invalid_argument("subword is not valid UTF-8");
    }
    if (!(p > 0.0 && p <= 1.0)) {
      throw std::invalid_argument("probability of '" + sub +
                                  "' is outside (0, 1]");
    }
  }
  SubwordTable table;
  table.prefix_closed_ = std::all_of(
      probs.begin(), probs.end(), [&probs](const auto& entry) {
        const std::vector<std::size_t> offsets =
            utf8::CharBoundaries(entry.first);
        const std::string_view view(entry.first);
        for (std::size_t j = 1; j + 1 < offsets.size(); ++j) {
          if (!probs.contains(view.substr(0, offsets[j]))) return false;
        }
        return true;
      });
  table.probs_ = std::move(probs);
  table.prob_eps_ = prob_eps;
  table.max_len_ = max_len;
  table.total_mass_ = total_mass;
  table.BuildTrie();
  return table;
}

void SubwordTable::BuildTrie() {
  node_prob_.assign(1, 0.0);
  edges_.clear();
  edges_.reserve(probs_.size());
  for (const auto& [sub, p] : probs_) {
    Node node = kRoot;
    for (const char c : sub) {
      if (node_prob_.size() >= std::numeric_limits<Node>::max()) {
        throw std::length_error("subword table too large");
      }
      const std::uint64_t key = std::uint64_t{node} << 8 |
                                static_cast<unsigned char>(c);
      auto [it, inserted] =
          edges_.try_emplace(key, static_cast<Node>(node_prob_.size()));
      if (inserted) node_prob_.push_back(0.0);
      node = it->second;
    }
    node_prob_[node] = p;
  }
}

std::optional<SubwordTable::Node> SubwordTable::Extend(
    Node node, std::string_view bytes) const {
  for (const char c : bytes) {
    const auto it = edges_.find(std::uint64_t{node} << 8 |
                                static_cast<unsigned char>(c));
    if (it == edges_.end()) return std::nullopt;
    node = it->second;
  }
  return node;
}

double SubwordTable::Lookup(std::string_view s) const {
  if (s.empty()) throw std::invalid_argument("lookup of empty subword");
  if (auto it = probs_.find(s); it != probs_.end()) return it->second;
  return utf8::Length(s) == 1 ? prob_eps_ : 0.0;
}

std::optional<double> SubwordTable::Stored(std::string_view s) const {
  if (auto it = probs_.find(s); it != probs_.end()) return it->second;
  return std::nullopt;
}

std::vector<std::pair<std::string, double>> SubwordTable::SortedEntries()
    const {
  std::vector<std::pair<std::string, double>> entries(probs_.begin(),
                                                      probs_.end());
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return entries;
}

}  // namespace pbos
