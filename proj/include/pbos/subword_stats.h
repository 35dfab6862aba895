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

#ifndef PBOS_SUBWORD_STATS_H_
#define PBOS_SUBWORD_STATS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pbos {

struct WordFreq {
  std::string word;
  std::uint64_t count = 0;
};

using WordFreqList = std::vector<WordFreq>;

// Sums the counts of repeated words. Output keeps first-occurrence order.
WordFreqList MergeDuplicates(const WordFreqList& freqs);

// Transparent hash so maps keyed by std::string accept std::string_view.
struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

template <typename V>
using StringMap =
    std::unordered_map<std::string, V, StringHash, std::equal_to<>>;

// Probability that a subword appears in the language, estimated from word
// frequencies by counting every substring occurrence weighted by the count
// of the word that contains it. Raw counts are divided by the grand total
// over all occurrences, so stored probabilities sum to one.
//
// Single characters missing from the table fall back to prob_eps, so every
// string has at least one segmentation with nonzero likelihood. Missing
// strings of two or more characters have probability zero.
//
// Immutable after construction; safe for concurrent reads.
class SubwordTable {
 public:
  static constexpr double kDefaultProbEps = 0.01;

  SubwordTable() = default;

  // Counts substrings of at most max_len characters (unbounded if absent).
  // Throws std::invalid_argument for an empty list, an empty word, a list
  // whose counts are all zero, prob_eps outside (0, 1) or max_len < 1.
  static SubwordTable Build(const WordFreqList& freqs,
                            std::optional<int> max_len = std::nullopt,
                            double prob_eps = kDefaultProbEps);

  // Wraps explicit probabilities. Every value must lie in (0, 1].
  static SubwordTable FromProbs(
      StringMap<double> probs, double prob_eps = kDefaultProbEps,
      std::optional<int> max_len = std::nullopt,
      std::optional<double> total_mass = std::nullopt);

  // Stored probability, else prob_eps for a single character, else 0.
  // Throws std::invalid_argument for an empty string.
  double Lookup(std::string_view s) const;

  // As Lookup, for callers that already know the character length of a
  // nonempty s.
  double Lookup(std::string_view s, std::size_t char_len) const noexcept {
    if (auto it = probs_.find(s); it != probs_.end()) return it->second;
    return char_len == 1 ? prob_eps_ : 0.0;
  }

  std::optional<double> Stored(std::string_view s) const;

  const StringMap<double>& probs() const { return probs_; }
  double prob_eps() const { return prob_eps_; }
  std::optional<int> max_len() const { return max_len_; }
  std::optional<double> total_mass() const { return total_mass_; }
  std::size_t size() const { return probs_.size(); }
  bool empty() const { return probs_.empty(); }

  // True when every proper prefix of a stored string is stored as well.
  // Tables built from frequencies always satisfy this.
  bool prefix_closed() const { return prefix_closed_; }

  // Byte trie over the stored subwords, so a caller can extend a string one
  // character at a time at constant cost per byte. Node kRoot spells the
  // empty string.
  using Node = std::uint32_t;
  static constexpr Node kRoot = 0;

  // The node spelling node's string followed by bytes, or nullopt if no
  // stored subword starts that way.
  std::optional<Node> Extend(Node node, std::string_view bytes) const;

  // Stored probability of the string node spells, or 0 if only a longer
  // subword passes through it.
  double NodeProb(Node node) const { return node_prob_[node]; }

  // Entries sorted by descending probability, then by subword.
  std::vector<std::pair<std::string, double>> SortedEntries() const;

 private:
  StringMap<double> probs_;
  double prob_eps_ = kDefaultProbEps;
  std::optional<int> max_len_;
  std::optional<double> total_mass_;
  bool prefix_closed_ = true;

  void BuildTrie();

  std::vector<double> node_prob_ = {0.0};
  // Keyed by parent node << 8 | byte.
  std::unordered_map<std::uint64_t, Node> edges_;
};

}  // namespace pbos

#endif  // PBOS_SUBWORD_STATS_H_
