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

#ifndef PBOS_LATTICE_H_
#define PBOS_LATTICE_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "pbos/subword_stats.h"

namespace pbos {

// Words longer than this (in characters) are rejected by the lattice.
inline constexpr std::size_t kMaxLatticeLength = 1000;
// Exhaustive enumeration is exponential; capped separately.
inline constexpr std::size_t kMaxEnumerationLength = 20;

// An ordered split of a word into nonempty subwords.
struct Segmentation {
  std::vector<std::string> segments;

  std::string Joined() const;
  // Segments separated by '/', e.g. "high/er".
  std::string ToString() const;

  friend bool operator==(const Segmentation&, const Segmentation&) = default;
};

struct SubwordWeight {
  std::string subword;
  double weight = 0.0;
};

// Everything the lattice computes for one word of l characters.
//
//   forward[i]  mass of all segmentations of the first i characters,
//               forward[0] = 1, forward[l] = partition.
//   backward[i] mass of all segmentations of characters i..l-1 (0-based),
//               backward[l] = 1, backward[0] = partition.
//
// The mass of a segmentation is the product of its segment probabilities.
// weights holds every distinct subword with nonzero weight, in order of
// first occurrence (by start, then end). Repeated occurrences of a subword
// are accumulated into a single entry.
struct LatticeResult {
  std::string word;
  std::vector<double> forward;
  std::vector<double> backward;
  double partition = 0.0;
  double log_partition = 0.0;
  // Set when the linear sums underflowed and weights came from log sums.
  // forward, backward and partition may then contain zeros.
  bool log_space = false;
  std::vector<SubwordWeight> weights;

  // Weight of s, or 0 if s does not occur in the word.
  double WeightOf(std::string_view s) const;
};

std::vector<double> ForwardSums(std::string_view word,
                                const SubwordTable& table);
std::vector<double> BackwardSums(std::string_view word,
                                 const SubwordTable& table);

// Normalized marginal weight of every subword over all segmentations, in
// O(l^2) arithmetic.
LatticeResult SubwordWeights(std::string_view word, const SubwordTable& table);

// Sum over all segmentations of the product of segment probabilities.
double Partition(std::string_view word, const SubwordTable& table);

// Normalized likelihood of one segmentation. Throws std::invalid_argument if
// the segments do not spell the word.
double SegmentationLikelihood(std::string_view word, const Segmentation& seg,
                              const SubwordTable& table);

struct ScoredSegmentation {
  Segmentation segmentation;
  double probability = 0.0;
};

// The k most likely segmentations, best first. Ties are broken by fewer
// segments, then by lexicographic order of the segment sequence.
std::vector<ScoredSegmentation> TopKSegmentations(std::string_view word,
                                                  const SubwordTable& table,
                                                  std::size_t k);

// All 2^(l-1) segmentations. Throws std::invalid_argument past
// kMaxEnumerationLength characters.
std::vector<Segmentation> EnumerateAllSegmentations(std::string_view word);

}  // namespace pbos

#endif  // PBOS_LATTICE_H_
