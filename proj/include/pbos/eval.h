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

#ifndef PBOS_EVAL_H_
#define PBOS_EVAL_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pbos/embedding_model.h"
#include "pbos/subword_stats.h"
#include "pbos/vectors.h"

namespace pbos {

// ---- Word similarity ------------------------------------------------------

struct SimilarityPair {
  std::string word1;
  std::string word2;
  double human_score = 0.0;
};

// Ranks starting at 1; tied values share the average of their ranks.
std::vector<double> AverageRanks(std::span<const double> values);

// Spearman rank correlation with average ranks for ties. Throws
// std::invalid_argument on a length mismatch, fewer than two pairs, or a
// constant input (zero rank variance).
double Spearman(std::span<const double> xs, std::span<const double> ys);

struct SimilarityOptions {
  // Vectors with a smaller L2 norm are treated as missing.
  double norm_floor = 1e-8;
  bool lowercase = true;
};

struct SimilarityReport {
  std::size_t pairs = 0;
  // Pairs scored 0 because a vector was missing or below norm_floor.
  std::size_t zeroed_pairs = 0;
  double spearman = 0.0;
};

// Returns the vector for a word, or nullopt if it has none.
using VectorLookup = std::function<std::optional<Vector>(std::string_view)>;

// Scores each pair by the cosine of the two word vectors (0 if either is
// missing or too small) and correlates with the human scores.
SimilarityReport WordSimilarity(const VectorLookup& lookup,
                                std::span<const SimilarityPair> pairs,
                                const SimilarityOptions& options = {});
SimilarityReport WordSimilarity(const PbosModel& model,
                                std::span<const SimilarityPair> pairs,
                                const SimilarityOptions& options = {});

// ---- Affix prediction -----------------------------------------------------

enum class AffixKind { kPrefix, kSuffix };

struct Affix {
  std::string label;  // as written in the inventory, e.g. "re" or "-able"
  std::string text;   // label without leading/trailing '-'
  AffixKind kind = AffixKind::kPrefix;
};

using AffixInventory = std::vector<Affix>;

Affix MakeAffix(std::string label, AffixKind kind);

struct AffixInstance {
  std::string word;
  std::string gold;  // an inventory label
};

// A prefix is possible if the word starts with it and is strictly longer;
// likewise for a suffix at the end.
bool IsPossibleAffix(std::string_view word, const Affix& affix);
std::vector<const Affix*> PossibleAffixes(std::string_view word,
                                          const AffixInventory& inventory);

// Drops words with fewer than two possible affixes and words whose gold
// label is the suffix "y".
std::vector<AffixInstance> FilterAffixDataset(
    std::span<const AffixInstance> instances, const AffixInventory& inventory);

// The possible affix whose text has the highest lattice weight in the word.
// Ties go to the higher subword probability, then the smaller label.
// Throws std::invalid_argument if no affix is possible.
std::string PredictAffixPbos(const SubwordTable& table, std::string_view word,
                             const AffixInventory& inventory);

// Uniform choice among the possible affixes.
std::string PredictAffixRandom(std::string_view word,
                               const AffixInventory& inventory,
                               std::mt19937_64& rng);
std::string PredictAffixRandom(std::string_view word,
                               const AffixInventory& inventory,
                               std::uint64_t seed);

struct PrfScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Unweighted mean over labels of per-label precision, recall and F1. A
// per-label score with a zero denominator counts as 0.
PrfScores MacroPrf(std::span<const std::string> golds,
                   std::span<const std::string> predictions,
                   std::span<const std::string> labels);

struct AffixReport {
  std::size_t instances = 0;  // after filtering
  std::vector<std::string> labels;
  PrfScores pbos;
  PrfScores random;
};

// Filters the dataset, predicts with both predictors and scores them over
// the gold labels that remain.
AffixReport EvaluateAffixes(const SubwordTable& table,
                            std::span<const AffixInstance> instances,
                            const AffixInventory& inventory,
                            std::uint64_t seed, bool filter = true);

}  // namespace pbos

#endif  // PBOS_EVAL_H_
