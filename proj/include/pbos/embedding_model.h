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

#ifndef PBOS_EMBEDDING_MODEL_H_
#define PBOS_EMBEDDING_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pbos/lattice.h"
#include "pbos/subword_stats.h"
#include "pbos/vectors.h"

namespace pbos {

enum class Variant {
  kPbos,   // lattice-weighted sum of subword vectors
  kBos,    // mean over bounded, boundary-marked n-gram occurrences
  kPbosN,  // as kPbos over L2-normalized subword vectors
};

std::string_view VariantName(Variant v);
std::optional<Variant> ParseVariant(std::string_view name);

// Word boundary markers for BoS n-grams (U+27E8, U+27E9).
inline constexpr std::string_view kBeginOfWord = "⟨";
inline constexpr std::string_view kEndOfWord = "⟩";

struct TrainConfig {
  int epochs = 50;
  double lr = 1.0;
  // Learning rate lr / sqrt(e) in epoch e = 1, 2, ...
  bool lr_decay = true;
  Variant variant = Variant::kPbos;
  int bos_min_len = 3;
  int bos_max_len = 6;
  // Unset means on for kBos; ignored by the other variants.
  std::optional<bool> bos_word_boundary;
  std::uint64_t seed = 1;

  bool WordBoundary() const {
    return bos_word_boundary.value_or(variant == Variant::kBos);
  }
  double LearningRate(int epoch) const;
  // Throws std::invalid_argument on out-of-range fields.
  void Validate() const;
};

// Distinct n-grams of lengths [min_len, max_len] (in characters) of the word,
// optionally wrapped in boundary markers. Each weight is the occurrence count.
std::vector<SubwordWeight> BosSubwords(std::string_view word, int min_len,
                                       int max_len, bool word_boundary);

class PbosModel {
 public:
  PbosModel(SubwordTable table, SubwordEmbeddings embeddings,
            TrainConfig config);

  // Word vector composed from subword vectors; subwords without a stored
  // vector contribute nothing. Any nonempty string is composable.
  Vector Compose(std::string_view word) const;

  // Subwords of word with their composition coefficients.
  std::vector<SubwordWeight> Coefficients(std::string_view word) const;

  std::size_t dim() const { return embeddings_.dim(); }
  const SubwordTable& table() const { return table_; }
  const SubwordEmbeddings& embeddings() const { return embeddings_; }
  SubwordEmbeddings& embeddings() { return embeddings_; }
  const TrainConfig& config() const { return config_; }

 private:
  SubwordTable table_;
  SubwordEmbeddings embeddings_;
  TrainConfig config_;
};

struct TrainResult {
  PbosModel model;
  // Mean-square loss over the targets after each epoch.
  std::vector<double> epoch_losses;
};

using EpochCallback = std::function<void(int epoch, double loss)>;

// Fits subword vectors to the targets by per-word SGD. Subword vectors start
// at zero; the visiting order is reshuffled every epoch from config.seed.
// Throws std::invalid_argument for empty targets or a bad config.
TrainResult Train(const TargetEmbeddings& targets, const SubwordTable& table,
                  const TrainConfig& config,
                  const EpochCallback& on_epoch = nullptr);

// Mean over target words of the squared distance to the composed vector.
double Loss(const PbosModel& model, const TargetEmbeddings& targets);

// Gradient of Loss with respect to every stored subword vector, assembled
// by the same residual scatter the trainer applies.
SubwordEmbeddings LossGradient(const PbosModel& model,
                               const TargetEmbeddings& targets);

// Max relative error between the analytic gradient of Loss (built from the
// same residual scatter the trainer applies) and central differences with
// step h, over every coordinate of every stored subword vector. Requires at
// most 10 target words and dimension at most 8; not defined for kPbosN.
double GradientCheck(const PbosModel& model, const TargetEmbeddings& targets,
                     double h = 1e-5);

}  // namespace pbos

#endif  // PBOS_EMBEDDING_MODEL_H_
