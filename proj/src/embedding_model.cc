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

#include "pbos/embedding_model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "pbos/utf8.h"

namespace pbos {
namespace {

struct Term {
  std::size_t id;
  double coef;
};
using Terms = std::vector<Term>;

std::vector<SubwordWeight> CoefficientsFor(std::string_view word,
                                           const SubwordTable& table,
                                           const TrainConfig& config) {
  if (word.empty()) throw std::invalid_argument("empty word");
  if (config.variant == Variant::kBos) {
    // Mean over n-gram occurrences, so the coefficients sum to 1 like the
    // lattice weights and one learning rate suits every variant.
    std::vector<SubwordWeight> grams = BosSubwords(
        word, config.bos_min_len, config.bos_max_len, config.WordBoundary());
    double occurrences = 0.0;
    for (const auto& g : grams) occurrences += g.weight;
    for (auto& g : grams) g.weight /= occurrences;
    return grams;
  }
  return SubwordWeights(word, table).weights;
}

Terms TouchTerms(const std::vector<SubwordWeight>& coefs,
                 SubwordEmbeddings& embeddings) {
  Terms terms;
  terms.reserve(coefs.size());
  for (const auto& [subword, coef] : coefs) {
    terms.push_back({embeddings.Touch(subword), coef});
  }
  return terms;
}

Terms FindTerms(const std::vector<SubwordWeight>& coefs,
                const SubwordEmbeddings& embeddings) {
  Terms terms;
  terms.reserve(coefs.size());
  for (const auto& [subword, coef] : coefs) {
    if (auto id = embeddings.IndexOf(subword)) terms.push_back({*id, coef});
  }
  return terms;
}

void ComposeInto(const Terms& terms, const SubwordEmbeddings& embeddings,
                 Variant variant, Vector& out) {
  out.setZero(static_cast<Eigen::Index>(embeddings.dim()));
  for (const auto& [id, coef] : terms) {
    const Vector& v = embeddings.vector(id);
    if (variant == Variant::kPbosN) {
      const double norm = v.norm();
      if (norm > 0.0) out.noalias() += (coef / norm) * v;
    } else {
      out.noalias() += coef * v;
    }
  }
}

// target[s] += scale * coef_s * residual for every term. The trainer calls
// this with scale = -lr; the gradient check with scale = 2 / |W|.
void ScatterResidual(const Terms& terms, const Vector& residual, double scale,
                     SubwordEmbeddings& target) {
  for (const auto& [id, coef] : terms) {
    target.vector(id).noalias() += (scale * coef) * residual;
  }
}

double MeanSquareLoss(const std::vector<Terms>& cache,
                      const SubwordEmbeddings& embeddings, Variant variant,
                      const TargetEmbeddings& targets) {
  Vector composed;
  double sum = 0.0;
  for (std::size_t w = 0; w < cache.size(); ++w) {
    ComposeInto(cache[w], embeddings, variant, composed);
    sum += (composed - targets.vector(w)).squaredNorm();
  }
  return sum / static_cast<double>(cache.size());
}

void CheckTargets(const TargetEmbeddings& targets, std::size_t dim) {
  if (targets.empty()) throw std::invalid_argument("empty target vocabulary");
  if (targets.dim() != dim) {
    throw std::invalid_argument(
        "target dimension " + std::to_string(targets.dim()) +
        " does not match model dimension " + std::to_string(dim));
  }
}

std::vector<Terms> CacheTerms(const PbosModel& model,
                              const TargetEmbeddings& targets) {
  std::vector<Terms> cache;
  cache.reserve(targets.size());
  for (std::size_t w = 0; w < targets.size(); ++w) {
    cache.push_back(
        FindTerms(model.Coefficients(targets.token(w)), model.embeddings()));
  }
  return cache;
}

}  // namespace

std::string_view VariantName(Variant v) {
  switch (v) {
    case Variant::kPbos:
      return "pbos";
    case Variant::kBos:
      return "bos";
    case Variant::kPbosN:
      return "pbos-n";
  }
  return "pbos";
}

std::optional<Variant> ParseVariant(std::string_view name) {
  if (name == "pbos") return Variant::kPbos;
  if (name == "bos") return Variant::kBos;
  if (name == "pbos-n") return Variant::kPbosN;
  return std::nullopt;
}

double TrainConfig::LearningRate(int epoch) const {
  return lr_decay ? lr / std::sqrt(static_cast<double>(epoch)) : lr;
}

void TrainConfig::Validate() const {
  if (epochs < 0) throw std::invalid_argument("epochs must be nonnegative");
  if (!(lr > 0.0)) throw std::invalid_argument("lr must be positive");
  if (bos_min_len < 1 || bos_max_len < bos_min_len) {
    throw std::invalid_argument("need 1 <= bos_min_len <= bos_max_len");
  }
}

std::vector<SubwordWeight> BosSubwords(std::string_view word, int min_len,
                                       int max_len, bool word_boundary) {
  if (word.empty()) throw std::invalid_argument("empty word");
  std::string marked;
  if (word_boundary) marked += kBeginOfWord;
  marked += word;
  if (word_boundary) marked += kEndOfWord;

  const std::vector<std::size_t> offsets = utf8::CharBoundaries(marked);
  const std::size_t len = offsets.size() - 1;
  const std::string_view view(marked);
  std::vector<SubwordWeight> out;
  std::unordered_map<std::string_view, std::size_t> seen;
  for (std::size_t i = 0; i < len; ++i) {
    for (auto n = static_cast<std::size_t>(min_len);
         n <= static_cast<std::size_t>(max_len) && i + n <= len; ++n) {
      const std::string_view gram =
          view.substr(offsets[i], offsets[i + n] - offsets[i]);
      auto [it, inserted] = seen.try_emplace(gram, out.size());
      if (inserted) {
        out.push_back({std::string(gram), 1.0});
      } else {
        out[it->second].weight += 1.0;
      }
    }
  }
  return out;
}

PbosModel::PbosModel(SubwordTable table, SubwordEmbeddings embeddings,
                     TrainConfig config)
    : table_(std::move(table)),
      embeddings_(std::move(embeddings)),
      config_(std::move(config)) {}

std::vector<SubwordWeight> PbosModel::Coefficients(
    std::string_view word) const {
  return CoefficientsFor(word, table_, config_);
}

Vector PbosModel::Compose(std::string_view word) const {
  Vector out;
  ComposeInto(FindTerms(Coefficients(word), embeddings_), embeddings_,
              config_.variant, out);
  return out;
}

TrainResult Train(const TargetEmbeddings& targets, const SubwordTable& table,
                  const TrainConfig& config, const EpochCallback& on_epoch) {
  config.Validate();
  if (targets.empty()) throw std::invalid_argument("empty target vocabulary");
  if (targets.dim() == 0) throw std::invalid_argument("zero target dimension");

  SubwordEmbeddings embeddings(targets.dim());
  std::vector<Terms> cache;
  cache.reserve(targets.size());
  for (std::size_t w = 0; w < targets.size(); ++w) {
    cache.push_back(TouchTerms(
        CoefficientsFor(targets.token(w), table, config), embeddings));
  }

  std::vector<std::size_t> order(targets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(config.seed);

  std::vector<double> losses;
  losses.reserve(static_cast<std::size_t>(config.epochs));
  Vector composed;
  Vector residual;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const double lr = config.LearningRate(epoch);
    std::shuffle(order.begin(), order.end(), rng);
    for (const std::size_t w : order) {
      ComposeInto(cache[w], embeddings, config.variant, composed);
      residual = composed - targets.vector(w);
      ScatterResidual(cache[w], residual, -lr, embeddings);
    }
    losses.push_back(
        MeanSquareLoss(cache, embeddings, config.variant, targets));
    if (on_epoch) on_epoch(epoch, losses.back());
  }
  return {PbosModel(table, std::move(embeddings), config), std::move(losses)};
}

double Loss(const PbosModel& model, const TargetEmbeddings& targets) {
  CheckTargets(targets, model.dim());
  return MeanSquareLoss(CacheTerms(model, targets), model.embeddings(),
                        model.config().variant, targets);
}

SubwordEmbeddings LossGradient(const PbosModel& model,
                               const TargetEmbeddings& targets) {
  CheckTargets(targets, model.dim());
  const std::vector<Terms> cache = CacheTerms(model, targets);
  SubwordEmbeddings gradient(model.dim());
  for (const auto& token : model.embeddings().tokens()) gradient.Touch(token);
  const double scale = 2.0 / static_cast<double>(targets.size());
  Vector composed;
  for (std::size_t w = 0; w < cache.size(); ++w) {
    ComposeInto(cache[w], model.embeddings(), model.config().variant,
                composed);
    ScatterResidual(cache[w], composed - targets.vector(w), scale, gradient);
  }
  return gradient;
}

double GradientCheck(const PbosModel& model, const TargetEmbeddings& targets,
                     double h) {
  CheckTargets(targets, model.dim());
  if (targets.size() > 10 || model.dim() > 8) {
    throw std::invalid_argument(
        "gradient check needs at most 10 words and dimension at most 8");
  }
  if (model.config().variant == Variant::kPbosN) {
    throw std::invalid_argument(
        "gradient check is not defined for the normalized variant");
  }
  if (!(h > 0.0)) throw std::invalid_argument("step must be positive");

  const Variant variant = model.config().variant;
  const std::vector<Terms> cache = CacheTerms(model, targets);
  const SubwordEmbeddings analytic = LossGradient(model, targets);

  // Words whose composition uses each stored vector. Moving one coordinate
  // leaves every other word's error bit-for-bit unchanged, so the central
  // difference is summed over the affected words only; adding the unchanged
  // terms would contribute nothing but rounding.
  std::vector<std::vector<std::size_t>> users(model.embeddings().size());
  for (std::size_t w = 0; w < cache.size(); ++w) {
    for (const Term& t : cache[w]) {
      if (users[t.id].empty() || users[t.id].back() != w) {
        users[t.id].push_back(w);
      }
    }
  }

  SubwordEmbeddings probe = model.embeddings();
  Vector plus, minus;
  double max_error = 0.0;
  for (std::size_t id = 0; id < probe.size(); ++id) {
    for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(probe.dim()); ++c) {
      const double original = probe.vector(id)[c];
      double delta = 0.0;
      for (std::size_t w : users[id]) {
        probe.vector(id)[c] = original + h;
        ComposeInto(cache[w], probe, variant, plus);
        probe.vector(id)[c] = original - h;
        ComposeInto(cache[w], probe, variant, minus);
        probe.vector(id)[c] = original;
        delta += (plus - targets.vector(w)).squaredNorm() -
                 (minus - targets.vector(w)).squaredNorm();
      }
      const double numeric =
          delta / static_cast<double>(cache.size()) / (2.0 * h);
      const double error = std::abs(analytic.vector(id)[c] - numeric) /
                           std::max(1e-8, std::abs(numeric));
      max_error = std::max(max_error, error);
    }
  }
  return max_error;
}

}  // namespace pbos
