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

#include <cmath>
#include <random>
#include <stdexcept>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "model_util.h"
#include "test_util.h"

namespace pbos {
namespace {

using testing::MakeSmallInstance;
using testing::SmallInstance;
using testing::TableOf;

Vector Vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

TargetEmbeddings Targets(
    std::initializer_list<std::pair<std::string, Vector>> entries) {
  TargetEmbeddings t(entries.begin()->second.size());
  for (const auto& [word, v] : entries) t.Insert(word, v);
  return t;
}

PbosModel ModelWith(SubwordTable table, std::size_t dim,
                    std::initializer_list<std::pair<std::string, Vector>> vecs,
                    Variant variant = Variant::kPbos) {
  SubwordEmbeddings emb(dim);
  for (const auto& [s, v] : vecs) emb.Insert(s, v);
  TrainConfig config;
  config.variant = variant;
  return PbosModel(std::move(table), std::move(emb), config);
}

TEST(ComposeTest, UntrainedModelIsZero) {
  const PbosModel model = ModelWith(SubwordTable::Build({{"abc", 3}}), 4, {});
  EXPECT_TRUE(model.Compose("abc").isZero(0.0));
  EXPECT_TRUE(model.Compose("zebra").isZero(0.0));
  EXPECT_EQ(model.Compose("zebra").size(), 4);
  EXPECT_THROW(model.Compose(""), std::invalid_argument);
}

TEST(ComposeTest, SingletonWeightReturnsSubwordVector) {
  const PbosModel model =
      ModelWith(TableOf({{"a", 0.3}}), 3, {{"a", Vec({1.5, -2, 0.25})}});
  EXPECT_EQ(model.Compose("a"), Vec({1.5, -2, 0.25}));
}

TEST(ComposeTest, WeightedSumOverLattice) {
  const PbosModel model = ModelWith(
      TableOf({{"a", 1}, {"b", 1}, {"ab", 1}}), 2,
      {{"a", Vec({3, 0})}, {"b", Vec({0, 3})}, {"ab", Vec({3, 3})}});
  const Vector v = model.Compose("ab");
  EXPECT_NEAR(v[0], 2.0, 1e-15);
  EXPECT_NEAR(v[1], 2.0, 1e-15);
}

TEST(ComposeTest, NormalizedVariantUsesUnitVectors) {
  const PbosModel model =
      ModelWith(TableOf({{"a", 1}, {"b", 1}, {"ab", 1}}), 2,
                {{"a", Vec({3, 4})}, {"b", Vec({0, 0})}, {"ab", Vec({0, 2})}},
                Variant::kPbosN);
  EXPECT_NEAR(model.Compose("a")[0], 0.6, 1e-15);
  EXPECT_NEAR(model.Compose("a")[1], 0.8, 1e-15);
  // (0.6, 0.8)/3 + 0 + (0, 1)/3
  const Vector v = model.Compose("ab");
  EXPECT_NEAR(v[0], 0.2, 1e-15);
  EXPECT_NEAR(v[1], 0.6, 1e-15);
}

TEST(BosSubwordsTest, BoundaryMarkedNgrams) {
  const auto grams = BosSubwords("ab", 3, 6, true);
  ASSERT_EQ(grams.size(), 3u);
  EXPECT_EQ(grams[0].subword, "⟨ab");
  EXPECT_EQ(grams[1].subword, "⟨ab⟩");
  EXPECT_EQ(grams[2].subword, "ab⟩");
  for (const auto& g : grams) EXPECT_EQ(g.weight, 1.0);

  const auto repeated = BosSubwords("abcabc", 3, 3, false);
  ASSERT_EQ(repeated.size(), 3u);
  EXPECT_EQ(repeated[0].subword, "abc");
  EXPECT_EQ(repeated[0].weight, 2.0);
  EXPECT_TRUE(BosSubwords("ab", 3, 6, false).empty());
}

TEST(ComposeTest, BosAveragesNgramOccurrences) {
  SubwordEmbeddings emb(2);
  emb.Insert("⟨ab", Vec({3, 0}));
  emb.Insert("ab⟩", Vec({0, 3}));
  TrainConfig config;
  config.variant = Variant::kBos;
  const PbosModel model(SubwordTable(), emb, config);
  // Three n-grams, "⟨ab⟩" has no vector.
  EXPECT_EQ(model.Compose("ab"), Vec({1, 1}));
  const auto coefs = model.Coefficients("ab");
  ASSERT_EQ(coefs.size(), 3u);
  for (const auto& c : coefs) EXPECT_DOUBLE_EQ(c.weight, 1.0 / 3.0);
  // No n-gram of "xy" is stored.
  EXPECT_TRUE(model.Compose("xy").isZero(0.0));
  EXPECT_TRUE(model.Compose("x").isZero(0.0));
}

TEST(ComposeTest, BosCountsRepeatedNgrams) {
  TrainConfig config;
  config.variant = Variant::kBos;
  config.bos_word_boundary = false;
  config.bos_max_len = 3;
  const PbosModel model(SubwordTable(), SubwordEmbeddings(1), config);
  // abc, bca, cab, abc
  const auto coefs = model.Coefficients("abcabc");
  ASSERT_EQ(coefs.size(), 3u);
  EXPECT_EQ(coefs[0].subword, "abc");
  EXPECT_DOUBLE_EQ(coefs[0].weight, 0.5);
  EXPECT_DOUBLE_EQ(coefs[1].weight, 0.25);
}

TEST(TrainConfigTest, Defaults) {
  const TrainConfig config;
  EXPECT_EQ(config.epochs, 50);
  EXPECT_EQ(config.lr, 1.0);
  EXPECT_TRUE(config.lr_decay);
  EXPECT_EQ(config.variant, Variant::kPbos);
  EXPECT_EQ(config.bos_min_len, 3);
  EXPECT_EQ(config.bos_max_len, 6);
  EXPECT_FALSE(config.WordBoundary());
  TrainConfig bos;
  bos.variant = Variant::kBos;
  EXPECT_TRUE(bos.WordBoundary());
  EXPECT_DOUBLE_EQ(config.LearningRate(4), 0.5);
  EXPECT_EQ(ParseVariant("pbos-n"), Variant::kPbosN);
  EXPECT_EQ(ParseVariant("PBOS"), std::nullopt);
}

TEST(TrainTest, OneUpdateMemorizesSingleCharacterWord) {
  const TargetEmbeddings targets = Targets({{"a", Vec({0.5, -1, 2})}});
  TrainConfig config;
  config.epochs = 3;
  const TrainResult result = Train(targets, TableOf({{"a", 0.2}}), config);
  EXPECT_EQ(*result.model.embeddings().Find("a"), Vec({0.5, -1, 2}));
  EXPECT_THAT(result.epoch_losses, ::testing::ElementsAre(0.0, 0.0, 0.0));
}

TEST(TrainTest, ZeroEpochsLeavesZeroModel) {
  const TargetEmbeddings targets =
      Targets({{"ab", Vec({1, 2})}, {"ba", Vec({-1, 0})}});
  TrainConfig config;
  config.epochs = 0;
  const TrainResult result =
      Train(targets, SubwordTable::Build({{"ab", 1}}), config);
  EXPECT_TRUE(result.epoch_losses.empty());
  for (std::size_t i = 0; i < result.model.embeddings().size(); ++i) {
    EXPECT_TRUE(result.model.embeddings().vector(i).isZero(0.0));
  }
  EXPECT_TRUE(result.model.Compose("ab").isZero(0.0));
  EXPECT_TRUE(result.model.Compose("qq").isZero(0.0));
}

TEST(TrainTest, Errors) {
  EXPECT_THROW(Train(TargetEmbeddings(3), TableOf({}), TrainConfig{}),
               std::invalid_argument);
  TrainConfig bad;
  bad.lr = 0.0;
  EXPECT_THROW(Train(Targets({{"a", Vec({1})}}), TableOf({}), bad),
               std::invalid_argument);
}

// One SGD step from zero scales the residual by (1 - lr * sum a^2), so the
// squared error falls exactly when lr * sum a^2 < 2.
TEST(TrainTest, SingleStepContraction) {
  const SubwordTable table = TableOf({{"a", 0.4}, {"b", 0.1}, {"ab", 0.3}});
  const LatticeResult lattice = SubwordWeights("ab", table);
  double sum_sq = 0.0;
  for (const auto& w : lattice.weights) sum_sq += w.weight * w.weight;
  const Vector target = Vec({1.0, -2.0});
  for (const double lr : {0.5, 1.0, 3.0, 2.0 / sum_sq * 1.2}) {
    TrainConfig config;
    config.epochs = 1;
    config.lr = lr;
    const TrainResult result = Train(Targets({{"ab", target}}), table, config);
    const double factor = 1.0 - lr * sum_sq;
    EXPECT_NEAR(result.epoch_losses[0],
                factor * factor * target.squaredNorm(), 1e-12);
    EXPECT_EQ(result.epoch_losses[0] < target.squaredNorm(),
              lr * sum_sq < 2.0);
  }
}

TEST(LossTest, Examples) {
  const PbosModel zero = ModelWith(TableOf({{"a", 0.5}}), 2, {});
  EXPECT_EQ(Loss(zero, Targets({{"a", Vec({0, 0})}, {"b", Vec({0, 0})}})), 0.0);
  EXPECT_DOUBLE_EQ(Loss(zero, Targets({{"ab", Vec({0, 2})}})), 4.0);
  EXPECT_THROW(Loss(zero, TargetEmbeddings(2)), std::invalid_argument);
  EXPECT_THROW(Loss(zero, Targets({{"a", Vec({1, 2, 3})}})),
               std::invalid_argument);
}

class ModelPropertyTest : public ::testing::TestWithParam<int> {};

TEST_P(ModelPropertyTest, GradientMatchesFiniteDifferences) {
  for (const Variant v : {Variant::kPbos, Variant::kBos}) {
    const SmallInstance inst = MakeSmallInstance(GetParam(), v);
    EXPECT_LT(GradientCheck(inst.model, inst.targets, 1e-5), 1e-4);
  }
}

TEST_P(ModelPropertyTest, ComposeIsLinearInSubwordVectors) {
  const SmallInstance a = MakeSmallInstance(GetParam(), Variant::kPbos);
  SubwordEmbeddings s1 = a.model.embeddings();
  SubwordEmbeddings s2 = a.model.embeddings();
  SubwordEmbeddings sum = a.model.embeddings();
  std::mt19937_64 rng(GetParam());
  std::normal_distribution<double> normal;
  for (std::size_t i = 0; i < s2.size(); ++i) {
    for (auto& x : s2.vector(i)) x = normal(rng);
    sum.vector(i) = s1.vector(i) + s2.vector(i);
  }
  const PbosModel m1(a.model.table(), s1, a.model.config());
  const PbosModel m2(a.model.table(), s2, a.model.config());
  const PbosModel m12(a.model.table(), sum, a.model.config());
  for (const auto& word : {std::string("abca"), a.targets.token(0),
                           std::string("dddd")}) {
    const Vector lhs = m12.Compose(word);
    const Vector rhs = m1.Compose(word) + m2.Compose(word);
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST_P(ModelPropertyTest, PbosCompositionIsConvex) {
  const SmallInstance inst = MakeSmallInstance(GetParam(), Variant::kPbos);
  std::mt19937_64 rng(GetParam());
  for (int t = 0; t < 5; ++t) {
    const std::string word = testing::RandomWord(rng, 1 + rng() % 8, "abcde");
    double bound = 0.0;
    for (const auto& c : inst.model.Coefficients(word)) {
      if (const Vector* v = inst.model.embeddings().Find(c.subword)) {
        bound = std::max(bound, v->norm());
      }
    }
    EXPECT_LE(inst.model.Compose(word).norm(), bound * (1 + 1e-12));
  }
}

TEST_P(ModelPropertyTest, TrainingIsDeterministic) {
  const SmallInstance inst = MakeSmallInstance(GetParam(), Variant::kPbos);
  TrainConfig config;
  config.epochs = 5;
  config.seed = GetParam();
  const auto first = Train(inst.targets, inst.model.table(), config);
  const auto second = Train(inst.targets, inst.model.table(), config);
  EXPECT_EQ(first.epoch_losses, second.epoch_losses);
  // The reported trace matches a fresh evaluation of the trained model.
  EXPECT_NEAR(first.epoch_losses.back(), Loss(first.model, inst.targets),
              1e-12 * (1.0 + first.epoch_losses.back()));
}

// Central differences of the public Loss, with an absolute tolerance that
// covers rounding in the full sum.
TEST_P(ModelPropertyTest, GradientMatchesPublicLossDifferences) {
  const SmallInstance inst = MakeSmallInstance(GetParam(), Variant::kPbos);
  const SubwordEmbeddings grad = LossGradient(inst.model, inst.targets);
  PbosModel probe = inst.model;
  constexpr double kStep = 1e-4;
  for (std::size_t id = 0; id < grad.size(); ++id) {
    ASSERT_EQ(grad.token(id), probe.embeddings().token(id));
    for (Eigen::Index c = 0; c < grad.vector(id).size(); ++c) {
      double& x = probe.embeddings().vector(id)[c];
      const double original = x;
      x = original + kStep;
      const double plus = Loss(probe, inst.targets);
      x = original - kStep;
      const double minus = Loss(probe, inst.targets);
      x = original;
      EXPECT_NEAR(grad.vector(id)[c], (plus - minus) / (2 * kStep), 1e-8);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, ModelPropertyTest, ::testing::Range(0, 20));

TEST(GradientTest, ZeroResidualGivesZeroGradient) {
  SmallInstance inst = MakeSmallInstance(3, Variant::kPbos);
  TargetEmbeddings fitted(inst.targets.dim());
  for (const auto& word : inst.targets.tokens()) {
    fitted.Insert(word, inst.model.Compose(word));
  }
  const SubwordEmbeddings grad = LossGradient(inst.model, fitted);
  for (std::size_t i = 0; i < grad.size(); ++i) {
    EXPECT_TRUE(grad.vector(i).isZero(0.0));
  }
  EXPECT_LT(GradientCheck(inst.model, fitted), 1e-4);
}

TEST(GradientTest, Preconditions) {
  const SmallInstance pbos_n = MakeSmallInstance(1, Variant::kPbosN);
  EXPECT_THROW(GradientCheck(pbos_n.model, pbos_n.targets),
               std::invalid_argument);
  const PbosModel wide = ModelWith(TableOf({}), 9, {});
  TargetEmbeddings targets(9);
  targets.Insert("a", Vector::Zero(9));
  EXPECT_THROW(GradientCheck(wide, targets), std::invalid_argument);
}

}  // namespace
}  // namespace pbos
