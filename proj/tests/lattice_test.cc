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
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "oracle.h"
#include "test_util.h"

namespace pbos {
namespace {

using ::testing::DoubleNear;
using ::testing::ElementsAre;
using testing::TableOf;

TEST(ForwardSumsTest, Examples) {
  EXPECT_THAT(ForwardSums("a", TableOf({{"a", 0.5}})), ElementsAre(1.0, 0.5));
  EXPECT_THAT(ForwardSums("ab", TableOf({{"a", 1}, {"b", 1}, {"ab", 1}})),
              ElementsAre(1.0, 1.0, 2.0));
  EXPECT_THAT(
      ForwardSums("ab", TableOf({{"a", 0.5}, {"b", 0.5}, {"ab", 0.25}})),
      ElementsAre(1.0, 0.5, 0.5));
  EXPECT_THROW(ForwardSums("", TableOf({})), std::invalid_argument);
}

TEST(BackwardSumsTest, Examples) {
  EXPECT_THAT(BackwardSums("a", TableOf({{"a", 0.5}})), ElementsAre(0.5, 1.0));
  EXPECT_THAT(BackwardSums("ab", TableOf({{"a", 1}, {"b", 1}, {"ab", 1}})),
              ElementsAre(2.0, 1.0, 1.0));
  EXPECT_THROW(BackwardSums("", TableOf({})), std::invalid_argument);
}

TEST(PartitionTest, Examples) {
  EXPECT_DOUBLE_EQ(Partition("ab", TableOf({{"a", 1}, {"b", 1}, {"ab", 1}})),
                   2.0);
  EXPECT_DOUBLE_EQ(Partition("a", TableOf({{"a", 0.3}})), 0.3);
  const SubwordTable all_one = TableOf({{"a", 1}, {"b", 1}, {"c", 1},
                                        {"ab", 1}, {"bc", 1}, {"abc", 1}});
  EXPECT_DOUBLE_EQ(Partition("abc", all_one), 4.0);
}

TEST(PartitionTest, UnknownCharactersUseFallback) {
  // Only the all-singles path exists: eps^3.
  EXPECT_NEAR(Partition("xyz", TableOf({}, 0.1)), 1e-3, 1e-18);
}

TEST(SubwordWeightsTest, SingleCharacter) {
  const LatticeResult r = SubwordWeights("a", TableOf({{"a", 0.7}}));
  ASSERT_EQ(r.weights.size(), 1u);
  EXPECT_EQ(r.weights[0].subword, "a");
  EXPECT_DOUBLE_EQ(r.weights[0].weight, 1.0);
  EXPECT_DOUBLE_EQ(r.partition, 0.7);
}

TEST(SubwordWeightsTest, EqualProbabilitiesOnTwoLetters) {
  const LatticeResult ones =
      SubwordWeights("ab", TableOf({{"a", 1}, {"b", 1}, {"ab", 1}}));
  ASSERT_EQ(ones.weights.size(), 3u);
  EXPECT_NEAR(ones.WeightOf("a"), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(ones.WeightOf("b"), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(ones.WeightOf("ab"), 1.0 / 3.0, 1e-15);
  // With p = c everywhere the scores are c (ab), c^2 (a), c^2 (b).
  for (const double c : {0.2, 1e-4}) {
    const LatticeResult r =
        SubwordWeights("ab", TableOf({{"a", c}, {"b", c}, {"ab", c}}));
    EXPECT_NEAR(r.WeightOf("ab"), 1.0 / (1.0 + 2.0 * c), 1e-15);
    EXPECT_NEAR(r.WeightOf("a"), c / (1.0 + 2.0 * c), 1e-15);
    EXPECT_NEAR(r.WeightOf("b"), c / (1.0 + 2.0 * c), 1e-15);
  }
}

TEST(SubwordWeightsTest, RepeatedSubwordsAccumulate) {
  // "aa": segmentations (aa) and (a, a); subword "a" collects both
  // occurrences of the second.
  const LatticeResult r = SubwordWeights("aa", TableOf({{"a", 1}, {"aa", 1}}));
  ASSERT_EQ(r.weights.size(), 2u);
  EXPECT_NEAR(r.WeightOf("a"), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.WeightOf("aa"), 1.0 / 3.0, 1e-15);
}

TEST(SubwordWeightsTest, ZeroProbabilitySubwordsAreOmitted) {
  const LatticeResult r = SubwordWeights("abc", TableOf({{"a", 0.5}}, 0.1));
  std::set<std::string> keys;
  for (const auto& w : r.weights) keys.insert(w.subword);
  EXPECT_EQ(keys, (std::set<std::string>{"a", "b", "c"}));
  EXPECT_EQ(r.WeightOf("abc"), 0.0);
}

TEST(SubwordWeightsTest, LengthGuards) {
  EXPECT_THROW(SubwordWeights("", TableOf({})), std::invalid_argument);
  EXPECT_NO_THROW(SubwordWeights(std::string(1000, 'a'), TableOf({})));
  EXPECT_THROW(SubwordWeights(std::string(1001, 'a'), TableOf({})),
               std::invalid_argument);
}

TEST(SubwordWeightsTest, MultibyteCharacters) {
  const SubwordTable table = SubwordTable::Build({{"né", 1}});
  const LatticeResult r = SubwordWeights("né", table);
  EXPECT_EQ(r.forward.size(), 3u);
  // Masses: (né) 1/3, (n, é) 1/9; occurrences total 5/9.
  EXPECT_NEAR(r.WeightOf("né"), 0.6, 1e-15);
  EXPECT_NEAR(r.WeightOf("é"), 0.2, 1e-15);
  oracle::ProbRule rule;
  for (const auto& [s, p] : table.probs()) rule.stored[s] = p;
  for (const auto& [s, w] : oracle::Weights("né", rule)) {
    EXPECT_NEAR(r.WeightOf(s), w, 1e-12) << s;
  }
}

// Multiplying every p_s by c^|s| scales all path masses by c^l, so the
// normalized weights and segmentation probabilities are unchanged. With a
// small c the linear sums underflow and the log-space path takes over.
TEST(SubwordWeightsTest, UnderflowFallsBackToLogSpace) {
  std::mt19937_64 rng(7);
  const std::string word = testing::RandomWord(rng, 160, "abcd");
  StringMap<double> base_probs;
  StringMap<double> scaled_probs;
  const double eps = 0.05;
  const double c = 1e-3;
  for (const auto& [sub, count] :
       oracle::SubstringCounts({{testing::RandomWord(rng, 60, "abcd"), 1.0},
                                {word.substr(0, 12), 1.0}})) {
    if (sub.size() > 6) continue;
    const double p = 0.02 * count / double(sub.size());
    base_probs[sub] = std::min(p, 1.0);
    scaled_probs[sub] = std::min(p, 1.0) * std::pow(c, double(sub.size()));
  }
  const SubwordTable base = SubwordTable::FromProbs(base_probs, eps);
  const SubwordTable scaled = SubwordTable::FromProbs(scaled_probs, eps * c);

  const LatticeResult lin = SubwordWeights(word, base);
  const LatticeResult log = SubwordWeights(word, scaled);
  ASSERT_FALSE(lin.log_space);
  ASSERT_TRUE(log.log_space);
  EXPECT_NEAR(log.log_partition,
              lin.log_partition + 160.0 * std::log(c), 1e-8);
  ASSERT_EQ(lin.weights.size(), log.weights.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < lin.weights.size(); ++k) {
    EXPECT_EQ(lin.weights[k].subword, log.weights[k].subword);
    EXPECT_NEAR(log.weights[k].weight, lin.weights[k].weight, 1e-10);
    sum += log.weights[k].weight;
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);

  const auto top_lin = TopKSegmentations(word, base, 3);
  const auto top_log = TopKSegmentations(word, scaled, 3);
  ASSERT_EQ(top_lin.size(), top_log.size());
  for (std::size_t k = 0; k < top_lin.size(); ++k) {
    EXPECT_EQ(top_lin[k].segmentation, top_log[k].segmentation);
    EXPECT_NEAR(top_log[k].probability, top_lin[k].probability,
                1e-9 * top_lin[k].probability);
  }
}

TEST(SegmentationLikelihoodTest, Examples) {
  const SubwordTable ones = TableOf({{"a", 1}, {"b", 1}, {"ab", 1}});
  EXPECT_DOUBLE_EQ(SegmentationLikelihood("ab", {{"a", "b"}}, ones), 0.5);
  EXPECT_DOUBLE_EQ(SegmentationLikelihood("a", {{"a"}}, TableOf({{"a", 0.3}})),
                   1.0);
  EXPECT_THROW(SegmentationLikelihood("ab", {{"a"}}, ones),
               std::invalid_argument);
  EXPECT_THROW(SegmentationLikelihood("ab", {{"b", "a"}}, ones),
               std::invalid_argument);
  EXPECT_THROW(SegmentationLikelihood("ab", {{"", "ab"}}, ones),
               std::invalid_argument);
}

TEST(TopKSegmentationsTest, SinglePath) {
  const auto top = TopKSegmentations("a", TableOf({{"a", 0.4}}), 3);
  ASSERT_EQ(top.size(), 1u);
  EXPECT_THAT(top[0].segmentation.segments, ElementsAre("a"));
  EXPECT_DOUBLE_EQ(top[0].probability, 1.0);
}

TEST(TopKSegmentationsTest, TiesPreferFewerSegmentsThenLexicographic) {
  const SubwordTable ones = TableOf({{"a", 1}, {"b", 1}, {"c", 1},
                                     {"ab", 1}, {"bc", 1}, {"abc", 1}});
  const auto two = TopKSegmentations("ab", ones, 2);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_THAT(two[0].segmentation.segments, ElementsAre("ab"));
  EXPECT_THAT(two[1].segmentation.segments, ElementsAre("a", "b"));
  EXPECT_DOUBLE_EQ(two[0].probability, 0.5);
  EXPECT_DOUBLE_EQ(two[1].probability, 0.5);

  const auto four = TopKSegmentations("abc", ones, 10);
  ASSERT_EQ(four.size(), 4u);
  EXPECT_EQ(four[0].segmentation.ToString(), "abc");
  EXPECT_EQ(four[1].segmentation.ToString(), "a/bc");
  EXPECT_EQ(four[2].segmentation.ToString(), "ab/c");
  EXPECT_EQ(four[3].segmentation.ToString(), "a/b/c");
  EXPECT_THROW(TopKSegmentations("abc", ones, 0), std::invalid_argument);
}

TEST(EnumerateAllSegmentationsTest, Counts) {
  EXPECT_EQ(EnumerateAllSegmentations("a").size(), 1u);
  EXPECT_EQ(EnumerateAllSegmentations("ab").size(), 2u);
  const auto all = EnumerateAllSegmentations("abcd");
  EXPECT_EQ(all.size(), 8u);
  std::set<std::string> distinct;
  for (const auto& seg : all) {
    EXPECT_EQ(seg.Joined(), "abcd");
    distinct.insert(seg.ToString());
  }
  EXPECT_EQ(distinct.size(), 8u);
  EXPECT_EQ(EnumerateAllSegmentations("héé").size(), 4u);
  EXPECT_EQ(EnumerateAllSegmentations(std::string(20, 'a')).size(), 1u << 19);
  EXPECT_THROW(EnumerateAllSegmentations(std::string(21, 'a')),
               std::invalid_argument);
  EXPECT_THROW(EnumerateAllSegmentations(""), std::invalid_argument);
}

// Randomized comparison against the exhaustive oracle.
class LatticeOracleTest : public ::testing::TestWithParam<int> {};

TEST_P(LatticeOracleTest, MatchesExhaustiveEnumeration) {
  std::mt19937_64 rng(1000 + GetParam());
  const testing::RandomInstance inst = testing::MakeRandomInstance(rng, 12);
  const LatticeResult r = SubwordWeights(inst.word, inst.table);
  const std::size_t l = inst.word.size();

  const double z = oracle::Partition(inst.word, inst.rule);
  EXPECT_NEAR(r.partition, z, 1e-10 * z);
  EXPECT_NEAR(r.forward[l], r.backward[0], 1e-12 * z);
  EXPECT_EQ(r.forward[0], 1.0);
  EXPECT_EQ(r.backward[l], 1.0);

  const auto expected = oracle::Weights(inst.word, inst.rule);
  double sum = 0.0;
  for (const auto& w : r.weights) {
    ASSERT_TRUE(expected.contains(w.subword)) << w.subword;
    sum += w.weight;
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
  for (const auto& [sub, w] : expected) {
    EXPECT_NEAR(r.WeightOf(sub), w, 1e-10) << inst.word << " " << sub;
  }

  // Likelihoods over every segmentation sum to one.
  double total = 0.0;
  for (const auto& seg : EnumerateAllSegmentations(inst.word)) {
    total += SegmentationLikelihood(inst.word, seg, inst.table);
  }
  EXPECT_NEAR(total, 1.0, 1e-9);

  // Top-k agrees with sorting the exhaustive list.
  std::vector<std::tuple<double, std::size_t, std::vector<std::string>>> ranked;
  for (const auto& seg : oracle::Segmentations(inst.word)) {
    const double mass = oracle::Mass(seg, inst.rule);
    if (mass > 0.0) ranked.emplace_back(-mass, seg.size(), seg);
  }
  std::sort(ranked.begin(), ranked.end());
  const auto top = TopKSegmentations(inst.word, inst.table, 6);
  ASSERT_EQ(top.size(), std::min<std::size_t>(6, ranked.size()));
  auto separated = [&](std::size_t k) {
    const double m = std::get<0>(ranked[k]);
    const double tol = 1e-9 * std::abs(m);
    return (k == 0 || std::abs(std::get<0>(ranked[k - 1]) - m) > tol) &&
           (k + 1 == ranked.size() ||
            std::abs(std::get<0>(ranked[k + 1]) - m) > tol);
  };
  for (std::size_t k = 0; k < top.size(); ++k) {
    const double p = -std::get<0>(ranked[k]) / z;
    EXPECT_NEAR(top[k].probability, p, 1e-9 * p);
    // Near-equal masses may order differently under rounding.
    if (separated(k)) {
      EXPECT_EQ(top[k].segmentation.segments, std::get<2>(ranked[k]));
    }
  }
}

// Uniquely occurring subwords have weight proportional to p * fwd * bwd.
TEST_P(LatticeOracleTest, UniqueOccurrenceFactorization) {
  std::mt19937_64 rng(5000 + GetParam());
  const testing::RandomInstance inst =
      testing::MakeRandomInstance(rng, 12, 0.9);
  const LatticeResult r = SubwordWeights(inst.word, inst.table);
  const std::string& w = inst.word;
  const std::size_t l = w.size();
  std::map<std::string, int> occurrences;
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = i + 1; j <= l; ++j) ++occurrences[w.substr(i, j - i)];
  }
  double ratio = -1.0;
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = i + 1; j <= l; ++j) {
      const std::string s = w.substr(i, j - i);
      const double raw = inst.table.Lookup(s) * r.forward[i] * r.backward[j];
      if (occurrences[s] != 1 || raw == 0.0) continue;
      const double this_ratio = r.WeightOf(s) / raw;
      if (ratio < 0.0) ratio = this_ratio;
      EXPECT_NEAR(this_ratio, ratio, 1e-9 * ratio) << s;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, LatticeOracleTest, ::testing::Range(0, 60));

}  // namespace
}  // namespace pbos
