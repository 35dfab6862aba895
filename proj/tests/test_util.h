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

#ifndef PBOS_TESTS_TEST_UTIL_H_
#define PBOS_TESTS_TEST_UTIL_H_

#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <utility>

#include "oracle.h"
#include "pbos/subword_stats.h"

namespace pbos::testing {

inline std::string RandomWord(std::mt19937_64& rng, std::size_t len,
                              const std::string& alphabet = "abc") {
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::string word;
  for (std::size_t i = 0; i < len; ++i) word.push_back(alphabet[pick(rng)]);
  return word;
}

// A probability table and its independent oracle twin. Each distinct
// substring of word is stored with probability keep, with values spread
// log-uniformly over [1e-6, 1].
struct RandomInstance {
  std::string word;
  SubwordTable table;
  oracle::ProbRule rule;
};

inline RandomInstance MakeRandomInstance(std::mt19937_64& rng,
                                         std::size_t max_len,
                                         double keep = 0.6) {
  std::uniform_int_distribution<std::size_t> len_dist(1, max_len);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RandomInstance inst;
  inst.word = RandomWord(rng, len_dist(rng));
  inst.rule.eps = std::pow(10.0, -3.0 * unit(rng));
  if (inst.rule.eps >= 1.0) inst.rule.eps = 0.5;
  for (const auto& [sub, count] : oracle::SubstringCounts({{inst.word, 1.0}})) {
    (void)count;
    if (unit(rng) < keep) {
      inst.rule.stored[sub] = std::pow(10.0, -6.0 * unit(rng));
    }
  }
  StringMap<double> probs(inst.rule.stored.begin(), inst.rule.stored.end());
  inst.table = SubwordTable::FromProbs(std::move(probs), inst.rule.eps);
  return inst;
}

inline SubwordTable TableOf(
    std::initializer_list<std::pair<const std::string, double>> entries,
    double prob_eps = SubwordTable::kDefaultProbEps) {
  return SubwordTable::FromProbs(StringMap<double>(entries), prob_eps);
}

}  // namespace pbos::testing

#endif  // PBOS_TESTS_TEST_UTIL_H_
