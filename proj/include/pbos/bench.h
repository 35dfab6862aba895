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

#ifndef PBOS_BENCH_H_
#define PBOS_BENCH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "pbos/embedding_model.h"
#include "pbos/subword_stats.h"

namespace pbos::bench {

// Zipf-weighted random words over a lowercase alphabet, for benchmarks and
// smoke tests when no real frequency list is at hand.
WordFreqList SyntheticFreqs(std::size_t words, std::uint64_t seed,
                            int min_len = 3, int max_len = 12);

// Random words of exactly len characters drawn from the single characters
// stored in the table (a-z if it has none).
std::vector<std::string> RandomWords(const SubwordTable& table,
                                     std::size_t count, std::size_t len,
                                     std::uint64_t seed);

// A PbosModel whose every subword occurring in the given words carries a
// random unit-normal vector of dimension dim.
PbosModel RandomModel(const SubwordTable& table,
                      const std::vector<std::string>& words, std::size_t dim,
                      std::uint64_t seed);

struct ScalingReport {
  std::size_t short_len = 0;
  std::size_t long_len = 0;
  // Median over repetitions of the mean per-word time of SubwordWeights.
  double short_us = 0.0;
  double long_us = 0.0;
  double ratio = 0.0;
};

// Times the given batches; every word in a batch should have the same length.
ScalingReport MeasureScaling(const SubwordTable& table,
                             const std::vector<std::string>& short_words,
                             const std::vector<std::string>& long_words,
                             int repetitions = 15);

// Same, on random words of the two lengths.
ScalingReport MeasureScaling(const SubwordTable& table, std::uint64_t seed,
                             std::size_t short_len = 10,
                             std::size_t long_len = 40,
                             std::size_t words = 100, int repetitions = 15);

struct LatencyReport {
  std::size_t dim = 0;
  std::size_t word_len = 0;
  // Median over repetitions of the mean per-word Compose time, and the
  // slowest single call seen.
  double median_us = 0.0;
  double max_us = 0.0;
};

LatencyReport MeasureComposeLatency(const PbosModel& model,
                                    const std::vector<std::string>& words,
                                    int repetitions = 15);

}  // namespace pbos::bench

#endif  // PBOS_BENCH_H_
