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

#include "pbos/bench.h"

#include <algorithm>
#include <chrono>
#include <random>
#include <stdexcept>

#include "pbos/lattice.h"
#include "pbos/utf8.h"

namespace pbos::bench {
namespace {

using Clock = std::chrono::steady_clock;

double Micros(Clock::duration d) {
  return std::chrono::duration<double, std::micro>(d).count();
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<std::string> Alphabet(const SubwordTable& table) {
  std::vector<std::string> chars;
  for (const auto& [s, p] : table.probs()) {
    if (utf8::Length(s) == 1) chars.push_back(s);
  }
  if (chars.empty()) {
    for (char c = 'a'; c <= 'z'; ++c) chars.emplace_back(1, c);
  }
  std::sort(chars.begin(), chars.end());  // hash order is not stable
  return chars;
}

// Keeps the optimizer from discarding benchmarked results.
volatile double sink = 0.0;

}  // namespace

WordFreqList SyntheticFreqs(std::size_t words, std::uint64_t seed,
                            int min_len, int max_len) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> len(min_len, max_len);
  std::uniform_int_distribution<int> letter('a', 'z');
  WordFreqList freqs;
  freqs.reserve(words);
  for (std::size_t rank = 1; rank <= words; ++rank) {
    std::string w;
    for (int i = len(rng); i > 0; --i) w += static_cast<char>(letter(rng));
    freqs.push_back({std::move(w), 1000000 / rank + 1});
  }
  return MergeDuplicates(freqs);
}

std::vector<std::string> RandomWords(const SubwordTable& table,
                                     std::size_t count, std::size_t len,
                                     std::uint64_t seed) {
  const std::vector<std::string> chars = Alphabet(table);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, chars.size() - 1);
  std::vector<std::string> out(count);
  for (auto& w : out) {
    for (std::size_t i = 0; i < len; ++i) w += chars[pick(rng)];
  }
  return out;
}

PbosModel RandomModel(const SubwordTable& table,
                      const std::vector<std::string>& words, std::size_t dim,
                      std::uint64_t seed) {
  PbosModel model(table, SubwordEmbeddings(dim), TrainConfig{});
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (const auto& w : words) {
    for (const auto& c : model.Coefficients(w)) {
      if (model.embeddings().Find(c.subword)) continue;
      const std::size_t id = model.embeddings().Touch(c.subword);
      for (auto& x : model.embeddings().vector(id)) x = normal(rng);
    }
  }
  return model;
}

ScalingReport MeasureScaling(const SubwordTable& table,
                             const std::vector<std::string>& short_words,
                             const std::vector<std::string>& long_words,
                             int repetitions) {
  if (short_words.empty() || long_words.empty()) {
    throw std::invalid_argument("empty benchmark batch");
  }
  const auto time_batch = [&](const std::vector<std::string>& batch) {
    std::vector<double> per_word;
    for (int r = 0; r < repetitions; ++r) {
      const auto start = Clock::now();
      for (const auto& w : batch) {
        sink = sink + SubwordWeights(w, table).partition;
      }
      per_word.push_back(Micros(Clock::now() - start) /
                         static_cast<double>(batch.size()));
    }
    return Median(per_word);
  };
  ScalingReport report;
  report.short_len = utf8::Length(short_words.front());
  report.long_len = utf8::Length(long_words.front());
  time_batch(short_words);  // warm caches and allocator
  report.short_us = time_batch(short_words);
  report.long_us = time_batch(long_words);
  report.ratio = report.long_us / report.short_us;
  return report;
}

ScalingReport MeasureScaling(const SubwordTable& table, std::uint64_t seed,
                             std::size_t short_len, std::size_t long_len,
                             std::size_t words, int repetitions) {
  return MeasureScaling(table, RandomWords(table, words, short_len, seed),
                        RandomWords(table, words, long_len, seed + 1),
                        repetitions);
}

LatencyReport MeasureComposeLatency(const PbosModel& model,
                                    const std::vector<std::string>& words,
                                    int repetitions) {
  LatencyReport report;
  report.dim = model.dim();
  for (const auto& w : words) {
    report.word_len = std::max(report.word_len, utf8::Length(w));
  }
  std::vector<double> per_word;
  for (int r = 0; r < repetitions; ++r) {
    const auto batch_start = Clock::now();
    for (const auto& w : words) {
      const auto start = Clock::now();
      sink = sink + model.Compose(w)[0];
      report.max_us = std::max(report.max_us, Micros(Clock::now() - start));
    }
    per_word.push_back(Micros(Clock::now() - batch_start) /
                       static_cast<double>(words.size()));
  }
  report.median_us = Median(per_word);
  return report;
}

}  // namespace pbos::bench
