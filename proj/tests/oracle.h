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

// Exhaustive reference computations used only by tests. Nothing here calls
// into the lattice code: segmentations are enumerated recursively over
// code points and probabilities come from a plain std::map.

#ifndef PBOS_TESTS_ORACLE_H_
#define PBOS_TESTS_ORACLE_H_

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pbos/utf8.h"

namespace pbos::oracle {

// Probability rule mirrored independently: stored value, else eps for a
// single character, else 0.
struct ProbRule {
  std::map<std::string, double> stored;
  double eps = 0.01;

  double operator()(const std::string& s, std::size_t chars) const {
    if (auto it = stored.find(s); it != stored.end()) return it->second;
    return chars == 1 ? eps : 0.0;
  }
};

// Splits a UTF-8 string into single-character strings.
inline std::vector<std::string> Chars(const std::string& word) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < word.size();) {
    std::size_t n = 1;
    const auto b = static_cast<unsigned char>(word[i]);
    if (b >= 0xF0) n = 4;
    else if (b >= 0xE0) n = 3;
    else if (b >= 0xC0) n = 2;
    out.push_back(word.substr(i, n));
    i += n;
  }
  return out;
}

// Every segmentation as a list of segments, by recursion on the first cut.
inline std::vector<std::vector<std::string>> Segmentations(
    const std::string& word) {
  const std::vector<std::string> chars = Chars(word);
  std::vector<std::vector<std::string>> all;
  std::vector<std::string> current;
  std::function<void(std::size_t)> recurse = [&](std::size_t start) {
    if (start == chars.size()) {
      all.push_back(current);
      return;
    }
    std::string piece;
    for (std::size_t end = start; end < chars.size(); ++end) {
      piece += chars[end];
      current.push_back(piece);
      recurse(end + 1);
      current.pop_back();
    }
  };
  recurse(0);
  return all;
}

inline double Mass(const std::vector<std::string>& seg, const ProbRule& p) {
  double mass = 1.0;
  for (const auto& s : seg) mass *= p(s, Chars(s).size());
  return mass;
}

inline double Partition(const std::string& word, const ProbRule& p) {
  double z = 0.0;
  for (const auto& seg : Segmentations(word)) z += Mass(seg, p);
  return z;
}

// Marginal subword weights: every segment of every segmentation adds the
// segmentation's mass to its subword; the result is normalized to sum 1.
inline std::map<std::string, double> Weights(const std::string& word,
                                             const ProbRule& p) {
  std::map<std::string, double> acc;
  double total = 0.0;
  for (const auto& seg : Segmentations(word)) {
    const double mass = Mass(seg, p);
    for (const auto& s : seg) {
      acc[s] += mass;
      total += mass;
    }
  }
  for (auto& [s, v] : acc) v /= total;
  return acc;
}

// Raw substring occurrence counts weighted by word count.
inline std::map<std::string, double> SubstringCounts(
    const std::vector<std::pair<std::string, double>>& words) {
  std::map<std::string, double> counts;
  for (const auto& [word, count] : words) {
    const std::vector<std::string> chars = Chars(word);
    for (std::size_t i = 0; i < chars.size(); ++i) {
      std::string piece;
      for (std::size_t j = i; j < chars.size(); ++j) {
        piece += chars[j];
        counts[piece] += count;
      }
    }
  }
  return counts;
}

}  // namespace pbos::oracle

#endif  // PBOS_TESTS_ORACLE_H_
