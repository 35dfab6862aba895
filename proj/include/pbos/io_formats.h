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

#ifndef PBOS_IO_FORMATS_H_
#define PBOS_IO_FORMATS_H_

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pbos/embedding_model.h"
#include "pbos/eval.h"
#include "pbos/subword_stats.h"
#include "pbos/vectors.h"

namespace pbos::io {

// Shortest round-trippable text for a value at 9 significant digits.
std::string FormatValue(double value);

// ---- word2vec text embeddings ---------------------------------------------
//
//   N d
//   token v1 ... vd
//   ...
//
// Structural problems (bad header, wrong record count, wrong dimension,
// non-numeric component) throw DataError with the line number.

struct EmbeddingReadResult {
  TargetEmbeddings embeddings;
  // Repeated tokens; the first occurrence is kept.
  std::size_t duplicates = 0;
};

EmbeddingReadResult ReadEmbeddings(std::istream& in);

// Writes 9 significant digits per component and '\n' line endings. Throws
// std::invalid_argument for an empty table or a token that is empty or
// contains whitespace.
void WriteEmbeddings(const EmbeddingTable& table, std::ostream& out);

// ---- Line-oriented inputs -------------------------------------------------
//
// Malformed lines are skipped and counted; these readers never throw on
// individual lines.

struct LineErrors {
  std::size_t count = 0;
  // 1-based numbers of the first few malformed lines.
  std::vector<std::size_t> first_lines;

  void Record(std::size_t line);
};

struct FreqReadResult {
  WordFreqList freqs;
  LineErrors malformed;
};

// "word,count" or "word<TAB>count" per line. The separator is the last tab
// if the line has one, else the last comma. Blank lines are ignored.
FreqReadResult ReadFreqs(std::istream& in, bool lowercase = false);

struct PairsReadResult {
  std::vector<SimilarityPair> pairs;
  LineErrors malformed;
};

// "word1<TAB>word2<TAB>score" per line; '#' lines are comments. Extra
// trailing columns (per-annotator scores) are ignored.
PairsReadResult ReadSimilarityPairs(std::istream& in);

struct InventoryReadResult {
  AffixInventory inventory;
  LineErrors malformed;
};

// "label<TAB>prefix|suffix" per line.
InventoryReadResult ReadAffixInventory(std::istream& in);

struct AffixReadResult {
  std::vector<AffixInstance> instances;
  LineErrors malformed;  // includes labels missing from the inventory
};

// "word<TAB>label" per line.
AffixReadResult ReadAffixInstances(std::istream& in,
                                   const AffixInventory& inventory,
                                   bool lowercase = false);

// ---- Subword tables -------------------------------------------------------

// "subword<TAB>probability" per line, most probable first, with enough
// digits to reload the exact double.
void WriteSubwordTable(const SubwordTable& table, std::ostream& out);

// Throws DataError on any malformed line.
SubwordTable ReadSubwordTable(std::istream& in,
                              double prob_eps = SubwordTable::kDefaultProbEps,
                              std::optional<int> max_len = std::nullopt,
                              std::optional<double> total_mass = std::nullopt);

// ---- Model directory ------------------------------------------------------
//
//   config        key=value lines of the training configuration
//   subwords.tsv  the subword table
//   vectors.txt   subword vectors in word2vec text format

inline constexpr const char* kConfigFile = "config";
inline constexpr const char* kSubwordsFile = "subwords.tsv";
inline constexpr const char* kVectorsFile = "vectors.txt";

void SaveModel(const PbosModel& model, const std::filesystem::path& dir);
PbosModel LoadModel(const std::filesystem::path& dir);

// Opens a file for reading or writing; throws DataError on failure.
std::ifstream OpenInput(const std::filesystem::path& path);
std::ofstream OpenOutput(const std::filesystem::path& path);

}  // namespace pbos::io

#endif  // PBOS_IO_FORMATS_H_
