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

#include "pbos/io_formats.h"

#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <utility>

#include "pbos/error.h"
#include "pbos/utf8.h"

namespace pbos::io {
namespace {

constexpr std::size_t kReportedLines = 10;

std::string_view Trim(std::string_view s) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> SplitSpaces(std::string_view s) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < s.size()) {
    while (pos < s.size() && s[pos] == ' ') ++pos;
    if (pos == s.size()) break;
    const std::size_t end = std::min(s.find(' ', pos), s.size());
    fields.push_back(s.substr(pos, end - pos));
    pos = end;
  }
  return fields;
}

std::vector<std::string_view> SplitTabs(std::string_view s) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const std::size_t end = s.find('\t', pos);
    if (end == std::string_view::npos) {
      fields.push_back(s.substr(pos));
      return fields;
    }
    fields.push_back(s.substr(pos, end - pos));
    pos = end + 1;
  }
}

std::optional<double> ParseDouble(std::string_view s) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() ||
      !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

template <typename T>
std::optional<T> ParseInt(std::string_view s) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

bool IsUsableWord(std::string_view w) {
  return !w.empty() && utf8::IsValid(w) && !utf8::ContainsWhitespace(w);
}

[[noreturn]] void Fail(std::size_t line, const std::string& what) {
  throw DataError("line " + std::to_string(line) + ": " + what);
}

bool ReadLine(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

template <typename T>
T ConfigNumber(std::string_view key, const std::string& value) {
  std::optional<T> parsed;
  if constexpr (std::is_floating_point_v<T>) {
    parsed = ParseDouble(value);
  } else {
    parsed = ParseInt<T>(value);
  }
  if (!parsed) {
    throw DataError("model config '" + std::string(key) +
                    "' is not a number: " + value);
  }
  return *parsed;
}

std::string FormatExact(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value,
                                    std::chars_format::general, 17);
  return std::string(buf, result.ptr);
}

}  // namespace

std::string FormatValue(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value,
                                    std::chars_format::general, 9);
  return std::string(buf, result.ptr);
}

void LineErrors::Record(std::size_t line) {
  ++count;
  if (first_lines.size() < kReportedLines) first_lines.push_back(line);
}

EmbeddingReadResult ReadEmbeddings(std::istream& in) {
  std::string line;
  if (!ReadLine(in, line)) throw DataError("line 1: missing header");
  const auto header = SplitSpaces(Trim(line));
  std::optional<std::size_t> count, dim;
  if (header.size() == 2) {
    count = ParseInt<std::size_t>(header[0]);
    dim = ParseInt<std::size_t>(header[1]);
  }
  if (!count || !dim || *dim == 0) {
    Fail(1, "malformed header, expected 'N d'");
  }

  EmbeddingReadResult result{TargetEmbeddings(*dim), 0};
  std::size_t line_no = 1;
  for (std::size_t r = 0; r < *count; ++r) {
    ++line_no;
    if (!ReadLine(in, line)) {
      Fail(line_no, "header promises " + std::to_string(*count) +
                        " records, found " + std::to_string(r));
    }
    const auto fields = SplitSpaces(Trim(line));
    if (fields.size() != *dim + 1) {
      Fail(line_no, "expected a token and " + std::to_string(*dim) +
                        " components, found " +
                        std::to_string(fields.empty() ? 0 : fields.size() - 1) +
                        " components");
    }
    if (!utf8::IsValid(fields[0])) Fail(line_no, "token is not valid UTF-8");
    Vector v(static_cast<Eigen::Index>(*dim));
    for (std::size_t c = 0; c < *dim; ++c) {
      const auto value = ParseDouble(fields[c + 1]);
      if (!value) {
        Fail(line_no, "non-numeric component '" + std::string(fields[c + 1]) +
                          "'");
      }
      v[static_cast<Eigen::Index>(c)] = *value;
    }
    if (!result.embeddings.Insert(std::string(fields[0]), std::move(v))) {
      ++result.duplicates;
    }
  }
  while (ReadLine(in, line)) {
    ++line_no;
    if (!Trim(line).empty()) {
      Fail(line_no, "more records than the header's " + std::to_string(*count));
    }
  }
  return result;
}

void WriteEmbeddings(const EmbeddingTable& table, std::ostream& out) {
  if (table.empty()) throw std::invalid_argument("no embeddings to write");
  for (const auto& token : table.tokens()) {
    if (token.empty() || utf8::ContainsWhitespace(token)) {
      throw std::invalid_argument("token '" + token +
                                  "' is empty or contains whitespace");
    }
  }
  std::string buf;
  out << table.size() << ' ' << table.dim() << '\n';
  for (std::size_t i = 0; i < table.size(); ++i) {
    buf = table.token(i);
    for (const double value : table.vector(i)) {
      buf.push_back(' ');
      buf += FormatValue(value);
    }
    buf.push_back('\n');
    out << buf;
  }
}

FreqReadResult ReadFreqs(std::istream& in, bool lowercase) {
  FreqReadResult result;
  std::string line;
  std::size_t line_no = 0;
  while (ReadLine(in, line)) {
    ++line_no;
    const std::string_view text = Trim(line);
    if (text.empty()) continue;
    std::size_t sep = text.rfind('\t');
    if (sep == std::string_view::npos) sep = text.rfind(',');
    if (sep == std::string_view::npos) {
      result.malformed.Record(line_no);
      continue;
    }
    const std::string_view word = Trim(text.substr(0, sep));
    const auto count = ParseInt<std::uint64_t>(Trim(text.substr(sep + 1)));
    if (!count || !IsUsableWord(word)) {
      result.malformed.Record(line_no);
      continue;
    }
    result.freqs.push_back(
        {lowercase ? utf8::Lowercase(word) : std::string(word), *count});
  }
  return result;
}

PairsReadResult ReadSimilarityPairs(std::istream& in) {
  PairsReadResult result;
  std::string line;
  std::size_t line_no = 0;
  while (ReadLine(in, line)) {
    ++line_no;
    const std::string_view text = Trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto fields = SplitTabs(text);
    std::optional<double> score;
    if (fields.size() >= 3) score = ParseDouble(Trim(fields[2]));
    if (!score || !IsUsableWord(Trim(fields[0])) ||
        !IsUsableWord(Trim(fields[1]))) {
      result.malformed.Record(line_no);
      continue;
    }
    result.pairs.push_back({std::string(Trim(fields[0])),
                            std::string(Trim(fields[1])), *score});
  }
  return result;
}

InventoryReadResult ReadAffixInventory(std::istream& in) {
  InventoryReadResult result;
  std::string line;
  std::size_t line_no = 0;
  while (ReadLine(in, line)) {
    ++line_no;
    const std::string_view text = Trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto fields = SplitTabs(text);
    if (fields.size() != 2) {
      result.malformed.Record(line_no);
      continue;
    }
    const std::string_view kind = Trim(fields[1]);
    const std::string_view label = Trim(fields[0]);
    if ((kind != "prefix" && kind != "suffix") || !IsUsableWord(label) ||
        label.find_first_not_of('-') == std::string_view::npos) {
      result.malformed.Record(line_no);
      continue;
    }
    result.inventory.push_back(MakeAffix(
        std::string(label),
        kind == "prefix" ? AffixKind::kPrefix : AffixKind::kSuffix));
  }
  return result;
}

AffixReadResult ReadAffixInstances(std::istream& in,
                                   const AffixInventory& inventory,
                                   bool lowercase) {
  AffixReadResult result;
  std::string line;
  std::size_t line_no = 0;
  while (ReadLine(in, line)) {
    ++line_no;
    const std::string_view text = Trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto fields = SplitTabs(text);
    if (fields.size() != 2 || !IsUsableWord(Trim(fields[0]))) {
      result.malformed.Record(line_no);
      continue;
    }
    const std::string_view label = Trim(fields[1]);
    bool known = false;
    for (const auto& affix : inventory) known = known || affix.label == label;
    if (!known) {
      result.malformed.Record(line_no);
      continue;
    }
    const std::string_view word = Trim(fields[0]);
    result.instances.push_back(
        {lowercase ? utf8::Lowercase(word) : std::string(word),
         std::string(label)});
  }
  return result;
}

void WriteSubwordTable(const SubwordTable& table, std::ostream& out) {
  std::string buf;
  for (const auto& [subword, prob] : table.SortedEntries()) {
    buf = subword;
    buf.push_back('\t');
    buf += FormatExact(prob);
    buf.push_back('\n');
    out << buf;
  }
}

SubwordTable ReadSubwordTable(std::istream& in, double prob_eps,
                              std::optional<int> max_len,
                              std::optional<double> total_mass) {
  StringMap<double> probs;
  std::string line;
  std::size_t line_no = 0;
  while (ReadLine(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::size_t sep = line.rfind('\t');
    if (sep == std::string::npos || sep == 0) {
      Fail(line_no, "expected 'subword<TAB>probability'");
    }
    const std::string_view subword = std::string_view(line).substr(0, sep);
    const auto prob = ParseDouble(std::string_view(line).substr(sep + 1));
    if (!prob || !(*prob > 0.0 && *prob <= 1.0)) {
      Fail(line_no, "probability must be a number in (0, 1]");
    }
    if (!utf8::IsValid(subword)) Fail(line_no, "subword is not valid UTF-8");
    if (!probs.emplace(std::string(subword), *prob).second) {
      Fail(line_no, "duplicate subword '" + std::string(subword) + "'");
    }
  }
  return SubwordTable::FromProbs(std::move(probs), prob_eps, max_len,
                                 total_mass);
}

std::ifstream OpenInput(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream OpenOutput(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  return out;
}

void SaveModel(const PbosModel& model, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw DataError("cannot create '" + dir.string() + "': " + ec.message());
  }
  const TrainConfig& config = model.config();
  const SubwordTable& table = model.table();
  {
    std::ofstream out = OpenOutput(dir / kConfigFile);
    out << "variant=" << VariantName(config.variant) << '\n'
        << "dim=" << model.dim() << '\n'
        << "epochs=" << config.epochs << '\n'
        << "lr=" << FormatExact(config.lr) << '\n'
        << "lr_decay=" << (config.lr_decay ? "true" : "false") << '\n'
        << "bos_min_len=" << config.bos_min_len << '\n'
        << "bos_max_len=" << config.bos_max_len << '\n'
        << "bos_word_boundary=" << (config.WordBoundary() ? "true" : "false")
        << '\n'
        << "prob_eps=" << FormatExact(table.prob_eps()) << '\n'
        << "seed=" << config.seed << '\n'
        << "max_len="
        << (table.max_len() ? std::to_string(*table.max_len()) : "none")
        << '\n'
        << "total_mass="
        << (table.total_mass() ? FormatExact(*table.total_mass()) : "none")
        << '\n';
    if (!out) throw DataError("failed writing model config");
  }
  {
    std::ofstream out = OpenOutput(dir / kSubwordsFile);
    WriteSubwordTable(table, out);
    if (!out) throw DataError("failed writing subword table");
  }
  {
    std::ofstream out = OpenOutput(dir / kVectorsFile);
    if (model.embeddings().empty()) {
      out << "0 " << model.dim() << '\n';
    } else {
      WriteEmbeddings(model.embeddings(), out);
    }
    if (!out) throw DataError("failed writing subword vectors");
  }
}

PbosModel LoadModel(const std::filesystem::path& dir) {
  std::map<std::string, std::string, std::less<>> kv;
  {
    std::ifstream in = OpenInput(dir / kConfigFile);
    std::string line;
    std::size_t line_no = 0;
    while (ReadLine(in, line)) {
      ++line_no;
      const std::string_view text = Trim(line);
      if (text.empty() || text.front() == '#') continue;
      const std::size_t eq = text.find('=');
      if (eq == std::string_view::npos) Fail(line_no, "expected key=value");
      kv.emplace(std::string(Trim(text.substr(0, eq))),
                 std::string(Trim(text.substr(eq + 1))));
    }
  }
  auto get = [&kv](std::string_view key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) {
      throw DataError("model config lacks '" + std::string(key) + "'");
    }
    return it->second;
  };
  auto get_bool = [&](std::string_view key) {
    const std::string& v = get(key);
    if (v != "true" && v != "false") {
      throw DataError("model config '" + std::string(key) +
                      "' must be true or false");
    }
    return v == "true";
  };
  TrainConfig config;
  const auto variant = ParseVariant(get("variant"));
  if (!variant) throw DataError("unknown variant '" + get("variant") + "'");
  config.variant = *variant;
  const auto dim = ConfigNumber<std::size_t>("dim", get("dim"));
  config.epochs = ConfigNumber<int>("epochs", get("epochs"));
  config.lr = ConfigNumber<double>("lr", get("lr"));
  config.lr_decay = get_bool("lr_decay");
  config.bos_min_len = ConfigNumber<int>("bos_min_len", get("bos_min_len"));
  config.bos_max_len = ConfigNumber<int>("bos_max_len", get("bos_max_len"));
  config.bos_word_boundary = get_bool("bos_word_boundary");
  const double prob_eps = ConfigNumber<double>("prob_eps", get("prob_eps"));
  config.seed = ConfigNumber<std::uint64_t>("seed", get("seed"));
  std::optional<int> max_len;
  if (get("max_len") != "none") {
    max_len = ConfigNumber<int>("max_len", get("max_len"));
  }
  std::optional<double> total_mass;
  if (get("total_mass") != "none") {
    total_mass = ConfigNumber<double>("total_mass", get("total_mass"));
  }
  try {
    config.Validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("model config: ") + e.what());
  }

  std::ifstream subwords_in = OpenInput(dir / kSubwordsFile);
  SubwordTable table =
      ReadSubwordTable(subwords_in, prob_eps, max_len, total_mass);

  std::ifstream vectors_in = OpenInput(dir / kVectorsFile);
  EmbeddingReadResult vectors = ReadEmbeddings(vectors_in);
  if (vectors.duplicates > 0) {
    throw DataError("subword vectors contain repeated tokens");
  }
  if (vectors.embeddings.dim() != dim) {
    throw DataError("subword vectors have dimension " +
                    std::to_string(vectors.embeddings.dim()) +
                    ", config says " + std::to_string(dim));
  }
  return PbosModel(std::move(table), std::move(vectors.embeddings), config);
}

}  // namespace pbos::io
