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

// Command-line front end: build subword tables, train, predict, inspect
// segmentations, evaluate and benchmark.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pbos/bench.h"
#include "pbos/embedding_model.h"
#include "pbos/error.h"
#include "pbos/eval.h"
#include "pbos/io_formats.h"
#include "pbos/lattice.h"
#include "pbos/subword_stats.h"
#include "pbos/utf8.h"

namespace {

namespace fs = std::filesystem;
using pbos::DataError;
namespace io = pbos::io;

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

// Option combinations CLI11 cannot check on its own.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string Fixed3(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

// Runs fn on the named file, or on stdout for "-".
template <typename Fn>
void WithOutput(const std::string& path, Fn fn) {
  if (path == "-") {
    fn(std::cout);
    std::cout.flush();
    if (!std::cout) throw DataError("failed writing to stdout");
    return;
  }
  std::ofstream out = io::OpenOutput(path);
  fn(out);
  out.close();
  if (!out) throw DataError("failed writing '" + path + "'");
}

void WarnMalformed(const std::string& path, const io::LineErrors& errors) {
  if (errors.count == 0) return;
  std::cerr << path << ": skipped " << errors.count << " malformed line(s)";
  const char* sep = ", first at ";
  for (std::size_t line : errors.first_lines) {
    std::cerr << sep << line;
    sep = ", ";
  }
  std::cerr << '\n';
}

pbos::WordFreqList LoadFreqs(const std::string& path, bool lowercase) {
  std::ifstream in = io::OpenInput(path);
  io::FreqReadResult result = io::ReadFreqs(in, lowercase);
  WarnMalformed(path, result.malformed);
  if (result.freqs.empty()) throw DataError(path + ": no usable entries");
  return std::move(result.freqs);
}

pbos::SubwordTable LoadSubwords(const std::string& path, double prob_eps) {
  std::ifstream in = io::OpenInput(path);
  return io::ReadSubwordTable(in, prob_eps);
}

pbos::SubwordTable BuildTable(const std::string& freqs_path,
                              std::optional<int> max_len, double prob_eps,
                              bool lowercase) {
  return pbos::SubwordTable::Build(LoadFreqs(freqs_path, lowercase), max_len,
                                   prob_eps);
}

// ---- build-subwords -------------------------------------------------------

struct BuildSubwordsArgs {
  std::string freqs;
  std::optional<int> max_len;
  double prob_eps = pbos::SubwordTable::kDefaultProbEps;
  bool lowercase = false;
  std::string out;
};

void RunBuildSubwords(const BuildSubwordsArgs& a) {
  const pbos::SubwordTable table =
      BuildTable(a.freqs, a.max_len, a.prob_eps, a.lowercase);
  WithOutput(a.out,
             [&](std::ostream& out) { io::WriteSubwordTable(table, out); });
  std::cerr << "wrote " << table.size() << " subwords\n";
}

// ---- train ----------------------------------------------------------------

struct TrainArgs {
  std::string target;
  std::string subwords;
  double prob_eps = pbos::SubwordTable::kDefaultProbEps;
  std::string variant = "pbos";
  int epochs = 50;
  double lr = 1.0;
  bool lr_decay = true;
  std::uint64_t seed = 1;
  int bos_min_len = 3;
  int bos_max_len = 6;
  std::string bos_word_boundary = "auto";
  std::string out;
};

void RunTrain(const TrainArgs& a) {
  pbos::TrainConfig config;
  config.variant = *pbos::ParseVariant(a.variant);
  config.epochs = a.epochs;
  config.lr = a.lr;
  config.lr_decay = a.lr_decay;
  config.seed = a.seed;
  config.bos_min_len = a.bos_min_len;
  config.bos_max_len = a.bos_max_len;
  if (a.bos_word_boundary != "auto") {
    config.bos_word_boundary = a.bos_word_boundary == "on";
  }
  try {
    config.Validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  pbos::SubwordTable table;
  if (!a.subwords.empty()) {
    table = LoadSubwords(a.subwords, a.prob_eps);
  } else if (config.variant != pbos::Variant::kBos) {
    throw UsageError("--subwords is required for variant " + a.variant);
  }

  std::ifstream target_in = io::OpenInput(a.target);
  const io::EmbeddingReadResult targets = io::ReadEmbeddings(target_in);
  if (targets.duplicates > 0) {
    std::cerr << a.target << ": ignored " << targets.duplicates
              << " repeated token(s)\n";
  }
  std::cerr << "training " << pbos::VariantName(config.variant) << " on "
            << targets.embeddings.size() << " words, dim "
            << targets.embeddings.dim() << '\n';

  const auto print_loss = [](int epoch, double loss) {
    std::cout << epoch << '\t' << io::FormatValue(loss) << '\n';
  };
  const pbos::TrainResult result =
      pbos::Train(targets.embeddings, table, config, print_loss);
  io::SaveModel(result.model, a.out);
  std::cerr << "saved model to " << a.out << '\n';
}

// ---- predict --------------------------------------------------------------

struct PredictArgs {
  std::string model;
  std::string words = "-";
  std::string out = "-";
  bool lowercase = false;
};

std::vector<std::string> ReadWordList(std::istream& in, bool lowercase) {
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    std::string w = line.substr(first, last - first + 1);
    words.push_back(lowercase ? pbos::utf8::Lowercase(w) : std::move(w));
  }
  return words;
}

void RunPredict(const PredictArgs& a) {
  const pbos::PbosModel model = io::LoadModel(a.model);
  std::vector<std::string> words;
  if (a.words == "-") {
    words = ReadWordList(std::cin, a.lowercase);
  } else {
    std::ifstream in = io::OpenInput(a.words);
    words = ReadWordList(in, a.lowercase);
  }
  if (words.empty()) throw DataError("no query words");

  pbos::EmbeddingTable predicted(model.dim());
  for (const auto& w : words) {
    if (pbos::utf8::ContainsWhitespace(w) || !pbos::utf8::IsValid(w)) {
      throw DataError("query '" + w + "' is not a single UTF-8 token");
    }
    if (!predicted.Find(w)) predicted.Insert(w, model.Compose(w));
  }
  WithOutput(a.out,
             [&](std::ostream& out) { io::WriteEmbeddings(predicted, out); });
}

// ---- segment --------------------------------------------------------------

struct SegmentArgs {
  std::string subwords;
  double prob_eps = pbos::SubwordTable::kDefaultProbEps;
  std::size_t k = 5;
  std::size_t m = 5;
  std::vector<std::string> words;
};

void RunSegment(const SegmentArgs& a) {
  const pbos::SubwordTable table = LoadSubwords(a.subwords, a.prob_eps);
  for (const auto& w : a.words) {
    if (!pbos::utf8::IsValid(w)) throw DataError("word is not valid UTF-8");
    std::cout << w << '\t';
    const char* sep = "";
    for (const auto& s : pbos::TopKSegmentations(w, table, a.k)) {
      std::cout << sep << s.segmentation.ToString() << " ("
                << Fixed3(s.probability) << ')';
      sep = ", ";
    }
    std::cout << '\t';
    std::vector<pbos::SubwordWeight> weights =
        pbos::SubwordWeights(w, table).weights;
    std::stable_sort(weights.begin(), weights.end(),
                     [](const auto& x, const auto& y) {
                       return x.weight > y.weight;
                     });
    if (weights.size() > a.m) weights.resize(a.m);
    sep = "";
    for (const auto& sw : weights) {
      std::cout << sep << sw.subword << " (" << Fixed3(sw.weight) << ')';
      sep = ", ";
    }
    std::cout << '\n';
  }
}

// ---- eval-ws --------------------------------------------------------------

struct EvalWsArgs {
  std::string model;
  std::string vectors;
  std::vector<std::string> pairs;
  double norm_floor = 1e-8;
  bool no_lowercase = false;
};

void RunEvalWs(const EvalWsArgs& a) {
  pbos::VectorLookup lookup;
  std::optional<pbos::PbosModel> model;
  std::optional<pbos::TargetEmbeddings> vectors;
  if (!a.model.empty()) {
    model.emplace(io::LoadModel(a.model));
    lookup = [&](std::string_view w) -> std::optional<pbos::Vector> {
      return model->Compose(w);
    };
  } else {
    std::ifstream in = io::OpenInput(a.vectors);
    vectors.emplace(io::ReadEmbeddings(in).embeddings);
    lookup = [&](std::string_view w) -> std::optional<pbos::Vector> {
      if (const pbos::Vector* v = vectors->Find(w)) return *v;
      return std::nullopt;
    };
  }
  pbos::SimilarityOptions options;
  options.norm_floor = a.norm_floor;
  options.lowercase = !a.no_lowercase;

  std::ostringstream table, keys;
  table << "benchmark\tpairs\tzeroed\trho*100\n";
  for (const auto& path : a.pairs) {
    std::ifstream in = io::OpenInput(path);
    const io::PairsReadResult read = io::ReadSimilarityPairs(in);
    WarnMalformed(path, read.malformed);
    if (read.pairs.empty()) throw DataError(path + ": no usable pairs");
    pbos::SimilarityReport report;
    try {
      report = pbos::WordSimilarity(lookup, read.pairs, options);
    } catch (const std::invalid_argument& e) {
      throw DataError(path + ": " + e.what());
    }
    const std::string name = fs::path(path).stem().string();
    table << name << '\t' << report.pairs << '\t' << report.zeroed_pairs
          << '\t' << Fixed3(100.0 * report.spearman) << '\n';
    keys << name << ".pairs=" << report.pairs << '\n'
         << name << ".zeroed=" << report.zeroed_pairs << '\n'
         << name << ".spearman=" << io::FormatValue(report.spearman) << '\n';
  }
  std::cout << table.str() << '\n' << keys.str();
}

// ---- eval-affix -----------------------------------------------------------

struct EvalAffixArgs {
  std::string subwords;
  std::string freqs;
  std::optional<int> max_len;
  bool lowercase = false;
  double prob_eps = pbos::SubwordTable::kDefaultProbEps;
  std::string data;
  std::string inventory;
  std::uint64_t seed = 1;
  bool no_filter = false;
};

void RunEvalAffix(const EvalAffixArgs& a) {
  const pbos::SubwordTable table =
      a.subwords.empty()
          ? BuildTable(a.freqs, a.max_len, a.prob_eps, a.lowercase)
          : LoadSubwords(a.subwords, a.prob_eps);
  std::ifstream inv_in = io::OpenInput(a.inventory);
  const io::InventoryReadResult inventory = io::ReadAffixInventory(inv_in);
  WarnMalformed(a.inventory, inventory.malformed);
  if (inventory.inventory.empty()) throw DataError("empty affix inventory");
  std::ifstream data_in = io::OpenInput(a.data);
  const io::AffixReadResult data =
      io::ReadAffixInstances(data_in, inventory.inventory, a.lowercase);
  WarnMalformed(a.data, data.malformed);

  const pbos::AffixReport report = pbos::EvaluateAffixes(
      table, data.instances, inventory.inventory, a.seed, !a.no_filter);
  if (report.instances == 0) throw DataError("no instances left to score");

  std::cout << "instances\t" << report.instances << '\n'
            << "labels\t" << report.labels.size() << '\n'
            << "predictor\tprecision\trecall\tf1\n";
  const auto row = [](const char* name, const pbos::PrfScores& s) {
    std::cout << name << '\t' << Fixed3(s.precision) << '\t'
              << Fixed3(s.recall) << '\t' << Fixed3(s.f1) << '\n';
  };
  row("pbos", report.pbos);
  row("random", report.random);
  std::cout << '\n' << "instances=" << report.instances << '\n';
  const auto keys = [](const char* name, const pbos::PrfScores& s) {
    std::cout << name << ".precision=" << io::FormatValue(s.precision) << '\n'
              << name << ".recall=" << io::FormatValue(s.recall) << '\n'
              << name << ".f1=" << io::FormatValue(s.f1) << '\n';
  };
  keys("pbos", report.pbos);
  keys("random", report.random);
}

// ---- bench ----------------------------------------------------------------

struct BenchArgs {
  std::string model;
  std::string subwords;
  std::string freqs;
  double prob_eps = pbos::SubwordTable::kDefaultProbEps;
  std::size_t synthetic_words = 2000;
  std::size_t dim = 300;
  std::size_t words = 100;
  std::size_t word_len = 20;
  int repetitions = 15;
  std::uint64_t seed = 1;
};

void RunBench(const BenchArgs& a) {
  std::optional<pbos::PbosModel> loaded;
  pbos::SubwordTable table;
  if (!a.model.empty()) {
    loaded.emplace(io::LoadModel(a.model));
    table = loaded->table();
  } else if (!a.subwords.empty()) {
    table = LoadSubwords(a.subwords, a.prob_eps);
  } else if (!a.freqs.empty()) {
    table = BuildTable(a.freqs, std::nullopt, a.prob_eps, false);
  } else {
    table = pbos::SubwordTable::Build(
        pbos::bench::SyntheticFreqs(a.synthetic_words, a.seed), std::nullopt,
        a.prob_eps);
  }
  std::cerr << "subword table: " << table.size() << " entries\n";

  const pbos::bench::ScalingReport scaling = pbos::bench::MeasureScaling(
      table, a.seed, 10, 40, a.words, a.repetitions);
  const std::vector<std::string> words =
      pbos::bench::RandomWords(table, a.words, a.word_len, a.seed + 2);
  const pbos::PbosModel model =
      loaded ? *loaded : pbos::bench::RandomModel(table, words, a.dim, a.seed);
  const pbos::bench::LatencyReport latency =
      pbos::bench::MeasureComposeLatency(model, words, a.repetitions);

  std::cout << "subword weights, l=10: " << Fixed3(scaling.short_us)
            << " us/word\n"
            << "subword weights, l=40: " << Fixed3(scaling.long_us)
            << " us/word\n"
            << "scaling ratio l=40 / l=10: " << Fixed3(scaling.ratio) << '\n'
            << "compose, dim " << latency.dim << ", l=" << latency.word_len
            << ": " << Fixed3(latency.median_us) << " us/word (max "
            << Fixed3(latency.max_us) << " us)\n\n"
            << "weights_l10_us=" << io::FormatValue(scaling.short_us) << '\n'
            << "weights_l40_us=" << io::FormatValue(scaling.long_us) << '\n'
            << "scaling_ratio=" << io::FormatValue(scaling.ratio) << '\n'
            << "compose_dim=" << latency.dim << '\n'
            << "compose_median_us=" << io::FormatValue(latency.median_us)
            << '\n'
            << "compose_max_us=" << io::FormatValue(latency.max_us) << '\n';
}

// prob_eps must be a proper probability.
const CLI::Validator kOpenUnit(
    [](std::string& value) -> std::string {
      double x = 0.0;
      if (!CLI::detail::lexical_cast(value, x) || !(x > 0.0 && x < 1.0)) {
        return "value must lie strictly between 0 and 1";
      }
      return {};
    },
    "in (0, 1)");

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probabilistic bag-of-subwords embeddings for "
               "out-of-vocabulary words"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  BuildSubwordsArgs build;
  auto* cmd_build = app.add_subcommand(
      "build-subwords", "Estimate subword probabilities from word counts");
  cmd_build->add_option("--freqs", build.freqs, "word,count list")->required();
  cmd_build->add_option("--max-len", build.max_len,
                        "Longest subword kept, in characters (default: none)")
      ->check(CLI::PositiveNumber);
  cmd_build->add_option("--prob-eps", build.prob_eps,
                        "Probability of an unseen single character")
      ->check(kOpenUnit);
  cmd_build->add_flag("--lowercase", build.lowercase,
                      "Lowercase words before counting");
  cmd_build->add_option("--out", build.out, "Output table, - for stdout")
      ->required();

  TrainArgs train;
  auto* cmd_train =
      app.add_subcommand("train", "Fit subword vectors to target embeddings");
  cmd_train->add_option("--target", train.target,
                        "Target embeddings, word2vec text format")
      ->required();
  cmd_train->add_option("--subwords", train.subwords,
                        "Subword table (optional for bos)");
  cmd_train->add_option("--prob-eps", train.prob_eps,
                        "Probability of an unseen single character")
      ->check(kOpenUnit);
  cmd_train->add_option("--variant", train.variant, "Composition")
      ->check(CLI::IsMember({"pbos", "bos", "pbos-n"}));
  cmd_train->add_option("--epochs", train.epochs, "Training epochs")
      ->check(CLI::NonNegativeNumber);
  cmd_train->add_option("--lr", train.lr, "Initial learning rate")
      ->check(CLI::PositiveNumber);
  cmd_train
      ->add_flag("--lr-decay,!--no-lr-decay", train.lr_decay,
                 "Scale the learning rate by 1/sqrt(epoch)")
      ->default_str("true");
  cmd_train->add_option("--seed", train.seed, "Shuffling seed");
  cmd_train->add_option("--bos-min-len", train.bos_min_len,
                        "Shortest n-gram for bos")
      ->check(CLI::PositiveNumber);
  cmd_train->add_option("--bos-max-len", train.bos_max_len,
                        "Longest n-gram for bos")
      ->check(CLI::PositiveNumber);
  cmd_train->add_option("--bos-word-boundary", train.bos_word_boundary,
                        "Boundary markers for bos n-grams; auto is on for bos")
      ->check(CLI::IsMember({"auto", "on", "off"}));
  cmd_train->add_option("--out", train.out, "Model directory")->required();

  PredictArgs predict;
  auto* cmd_predict =
      app.add_subcommand("predict", "Compose vectors for query words");
  cmd_predict->add_option("--model", predict.model, "Model directory")
      ->required();
  cmd_predict->add_option("--words", predict.words,
                          "One word per line, - for stdin");
  cmd_predict->add_option("--out", predict.out,
                          "Output embeddings, - for stdout");
  cmd_predict->add_flag("--lowercase", predict.lowercase,
                        "Lowercase query words");

  SegmentArgs segment;
  auto* cmd_segment = app.add_subcommand(
      "segment", "Show top segmentations and subword weights");
  cmd_segment->add_option("--subwords", segment.subwords, "Subword table")
      ->required();
  cmd_segment->add_option("--prob-eps", segment.prob_eps,
                          "Probability of an unseen single character")
      ->check(kOpenUnit);
  cmd_segment->add_option("--k", segment.k, "Segmentations per word")
      ->check(CLI::PositiveNumber);
  cmd_segment->add_option("--m", segment.m, "Subwords per word")
      ->check(CLI::PositiveNumber);
  cmd_segment->add_option("words", segment.words, "Words to inspect")
      ->required();

  EvalWsArgs ws;
  auto* cmd_ws =
      app.add_subcommand("eval-ws", "Spearman correlation on similarity files");
  auto* ws_model = cmd_ws->add_option("--model", ws.model, "Model directory");
  auto* ws_vectors = cmd_ws->add_option(
      "--vectors", ws.vectors, "Fixed embeddings instead of a model");
  ws_model->excludes(ws_vectors);
  cmd_ws->add_option("--pairs", ws.pairs, "word1<TAB>word2<TAB>score files")
      ->required();
  cmd_ws->add_option("--norm-floor", ws.norm_floor,
                     "Vectors shorter than this score 0")
      ->check(CLI::NonNegativeNumber);
  cmd_ws->add_flag("--no-lowercase", ws.no_lowercase,
                   "Keep benchmark words as written");

  EvalAffixArgs affix;
  auto* cmd_affix =
      app.add_subcommand("eval-affix", "Macro P/R/F1 of affix prediction");
  auto* affix_subwords =
      cmd_affix->add_option("--subwords", affix.subwords, "Subword table");
  auto* affix_freqs = cmd_affix->add_option(
      "--freqs", affix.freqs, "Build the table from this word,count list");
  affix_subwords->excludes(affix_freqs);
  cmd_affix->add_option("--max-len", affix.max_len,
                        "With --freqs: longest subword (default: none)")
      ->check(CLI::PositiveNumber);
  cmd_affix->add_flag("--lowercase", affix.lowercase,
                      "Lowercase counted and evaluated words");
  cmd_affix->add_option("--prob-eps", affix.prob_eps,
                        "Probability of an unseen single character")
      ->check(kOpenUnit);
  cmd_affix->add_option("--data", affix.data, "word<TAB>label file")
      ->required();
  cmd_affix->add_option("--inventory", affix.inventory,
                        "label<TAB>prefix|suffix file")
      ->required();
  cmd_affix->add_option("--seed", affix.seed, "Random baseline seed");
  cmd_affix->add_flag("--no-filter", affix.no_filter,
                      "Keep single-candidate and -y instances");

  BenchArgs bench;
  auto* cmd_bench = app.add_subcommand(
      "bench", "Time subword weights at l=10 and l=40, and composition");
  auto* bench_model = cmd_bench->add_option("--model", bench.model,
                                            "Time this model's composition");
  auto* bench_subwords =
      cmd_bench->add_option("--subwords", bench.subwords, "Subword table");
  auto* bench_freqs = cmd_bench->add_option(
      "--freqs", bench.freqs, "Build the table from this word,count list");
  bench_model->excludes(bench_subwords)->excludes(bench_freqs);
  bench_subwords->excludes(bench_freqs);
  cmd_bench->add_option("--prob-eps", bench.prob_eps,
                        "Probability of an unseen single character")
      ->check(kOpenUnit);
  cmd_bench->add_option("--synthetic-words", bench.synthetic_words,
                        "Random vocabulary size when no table is given")
      ->check(CLI::PositiveNumber);
  cmd_bench->add_option("--dim", bench.dim, "Random model dimension")
      ->check(CLI::PositiveNumber);
  cmd_bench->add_option("--words", bench.words, "Words per timed batch")
      ->check(CLI::PositiveNumber);
  cmd_bench->add_option("--word-len", bench.word_len,
                        "Length of composed words")
      ->check(CLI::PositiveNumber);
  cmd_bench->add_option("--repetitions", bench.repetitions,
                        "Timed batches; the median is reported")
      ->check(CLI::PositiveNumber);
  cmd_bench->add_option("--seed", bench.seed, "Word sampling seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*cmd_build) RunBuildSubwords(build);
    if (*cmd_train) RunTrain(train);
    if (*cmd_predict) RunPredict(predict);
    if (*cmd_segment) RunSegment(segment);
    if (*cmd_ws) {
      if (ws.model.empty() && ws.vectors.empty()) {
        throw UsageError("one of --model or --vectors is required");
      }
      RunEvalWs(ws);
    }
    if (*cmd_affix) {
      if (affix.subwords.empty() && affix.freqs.empty()) {
        throw UsageError("one of --subwords or --freqs is required");
      }
      RunEvalAffix(affix);
    }
    if (*cmd_bench) RunBench(bench);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return 0;
}
