#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "morphoseq/corpus.hpp"
#include "morphoseq/model.hpp"
#include "morphoseq/tokenizer.hpp"
#include "morphoseq/train.hpp"

namespace morphoseq {

/// Edit distance with insertion = deletion = 1 and substitution = 2, over code points.
std::size_t indel_distance(std::u32string_view a, std::u32string_view b);

/// ((|w1| + |w2|) - distance) / (|w1| + |w2|) with substitutions costing 2,
/// counted in Unicode code points. Two empty strings give 1.0.
double lev_ratio(std::string_view w1, std::string_view w2);

struct PredictionRecord {
  std::string item_key;  // identifies the test item for pairing
  std::string target_surface;
  std::string predicted_surface;
  bool correct = false;
  double ratio = 0.0;
  std::optional<AttentionTrace> attention;
};

PredictionRecord make_record(std::string item_key, std::string target, std::string predicted);

/// Key used to pair records of two models on the same test item.
std::string record_key(const InflectionEntry& e, std::size_t position);

struct EvalReport {
  std::string lang;
  Mode mode = Mode::CharMorpheme;
  int experiment = 0;
  std::size_t test_size = 0;
  std::size_t right = 0;
  std::size_t wrong = 0;
  double accuracy = 0.0;
  double mean_ratio = 0.0;
  std::vector<PredictionRecord> records;
};

/// Aggregates records into a report.
EvalReport summarize(std::string lang, Mode mode, int experiment,
                     std::vector<PredictionRecord> records);

struct EvalOptions {
  bool keep_attention = false;
  /// 0 = MORPHOSEQ_THREADS if set, otherwise the hardware concurrency.
  std::size_t threads = 0;
};

/// Worker count honouring MORPHOSEQ_THREADS as an upper bound.
std::size_t eval_threads(std::size_t requested = 0);

/// Greedy-decodes every test entry and scores it against its form.
EvalReport evaluate(const ModelParams& params, const Vocabulary& vocab,
                    const std::vector<InflectionEntry>& test, const ModelConfig& config,
                    const EvalOptions& opts = {});

struct SignificanceResult {
  double p_value = 1.0;
  std::size_t n_permutations = 0;
  double statistic = 0.0;  // accuracy(a) - accuracy(b)
  bool significant = false;
};

inline constexpr double kSignificanceLevel = 0.05;

/// Two-sided paired approximate randomization test on exact-match indicators.
/// p = (#{|permuted diff| >= |observed diff|} + 1) / (n_permutations + 1).
/// Throws ArgumentError when the records are not aligned item by item.
SignificanceResult paired_significance(const std::vector<PredictionRecord>& a,
                                       const std::vector<PredictionRecord>& b,
                                       std::size_t n_permutations = 10000,
                                       std::uint64_t seed = 0);

struct ExperimentConfig {
  ModelConfig model;
  SplitOptions split;
  LowResourceOptions low_resource;
  std::vector<Mode> modes{Mode::CharMorpheme, Mode::CharOnly};
  std::size_t n_permutations = 10000;
  EvalOptions eval;
};

struct ModeRun {
  Mode mode;
  EvalReport report;
  std::vector<double> loss_log;
  ModelParams params;
  Vocabulary vocab;
};

struct LanguageResult {
  std::string lang;
  std::size_t train_size = 0;
  std::vector<ModeRun> runs;  // in ExperimentConfig::modes order
  /// Char-morpheme versus char-only, when both were run.
  std::optional<SignificanceResult> significance;
};

struct ExperimentResult {
  int id = 0;
  std::uint64_t seed = 0;
  std::vector<LanguageResult> languages;
};

/// Experiment 1 trains on split.train and tests on split.test, 2 tests the
/// same models on split.unseen, 3 retrains on the low-resource subsample and
/// tests on its reduced test set. Each mode uses identical data and seeds.
LanguageResult run_experiment_on_split(int id, const std::string& lang, const CorpusSplit& split,
                                       const ExperimentConfig& config, std::uint64_t seed,
                                       const EpochCallback& on_epoch = {});

/// Splits each language of `corpus` with split_standard and runs the experiment.
ExperimentResult run_experiment(int id, const std::vector<InflectionEntry>& corpus,
                                const ExperimentConfig& config, std::uint64_t seed,
                                const EpochCallback& on_epoch = {});

struct RenderedReport {
  std::string text;
  std::string csv;
};

/// Results table with best-of-pair marks (*), significance marks (†) and
/// macro-averaged Total rows, as text and as CSV
/// (lang,mode,experiment,test,right,wrong,acc,lev,p_value,significant).
RenderedReport render_report(const std::vector<ExperimentResult>& results);

struct ReportRow {
  std::string lang;
  std::string mode;
  int experiment = 0;
  std::optional<std::size_t> test, right, wrong;
  double acc = 0.0;
  double lev = 0.0;
  std::optional<double> p_value;
  bool significant = false;
};

std::vector<ReportRow> report_rows(const std::vector<ExperimentResult>& results);
std::vector<ReportRow> parse_report_csv(std::string_view csv);

}  // namespace morphoseq
