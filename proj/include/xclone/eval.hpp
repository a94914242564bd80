#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "xclone/benchmark.hpp"
#include "xclone/detectors.hpp"
#include "xclone/ml/learner.hpp"

namespace xclone::eval {

// Clone is the positive class.
struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  void add(Label truth, Label predicted);
  bool operator==(const ConfusionCounts&) const = default;
};

struct ClassMetrics {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
};

// 2pr / (p + r), 0 when both are 0.
double f1_score(double precision, double recall);
ClassMetrics macro_average(const ClassMetrics& x, const ClassMetrics& y);

struct MetricsBlock {
  ConfusionCounts counts;
  ClassMetrics clone;
  ClassMetrics non_clone;
  ClassMetrics macro;
  // Some ratio had a zero denominator and was defined as 0.
  bool zero_division = false;
};

MetricsBlock metrics_from_counts(const ConfusionCounts& counts);

struct EvalReport {
  std::string backend;
  std::size_t n = 0;
  std::size_t undecided = 0;
  double undecided_rate = 0.0;
  MetricsBlock overall;
  // Keyed by partner language.
  std::map<std::string, MetricsBlock> per_language_pair;
};

// Every prediction must name a benchmark pair (MissingGroundTruth) and every
// benchmark pair must have exactly one prediction (Error(kData)).
EvalReport compute_metrics(const std::vector<detectors::Prediction>& predictions, const Benchmark& ground_truth);

// Undecided pairs are left out instead of mapped to the fallback label.
EvalReport compute_decided_metrics(const std::vector<detectors::Prediction>& predictions,
                                   const Benchmark& ground_truth);

struct SweepRow {
  double theta = 0.0;
  EvalReport report;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  // Row with the highest macro F1, the smallest theta on ties.
  std::size_t best = 0;
};

// Throws EmptyGrid; Error(kUsage) when the grid is not strictly increasing.
SweepResult sweep_threshold(const std::vector<std::pair<std::string, double>>& scores, const Benchmark& ground_truth,
                            const std::vector<double>& grid);

// "a:b:step", both ends inclusive. Throws EmptyGrid or Error(kUsage).
std::vector<double> parse_grid(std::string_view spec);

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Each class is shuffled with the seed and dealt round-robin across folds;
// the second class continues where the first stopped. Throws TooFewPerClass.
std::vector<Fold> stratified_kfold(const std::vector<Label>& labels, std::size_t k, std::uint64_t seed);

struct CvResult {
  EvalReport report;
  // Pooled test predictions in benchmark order.
  std::vector<detectors::Prediction> predictions;
};

// Folds train in parallel on up to `workers` threads; test predictions are
// pooled before scoring.
CvResult cross_validate(const Benchmark& pairs, const detectors::SnippetEmbeddings& embeddings,
                        const ml::LearnerSpec& spec, std::size_t k, std::uint64_t seed, std::size_t workers = 1);

// ---- report emission ----

nlohmann::json report_to_json(const EvalReport& report);
nlohmann::json sweep_to_json(const SweepResult& sweep);

// Rows Non-clone, Clone and Average with recall, precision and F1, one
// block per report.
std::string markdown_class_table(const std::vector<EvalReport>& reports);
// Macro F1 per partner language (rows) and report (columns).
std::string markdown_language_table(const std::vector<EvalReport>& reports);
std::string markdown_sweep_table(const SweepResult& sweep);

// pair_id, partner language, truth, prediction, undecided flag, raw score.
void write_predictions_csv(const std::vector<detectors::Prediction>& predictions, const Benchmark& ground_truth,
                           std::ostream& out);

}  // namespace xclone::eval
