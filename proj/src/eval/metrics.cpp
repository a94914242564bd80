#include <algorithm>
#include <charconv>
#include <cmath>
#include <unordered_map>

#include "xclone/errors.hpp"
#include "xclone/eval.hpp"

namespace xclone::eval {

void ConfusionCounts::add(Label truth, Label predicted) {
  if (truth == Label::kClone) {
    ++(predicted == Label::kClone ? tp : fn);
  } else {
    ++(predicted == Label::kClone ? fp : tn);
  }
}

double f1_score(double precision, double recall) {
  const double s = precision + recall;
  return s > 0.0 ? 2.0 * precision * recall / s : 0.0;
}

ClassMetrics macro_average(const ClassMetrics& x, const ClassMetrics& y) {
  return {(x.recall + y.recall) / 2.0, (x.precision + y.precision) / 2.0, (x.f1 + y.f1) / 2.0};
}

namespace {

double ratio(std::size_t num, std::size_t den, bool& zero_division) {
  if (den == 0) {
    zero_division = true;
    return 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

ClassMetrics class_metrics(std::size_t tp, std::size_t fp, std::size_t fn, bool& zero_division) {
  ClassMetrics m;
  m.precision = ratio(tp, tp + fp, zero_division);
  m.recall = ratio(tp, tp + fn, zero_division);
  m.f1 = f1_score(m.precision, m.recall);
  return m;
}

struct Scored {
  const CandidatePair* truth;
  const detectors::Prediction* prediction;
};

std::vector<Scored> join(const std::vector<detectors::Prediction>& predictions, const Benchmark& ground_truth) {
  std::unordered_map<std::string_view, const CandidatePair*> truth;
  for (const auto& p : ground_truth) truth.emplace(p.pair_id, &p);
  std::unordered_map<std::string_view, const detectors::Prediction*> seen;
  std::vector<Scored> out;
  out.reserve(predictions.size());
  for (const auto& pred : predictions) {
    auto it = truth.find(pred.pair_id);
    if (it == truth.end()) throw MissingGroundTruth(pred.pair_id);
    if (!seen.emplace(pred.pair_id, &pred).second) {
      throw Error(ErrorKind::kValidation, "pair '" + pred.pair_id + "' has more than one prediction");
    }
    out.push_back({it->second, &pred});
  }
  for (const auto& p : ground_truth) {
    if (!seen.count(p.pair_id)) throw Error(ErrorKind::kData, "no prediction for benchmark pair '" + p.pair_id + "'");
  }
  return out;
}

EvalReport build_report(const std::vector<Scored>& rows, bool skip_undecided) {
  EvalReport r;
  std::map<std::string, ConfusionCounts> per_lang;
  ConfusionCounts all;
  for (const auto& row : rows) {
    if (r.backend.empty()) r.backend = row.prediction->backend;
    ++r.n;
    if (row.prediction->undecided) {
      ++r.undecided;
      if (skip_undecided) continue;
    }
    all.add(row.truth->label, row.prediction->predicted);
    per_lang[row.truth->partner_language()].add(row.truth->label, row.prediction->predicted);
  }
  r.undecided_rate = r.n == 0 ? 0.0 : static_cast<double>(r.undecided) / static_cast<double>(r.n);
  r.overall = metrics_from_counts(all);
  for (const auto& [lang, counts] : per_lang) r.per_language_pair[lang] = metrics_from_counts(counts);
  return r;
}

}  // namespace

MetricsBlock metrics_from_counts(const ConfusionCounts& c) {
  MetricsBlock m;
  m.counts = c;
  m.clone = class_metrics(c.tp, c.fp, c.fn, m.zero_division);
  // The non-clone class swaps roles: its true positives are our true negatives.
  m.non_clone = class_metrics(c.tn, c.fn, c.fp, m.zero_division);
  m.macro = macro_average(m.clone, m.non_clone);
  return m;
}

EvalReport compute_metrics(const std::vector<detectors::Prediction>& predictions, const Benchmark& ground_truth) {
  return build_report(join(predictions, ground_truth), false);
}

EvalReport compute_decided_metrics(const std::vector<detectors::Prediction>& predictions,
                                   const Benchmark& ground_truth) {
  return build_report(join(predictions, ground_truth), true);
}

SweepResult sweep_threshold(const std::vector<std::pair<std::string, double>>& scores, const Benchmark& ground_truth,
                            const std::vector<double>& grid) {
  if (grid.empty()) throw EmptyGrid();
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw Error(ErrorKind::kUsage, "threshold grid must be strictly increasing");
  }
  std::vector<detectors::Prediction> base;
  base.reserve(scores.size());
  for (const auto& [id, s] : scores) {
    detectors::Prediction p;
    p.pair_id = id;
    p.backend = "sweep";
    p.raw_score = s;
    base.push_back(std::move(p));
  }
  SweepResult out;
  for (double theta : grid) {
    out.rows.push_back({theta, compute_metrics(detectors::rethreshold(base, theta), ground_truth)});
    if (out.rows.back().report.overall.macro.f1 > out.rows[out.best].report.overall.macro.f1) {
      out.best = out.rows.size() - 1;
    }
  }
  return out;
}

std::vector<double> parse_grid(std::string_view spec) {
  double v[3];
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t end = i < 2 ? spec.find(':', pos) : spec.size();
    if (end == std::string_view::npos) throw Error(ErrorKind::kUsage, "grid must look like a:b:step");
    const std::string part(spec.substr(pos, end - pos));
    std::size_t used = 0;
    try {
      v[i] = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (part.empty() || used != part.size() || !std::isfinite(v[i])) {
      throw Error(ErrorKind::kUsage, "bad grid component '" + part + "'");
    }
    pos = end + 1;
  }
  const double a = v[0], b = v[1], step = v[2];
  if (!(step > 0.0)) throw Error(ErrorKind::kUsage, "grid step must be positive");
  if (b < a) throw EmptyGrid();
  // Tolerance keeps "0:1:0.05" at 21 points despite binary rounding.
  const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
  std::vector<double> grid(count);
  // Snap to 12 decimals so 0.1 + 2 * 0.1 reads as 0.3.
  for (std::size_t i = 0; i < count; ++i) grid[i] = std::round((a + static_cast<double>(i) * step) * 1e12) / 1e12;
  return grid;
}

}  // namespace xclone::eval
