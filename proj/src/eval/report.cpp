#include <ostream>
#include <set>
#include <unordered_map>

#include <fmt/format.h>

#include "xclone/errors.hpp"
#include "xclone/eval.hpp"

namespace xclone::eval {

using nlohmann::json;

namespace {

json class_json(const ClassMetrics& m) { return {{"recall", m.recall}, {"precision", m.precision}, {"f1", m.f1}}; }

json block_json(const MetricsBlock& b) {
  return {
      {"counts", {{"tp", b.counts.tp}, {"fp", b.counts.fp}, {"tn", b.counts.tn}, {"fn", b.counts.fn}}},
      {"per_class", {{"clone", class_json(b.clone)}, {"non_clone", class_json(b.non_clone)}}},
      {"macro", class_json(b.macro)},
      {"zero_division", b.zero_division},
  };
}

std::string f2(double v) { return fmt::format("{:.2f}", v); }

// Pads every column to its widest cell.
std::string render_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string out = "|";
    for (std::size_t c = 0; c < cells.size(); ++c) out += fmt::format(" {:<{}} |", cells[c], width[c]);
    return out + "\n";
  };
  std::string out = line(header);
  out += "|";
  for (std::size_t w : width) out += std::string(w + 2, '-') + "|";
  out += "\n";
  for (const auto& r : rows) out += line(r);
  return out;
}

}  // namespace

json report_to_json(const EvalReport& r) {
  json langs = json::object();
  for (const auto& [lang, b] : r.per_language_pair) langs[lang] = block_json(b);
  json j = block_json(r.overall);
  j["backend"] = r.backend;
  j["n"] = r.n;
  j["undecided"] = r.undecided;
  j["undecided_rate"] = r.undecided_rate;
  j["per_language_pair"] = std::move(langs);
  return j;
}

json sweep_to_json(const SweepResult& s) {
  json rows = json::array();
  for (std::size_t i = 0; i < s.rows.size(); ++i) {
    rows.push_back({{"theta", s.rows[i].theta}, {"best", i == s.best}, {"report", report_to_json(s.rows[i].report)}});
  }
  json j = {{"rows", std::move(rows)}};
  if (!s.rows.empty()) j["best_theta"] = s.rows[s.best].theta;
  return j;
}

std::string markdown_class_table(const std::vector<EvalReport>& reports) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : reports) {
    const auto& o = r.overall;
    rows.push_back({r.backend, "Non-clone", f2(o.non_clone.recall), f2(o.non_clone.precision), f2(o.non_clone.f1)});
    rows.push_back({"", "Clone", f2(o.clone.recall), f2(o.clone.precision), f2(o.clone.f1)});
    rows.push_back({"", "Average", f2(o.macro.recall), f2(o.macro.precision), f2(o.macro.f1)});
  }
  return render_table({"Name", "Clone type", "Recall", "Precision", "F1-score"}, rows);
}

std::string markdown_language_table(const std::vector<EvalReport>& reports) {
  std::set<std::string> langs;
  for (const auto& r : reports) {
    for (const auto& [lang, _] : r.per_language_pair) langs.insert(lang);
  }
  std::vector<std::string> header = {"Lang-X"};
  for (const auto& r : reports) header.push_back(r.backend);
  std::vector<std::vector<std::string>> rows;
  for (const auto& lang : langs) {
    std::vector<std::string> row = {lang};
    for (const auto& r : reports) {
      auto it = r.per_language_pair.find(lang);
      row.push_back(it == r.per_language_pair.end() ? "-" : f2(it->second.macro.f1));
    }
    rows.push_back(std::move(row));
  }
  return render_table(header, rows);
}

std::string markdown_sweep_table(const SweepResult& s) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < s.rows.size(); ++i) {
    const auto& o = s.rows[i].report.overall;
    rows.push_back({fmt::format("{:g}", s.rows[i].theta), f2(o.clone.f1), f2(o.non_clone.f1), f2(o.macro.f1),
                    i == s.best ? "*" : ""});
  }
  return render_table({"Threshold", "Clone F1", "Non-clone F1", "Macro F1", "Best"}, rows);
}

void write_predictions_csv(const std::vector<detectors::Prediction>& predictions, const Benchmark& ground_truth,
                           std::ostream& out) {
  std::unordered_map<std::string_view, const CandidatePair*> truth;
  for (const auto& p : ground_truth) truth.emplace(p.pair_id, &p);
  out << "pair_id,partner_language,truth,predicted,undecided,raw_score\n";
  for (const auto& p : predictions) {
    auto it = truth.find(p.pair_id);
    if (it == truth.end()) throw MissingGroundTruth(p.pair_id);
    // pair ids and language tags never contain commas or quotes in our formats,
    // but quote anyway so foreign ids stay parseable.
    std::string id = p.pair_id;
    for (std::size_t pos = id.find('"'); pos != std::string::npos; pos = id.find('"', pos + 2)) id.insert(pos, "\"");
    out << '"' << id << "\"," << it->second->partner_language() << ',' << to_string(it->second->label) << ','
        << to_string(p.predicted) << ',' << (p.undecided ? "true" : "false") << ','
        << (p.raw_score ? fmt::format("{}", *p.raw_score) : std::string()) << '\n';
  }
}

}  // namespace xclone::eval
