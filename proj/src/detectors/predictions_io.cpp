#include <fstream>
#include <istream>
#include <ostream>

#include "xclone/detectors.hpp"
#include "xclone/errors.hpp"

namespace xclone::detectors {

using nlohmann::json;

namespace {

prompts::Verdict parse_verdict(std::string_view s) {
  for (auto v : {prompts::Verdict::kClone, prompts::Verdict::kNonClone, prompts::Verdict::kUndecided}) {
    if (prompts::to_string(v) == s) return v;
  }
  throw Error(ErrorKind::kValidation, "unknown verdict '" + std::string(s) + "'");
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional_number(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw Error(ErrorKind::kValidation, std::string("field '") + key + "' must be a number");
  return it->get<double>();
}

}  // namespace

json prediction_to_json(const Prediction& p) {
  json j = {
      {"pair_id", p.pair_id},
      {"backend", p.backend},
      {"predicted", to_string(p.predicted)},
      {"raw_score", optional_number(p.raw_score)},
      {"undecided", p.undecided},
  };
  if (p.prompt) {
    j["prompt"] = *p.prompt;
    j["verdict"] = p.verdict ? json(prompts::to_string(*p.verdict)) : json(nullptr);
    j["score"] = optional_number(p.score);
    j["steps"] = p.steps;
    j["raw"] = p.raw;
    if (!p.note.empty()) j["note"] = p.note;
  }
  return j;
}

Prediction prediction_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::kValidation, "prediction must be a JSON object");
  Prediction p;
  try {
    p.pair_id = j.at("pair_id").get<std::string>();
    p.backend = j.value("backend", std::string());
    p.predicted = parse_label(j.at("predicted").get<std::string>());
    p.raw_score = read_optional_number(j, "raw_score");
    p.undecided = j.value("undecided", false);
    if (auto it = j.find("prompt"); it != j.end() && !it->is_null()) {
      p.prompt = it->get<std::string>();
      if (auto v = j.find("verdict"); v != j.end() && !v->is_null()) p.verdict = parse_verdict(v->get<std::string>());
      p.score = read_optional_number(j, "score");
      p.steps = j.value("steps", 0);
      p.raw = j.value("raw", std::vector<std::string>{});
      p.note = j.value("note", std::string());
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kValidation, e.what());
  }
  if (p.pair_id.empty()) throw Error(ErrorKind::kValidation, "empty pair_id");
  return p;
}

void write_predictions(const std::vector<Prediction>& predictions, std::ostream& out) {
  for (const auto& p : predictions) out << prediction_to_json(p).dump() << '\n';
}

void write_predictions(const std::vector<Prediction>& predictions, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kData, "cannot write " + path.string());
  write_predictions(predictions, out);
}

std::vector<Prediction> read_predictions(std::istream& in) {
  std::vector<Prediction> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(prediction_from_json(json::parse(line)));
    } catch (const json::parse_error& e) {
      throw MalformedRecord(line_no, e.what());
    } catch (const MalformedRecord&) {
      throw;
    } catch (const Error& e) {
      throw MalformedRecord(line_no, e.what());
    }
  }
  return out;
}

std::vector<Prediction> read_predictions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kValidation, "cannot open predictions file " + path.string());
  return read_predictions(in);
}

}  // namespace xclone::detectors
