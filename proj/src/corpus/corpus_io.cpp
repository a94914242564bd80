#include <algorithm>
#include <cctype>
#include <fstream>
#include <unordered_set>

#include "xclone/corpus.hpp"
#include "xclone/errors.hpp"

namespace xclone::corpus {
namespace {

using nlohmann::json;

bool blank_text(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

const json& require(const json& obj, const char* key, json::value_t type, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) throw MalformedRecord(line, std::string("missing field '") + key + "'");
  if (it->type() != type) throw MalformedRecord(line, std::string("field '") + key + "' has wrong type");
  return *it;
}

Problem parse_problem(const json& rec, std::size_t line, const KeywordRegistry& registry) {
  if (!rec.is_object()) throw MalformedRecord(line, "record is not a JSON object");
  Problem p;
  p.problem_id = require(rec, "problem_id", json::value_t::string, line).get<std::string>();
  if (p.problem_id.empty()) throw MalformedRecord(line, "empty problem_id");
  p.description = require(rec, "description", json::value_t::string, line).get<std::string>();
  if (blank_text(p.description)) throw MalformedRecord(line, "empty description");

  const auto& samples = require(rec, "samples", json::value_t::array, line);
  for (const auto& s : samples) {
    if (!s.is_object()) throw MalformedRecord(line, "sample is not a JSON object");
    CodeSample cs;
    cs.problem_id = p.problem_id;
    cs.language = lowercase(require(s, "language", json::value_t::string, line).get<std::string>());
    cs.source = require(s, "source", json::value_t::string, line).get<std::string>();
    const auto status = require(s, "status", json::value_t::string, line).get<std::string>();
    if (status == "accepted") {
      cs.status = SampleStatus::kAccepted;
    } else if (status == "other") {
      cs.status = SampleStatus::kOther;
    } else {
      throw MalformedRecord(line, "unknown status '" + status + "'");
    }
    if (cs.status != SampleStatus::kAccepted) continue;
    if (blank_text(cs.source)) throw MalformedRecord(line, "empty source");
    if (!registry.contains(cs.language)) {
      throw MalformedRecord(line, "language '" + cs.language + "' is not registered");
    }
    cs.complexity = compute_complexity(cs, registry.at(cs.language));
    p.samples.push_back(std::move(cs));
  }
  return p;
}

}  // namespace

std::string_view to_string(SampleStatus status) {
  return status == SampleStatus::kAccepted ? "accepted" : "other";
}

Corpus parse_corpus(std::istream& in, const KeywordRegistry& registry) {
  Corpus corpus;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank_text(line)) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw MalformedRecord(line_no, "invalid JSON");
    }
    Problem p = parse_problem(rec, line_no, registry);
    if (!seen.insert(p.problem_id).second) throw DuplicateProblemId(p.problem_id);
    if (p.samples.empty()) continue;
    corpus.push_back(std::move(p));
  }
  if (corpus.empty()) throw EmptyCorpus();
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, const KeywordRegistry& registry) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kValidation, "cannot open corpus file " + path.string());
  return parse_corpus(in, registry);
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  for (const auto& p : corpus) {
    json samples = json::array();
    for (const auto& s : p.samples) {
      samples.push_back({{"language", s.language}, {"source", s.source}, {"status", to_string(s.status)}});
    }
    json rec = {{"problem_id", p.problem_id}, {"description", p.description}, {"samples", std::move(samples)}};
    out << rec.dump() << '\n';
  }
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kData, "cannot write corpus file " + path.string());
  write_corpus(corpus, out);
}

}  // namespace xclone::corpus
