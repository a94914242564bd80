#include <algorithm>
#include <fstream>
#include <random>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "xclone/benchmark.hpp"
#include "xclone/errors.hpp"

namespace xclone {

using nlohmann::json;

std::string_view to_string(Label label) { return label == Label::kClone ? "clone" : "non_clone"; }

Label parse_label(std::string_view name) {
  if (name == "clone") return Label::kClone;
  if (name == "non_clone") return Label::kNonClone;
  throw Error(ErrorKind::kValidation, "unknown label '" + std::string(name) + "'");
}

std::string_view to_string(Provenance p) {
  return p == Provenance::kSameProblem ? "same_problem" : "cluster_furthest";
}

Provenance parse_provenance(std::string_view name) {
  if (name == "same_problem") return Provenance::kSameProblem;
  if (name == "cluster_furthest") return Provenance::kClusterFurthest;
  throw Error(ErrorKind::kValidation, "unknown provenance '" + std::string(name) + "'");
}

void validate_pairs(const Benchmark& pairs) {
  std::unordered_set<std::string> ids;
  for (const auto& p : pairs) {
    auto fail = [&](const std::string& why) {
      throw Error(ErrorKind::kValidation, "pair '" + p.pair_id + "': " + why);
    };
    if (!ids.insert(p.pair_id).second) fail("duplicate pair_id");
    if (p.a.language == p.b.language) fail("both sides use language '" + p.a.language + "'");
    const bool same = p.a.problem_id == p.b.problem_id;
    if (p.label == Label::kClone && !same) fail("clone pair spans two problems");
    if (p.label == Label::kNonClone && same) fail("non_clone pair shares a problem");
  }
}

namespace {

json side_to_json(const PairSide& s) {
  return {{"problem_id", s.problem_id}, {"language", s.language}, {"source", s.source}};
}

PairSide side_from_json(const json& j) {
  return {j.at("problem_id").get<std::string>(), j.at("language").get<std::string>(),
          j.at("source").get<std::string>()};
}

}  // namespace

void write_benchmark(const Benchmark& pairs, std::ostream& out, std::uint64_t seed) {
  const auto clones = static_cast<std::size_t>(
      std::count_if(pairs.begin(), pairs.end(), [](const auto& p) { return p.label == Label::kClone; }));
  const std::size_t non_clones = pairs.size() - clones;
  if (clones != non_clones) throw ImbalancedBenchmark(clones, non_clones);

  std::vector<std::size_t> order(pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t i : order) {
    const auto& p = pairs[i];
    json rec = {{"pair_id", p.pair_id},
                {"label", to_string(p.label)},
                {"a", side_to_json(p.a)},
                {"b", side_to_json(p.b)},
                {"provenance", to_string(p.provenance)}};
    out << rec.dump() << '\n';
  }
}

void write_benchmark(const Benchmark& pairs, const std::filesystem::path& path, std::uint64_t seed) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kData, "cannot write benchmark file " + path.string());
  write_benchmark(pairs, out, seed);
}

Benchmark read_benchmark(std::istream& in) {
  Benchmark pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json rec = json::parse(line);
      CandidatePair p;
      p.pair_id = rec.at("pair_id").get<std::string>();
      p.label = parse_label(rec.at("label").get<std::string>());
      p.a = side_from_json(rec.at("a"));
      p.b = side_from_json(rec.at("b"));
      p.provenance = parse_provenance(rec.value("provenance", "same_problem"));
      pairs.push_back(std::move(p));
    } catch (const json::exception& e) {
      throw MalformedRecord(line_no, e.what());
    } catch (const Error& e) {
      throw MalformedRecord(line_no, e.what());
    }
  }
  validate_pairs(pairs);
  return pairs;
}

Benchmark read_benchmark(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kValidation, "cannot open benchmark file " + path.string());
  return read_benchmark(in);
}

}  // namespace xclone
