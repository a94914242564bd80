#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace xclone {

enum class Label { kClone, kNonClone };

std::string_view to_string(Label label);
Label parse_label(std::string_view name);  // "clone" | "non_clone"
inline int to_sign(Label label) { return label == Label::kClone ? 1 : -1; }
inline Label from_sign(int sign) { return sign > 0 ? Label::kClone : Label::kNonClone; }

enum class Provenance { kSameProblem, kClusterFurthest };

std::string_view to_string(Provenance p);
Provenance parse_provenance(std::string_view name);

struct PairSide {
  std::string problem_id;
  std::string language;
  std::string source;

  bool operator==(const PairSide&) const = default;
};

// Two code samples in different languages with their ground-truth label.
// Side `a` always carries the anchor language.
struct CandidatePair {
  std::string pair_id;
  Label label = Label::kClone;
  PairSide a;
  PairSide b;
  Provenance provenance = Provenance::kSameProblem;

  // The non-anchor language, used for per-language breakdowns.
  const std::string& partner_language() const { return b.language; }
  bool operator==(const CandidatePair&) const = default;
};

using Benchmark = std::vector<CandidatePair>;

// Checks the cross-language and label/problem-id invariants and pair_id
// uniqueness. Throws Error(kValidation) naming the first offending pair.
void validate_pairs(const Benchmark& pairs);

// Shuffles with `seed` and writes JSONL. Throws ImbalancedBenchmark when the
// clone and non_clone counts differ.
void write_benchmark(const Benchmark& pairs, const std::filesystem::path& path, std::uint64_t seed);
void write_benchmark(const Benchmark& pairs, std::ostream& out, std::uint64_t seed);

// Throws MalformedRecord / validation errors.
Benchmark read_benchmark(const std::filesystem::path& path);
Benchmark read_benchmark(std::istream& in);

}  // namespace xclone
