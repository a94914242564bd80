#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace xclone::corpus {

enum class SampleStatus { kAccepted, kOther };

struct CodeSample {
  std::string problem_id;
  std::string language;
  std::string source;
  SampleStatus status = SampleStatus::kAccepted;
  int complexity = 1;
};

struct Problem {
  std::string problem_id;
  std::string description;
  std::vector<CodeSample> samples;
};

using Corpus = std::vector<Problem>;

// Lexical description of a language: what counts as a branch point and how
// comments and string literals are delimited. Nested block comments are not
// handled.
struct LanguageKeywordTable {
  std::string language;
  // Identifier-like tokens ("if", "elif") match whole words; anything else
  // ("&&", "?") matches as punctuation.
  std::vector<std::string> decision_tokens;
  std::vector<std::string> line_comments;
  std::vector<std::pair<std::string, std::string>> block_comments;
  // Quote delimiters, longest first matching (e.g. `"""` before `"`).
  std::vector<std::string> string_quotes;
  // Quotes in this list may span newlines; others terminate at end of line.
  std::vector<std::string> multiline_quotes;
  char escape = '\\';
};

class KeywordRegistry {
 public:
  // Built-in tables for java, c, cpp, csharp, python, javascript, typescript,
  // php, ruby, go, rust, kotlin, swift, scala, perl, haskell, pascal.
  static KeywordRegistry with_defaults();

  void set(LanguageKeywordTable table);
  bool contains(std::string_view language) const;
  // Throws UnknownLanguage.
  const LanguageKeywordTable& at(std::string_view language) const;
  std::vector<std::string> languages() const;

  // Override or extend tables from a JSON object keyed by language:
  // {"java": {"decision_tokens": [...], "line_comments": [...], ...}}.
  // Missing fields fall back to the existing table for that language.
  void apply_overrides(const nlohmann::json& overrides);

 private:
  std::map<std::string, LanguageKeywordTable, std::less<>> tables_;
};

// Source text with comments and string literals blanked out. Newlines are
// preserved so positions stay meaningful.
std::string strip_comments_and_strings(std::string_view source, const LanguageKeywordTable& table);

// 1 + number of decision-token occurrences outside comments and strings.
// Throws UnknownLanguage if table.language differs from sample.language.
int compute_complexity(const CodeSample& sample, const LanguageKeywordTable& table);
int compute_complexity(std::string_view source, const LanguageKeywordTable& table);

// Max over the problem's samples. Throws NoSamples.
int problem_complexity(const Problem& problem);

// Reads a JSONL corpus, drops non-accepted samples and problems left without
// samples, and scores every sample. Throws MalformedRecord, DuplicateProblemId,
// EmptyCorpus.
Corpus load_corpus(const std::filesystem::path& path, const KeywordRegistry& registry);
Corpus parse_corpus(std::istream& in, const KeywordRegistry& registry);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);
void write_corpus(const Corpus& corpus, std::ostream& out);

std::string_view to_string(SampleStatus status);

}  // namespace xclone::corpus
