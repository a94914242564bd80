#include <algorithm>

#include "xclone/corpus.hpp"
#include "xclone/errors.hpp"

namespace xclone::corpus {
namespace {

using Strings = std::vector<std::string>;
using BlockPairs = std::vector<std::pair<std::string, std::string>>;

const BlockPairs kCBlock = {{"/*", "*/"}};

LanguageKeywordTable make(std::string lang, Strings tokens, Strings line, BlockPairs block,
                          Strings quotes, Strings multiline = {}) {
  LanguageKeywordTable t;
  t.language = std::move(lang);
  t.decision_tokens = std::move(tokens);
  t.line_comments = std::move(line);
  t.block_comments = std::move(block);
  t.string_quotes = std::move(quotes);
  t.multiline_quotes = std::move(multiline);
  return t;
}

Strings strings_field(const nlohmann::json& j, const char* key, const Strings& fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<Strings>();
}

}  // namespace

KeywordRegistry KeywordRegistry::with_defaults() {
  KeywordRegistry r;
  const Strings c_quotes = {"\"", "'"};

  r.set(make("java", {"if", "for", "while", "case", "catch", "&&", "||", "?"}, {"//"}, kCBlock,
             {"\"\"\"", "\"", "'"}, {"\"\"\""}));
  r.set(make("c", {"if", "for", "while", "case", "&&", "||", "?"}, {"//"}, kCBlock, c_quotes));
  r.set(make("cpp", {"if", "for", "while", "case", "catch", "&&", "||", "?"}, {"//"}, kCBlock,
             c_quotes));
  r.set(make("csharp", {"if", "for", "foreach", "while", "case", "catch", "&&", "||", "?"}, {"//"},
             kCBlock, c_quotes));
  r.set(make("javascript", {"if", "for", "while", "case", "catch", "&&", "||", "?"}, {"//"}, kCBlock,
             {"\"", "'", "`"}, {"`"}));
  r.set(make("typescript", {"if", "for", "while", "case", "catch", "&&", "||", "?"}, {"//"}, kCBlock,
             {"\"", "'", "`"}, {"`"}));
  r.set(make("php", {"if", "elseif", "for", "foreach", "while", "case", "catch", "&&", "||", "and",
                     "or", "?"},
             {"//", "#"}, kCBlock, c_quotes, {"\"", "'"}));
  r.set(make("go", {"if", "for", "case", "&&", "||"}, {"//"}, kCBlock, {"\"", "'", "`"}, {"`"}));
  // `'` is left out for Rust: lifetimes would otherwise open a literal.
  r.set(make("rust", {"if", "for", "while", "loop", "match", "&&", "||", "?"}, {"//"}, kCBlock,
             {"\""}, {"\""}));
  r.set(make("kotlin", {"if", "for", "while", "when", "catch", "&&", "||"}, {"//"}, kCBlock,
             {"\"\"\"", "\"", "'"}, {"\"\"\""}));
  r.set(make("swift", {"if", "guard", "for", "while", "case", "catch", "&&", "||", "?"}, {"//"},
             kCBlock, {"\"\"\"", "\""}, {"\"\"\""}));
  r.set(make("scala", {"if", "for", "while", "case", "catch", "&&", "||"}, {"//"}, kCBlock,
             {"\"\"\"", "\"", "'"}, {"\"\"\""}));
  r.set(make("python", {"if", "elif", "for", "while", "except", "and", "or"}, {"#"}, {},
             {"\"\"\"", "'''", "\"", "'"}, {"\"\"\"", "'''"}));
  r.set(make("ruby", {"if", "elsif", "unless", "for", "while", "until", "when", "rescue", "&&",
                      "||", "and", "or", "?"},
             {"#"}, {{"=begin", "=end"}}, c_quotes, {"\"", "'"}));
  r.set(make("perl", {"if", "elsif", "unless", "for", "foreach", "while", "until", "&&", "||",
                      "and", "or"},
             {"#"}, {}, c_quotes, {"\"", "'"}));
  r.set(make("haskell", {"if", "case", "guard", "&&", "||"}, {"--"}, {{"{-", "-}"}}, {"\""}));
  r.set(make("pascal", {"if", "for", "while", "repeat", "case", "and", "or"}, {"//"},
             {{"{", "}"}, {"(*", "*)"}}, {"'"}));
  return r;
}

void KeywordRegistry::set(LanguageKeywordTable table) {
  if (table.decision_tokens.empty()) {
    throw Error(ErrorKind::kUsage,
                "keyword table for '" + table.language + "' has no decision tokens");
  }
  auto key = table.language;
  tables_.insert_or_assign(std::move(key), std::move(table));
}

bool KeywordRegistry::contains(std::string_view language) const {
  return tables_.find(language) != tables_.end();
}

const LanguageKeywordTable& KeywordRegistry::at(std::string_view language) const {
  auto it = tables_.find(language);
  if (it == tables_.end()) throw UnknownLanguage(std::string(language));
  return it->second;
}

std::vector<std::string> KeywordRegistry::languages() const {
  std::vector<std::string> out;
  out.reserve(tables_.size());
  for (const auto& [lang, _] : tables_) out.push_back(lang);
  return out;
}

void KeywordRegistry::apply_overrides(const nlohmann::json& overrides) {
  if (!overrides.is_object()) {
    throw Error(ErrorKind::kUsage, "keyword overrides must be a JSON object keyed by language");
  }
  for (const auto& [lang, spec] : overrides.items()) {
    LanguageKeywordTable t;
    if (auto it = tables_.find(lang); it != tables_.end()) t = it->second;
    t.language = lang;
    try {
      t.decision_tokens = strings_field(spec, "decision_tokens", t.decision_tokens);
      t.line_comments = strings_field(spec, "line_comments", t.line_comments);
      t.string_quotes = strings_field(spec, "string_quotes", t.string_quotes);
      t.multiline_quotes = strings_field(spec, "multiline_quotes", t.multiline_quotes);
      if (spec.contains("block_comments")) {
        t.block_comments = spec.at("block_comments").get<BlockPairs>();
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kUsage, "bad keyword override for '" + lang + "': " + e.what());
    }
    set(std::move(t));
  }
}

}  // namespace xclone::corpus
