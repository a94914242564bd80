#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "xclone/corpus.hpp"
#include "xclone/errors.hpp"

namespace xclone::corpus {
namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

enum class Opener { kNone, kLine, kBlock, kString };

struct Match {
  Opener kind = Opener::kNone;
  std::size_t length = 0;
  std::string_view closer;  // block closer or string quote
};

Match match_opener(std::string_view src, std::size_t pos, const LanguageKeywordTable& t) {
  Match best;
  auto consider = [&](Opener kind, std::string_view opener, std::string_view closer) {
    if (opener.empty() || opener.size() <= best.length) return;
    if (src.substr(pos, opener.size()) == opener) best = {kind, opener.size(), closer};
  };
  for (const auto& lc : t.line_comments) consider(Opener::kLine, lc, {});
  for (const auto& [open, close] : t.block_comments) consider(Opener::kBlock, open, close);
  for (const auto& q : t.string_quotes) consider(Opener::kString, q, q);
  return best;
}

void blank(std::string& out, std::size_t from, std::size_t to) {
  for (std::size_t i = from; i < to && i < out.size(); ++i) {
    if (out[i] != '\n') out[i] = ' ';
  }
}

}  // namespace

std::string strip_comments_and_strings(std::string_view source, const LanguageKeywordTable& table) {
  std::string out(source);
  std::size_t i = 0;
  const std::size_t n = source.size();
  while (i < n) {
    const Match m = match_opener(source, i, table);
    switch (m.kind) {
      case Opener::kNone:
        ++i;
        break;
      case Opener::kLine: {
        std::size_t end = source.find('\n', i);
        if (end == std::string_view::npos) end = n;
        blank(out, i, end);
        i = end;
        break;
      }
      case Opener::kBlock: {
        std::size_t end = source.find(m.closer, i + m.length);
        end = (end == std::string_view::npos) ? n : end + m.closer.size();
        blank(out, i, end);
        i = end;
        break;
      }
      case Opener::kString: {
        const bool multiline = std::find(table.multiline_quotes.begin(), table.multiline_quotes.end(),
                                         m.closer) != table.multiline_quotes.end();
        std::size_t j = i + m.length;
        std::size_t end = n;
        while (j < n) {
          if (source[j] == table.escape) {
            j += 2;
            continue;
          }
          if (source[j] == '\n' && !multiline) {
            end = j;
            break;
          }
          if (source.substr(j, m.closer.size()) == m.closer) {
            end = j + m.closer.size();
            break;
          }
          ++j;
        }
        end = std::min(end, n);
        blank(out, i, end);
        i = end;
        break;
      }
    }
  }
  return out;
}

int compute_complexity(std::string_view source, const LanguageKeywordTable& table) {
  std::unordered_set<std::string_view> words;
  std::vector<std::string_view> ops;
  for (const auto& tok : table.decision_tokens) {
    if (!tok.empty() && is_ident_start(tok.front())) {
      words.insert(tok);
    } else if (!tok.empty()) {
      ops.push_back(tok);
    }
  }
  std::sort(ops.begin(), ops.end(),
            [](std::string_view a, std::string_view b) { return a.size() > b.size(); });

  const std::string code = strip_comments_and_strings(source, table);
  const std::string_view view(code);
  int count = 0;
  std::size_t i = 0;
  while (i < view.size()) {
    const char c = view[i];
    if (is_ident_start(c)) {
      std::size_t j = i + 1;
      while (j < view.size() && is_ident_char(view[j])) ++j;
      if (words.count(view.substr(i, j - i))) ++count;
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < view.size() && (is_ident_char(view[i]) || view[i] == '.')) ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else {
      std::size_t advance = 1;
      for (const auto op : ops) {
        if (view.substr(i, op.size()) == op) {
          ++count;
          advance = op.size();
          break;
        }
      }
      i += advance;
    }
  }
  return 1 + count;
}

int compute_complexity(const CodeSample& sample, const LanguageKeywordTable& table) {
  if (sample.language != table.language) throw UnknownLanguage(sample.language);
  return compute_complexity(sample.source, table);
}

int problem_complexity(const Problem& problem) {
  if (problem.samples.empty()) throw NoSamples(problem.problem_id);
  int best = 0;
  for (const auto& s : problem.samples) best = std::max(best, s.complexity);
  return best;
}

}  // namespace xclone::corpus
