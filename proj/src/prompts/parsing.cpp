#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <string>

#include "xclone/prompts.hpp"

namespace xclone::prompts {
namespace {

bool ascii_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool ascii_digit(char c) { return c >= '0' && c <= '9'; }
char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), lower);
  return out;
}

struct NumberToken {
  std::size_t begin = 0;
  std::size_t end = 0;
  double value = 0.0;
  bool negative = false;
};

std::vector<NumberToken> scan_numbers(std::string_view text) {
  std::vector<NumberToken> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!ascii_digit(text[i])) {
      ++i;
      continue;
    }
    const std::size_t begin = i;
    while (i < text.size() && ascii_digit(text[i])) ++i;
    if (i + 1 < text.size() && text[i] == '.' && ascii_digit(text[i + 1])) {
      ++i;
      while (i < text.size() && ascii_digit(text[i])) ++i;
    }
    // Digits glued to a word ("gpt4", "x2") are not standalone numbers.
    const bool in_word = begin > 0 && (ascii_alpha(text[begin - 1]) || text[begin - 1] == '_' ||
                                       text[begin - 1] == '.');
    if (in_word) continue;
    NumberToken tok{begin, i, 0.0, false};
    std::from_chars(text.data() + begin, text.data() + i, tok.value);
    if (begin > 0 && text[begin - 1] == '-') {
      // A dash directly after a digit is a range ("0-10"), otherwise a sign.
      tok.negative = !(begin > 1 && std::isalnum(static_cast<unsigned char>(text[begin - 2])));
    }
    out.push_back(tok);
  }
  return out;
}

bool in_range(const NumberToken& t) { return !t.negative && t.value >= 0.0 && t.value <= 10.0; }

// Filler allowed between a score keyword and its number: "score is 7",
// "similarity of about 8", "Score: 9".
bool adjacency_gap(std::string_view gap) {
  static constexpr std::array<std::string_view, 12> kFiller = {
      "is", "of", "be", "would", "was", "at", "around", "about", "approximately", "roughly", "a", "an"};
  constexpr std::size_t kMaxGap = 24;
  if (gap.size() > kMaxGap) return false;
  std::size_t i = 0;
  while (i < gap.size()) {
    if (!ascii_alpha(gap[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < gap.size() && ascii_alpha(gap[j])) ++j;
    const std::string word = lowercase(gap.substr(i, j - i));
    if (std::find(kFiller.begin(), kFiller.end(), word) == kFiller.end()) return false;
    i = j;
  }
  return true;
}

}  // namespace

Verdict parse_yes_no(std::string_view text) {
  Verdict last = Verdict::kUndecided;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!ascii_alpha(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && ascii_alpha(text[j])) ++j;
    // Letters followed by a digit ("no2") are not a standalone word.
    const bool glued = (j < text.size() && ascii_digit(text[j])) || (i > 0 && ascii_digit(text[i - 1]));
    if (!glued) {
      const std::string word = lowercase(text.substr(i, j - i));
      if (word == "yes") {
        last = Verdict::kClone;
      } else if (word == "no") {
        last = Verdict::kNonClone;
      }
    }
    i = j;
  }
  return last;
}

std::optional<double> parse_score(std::string_view text) {
  const auto numbers = scan_numbers(text);
  const std::string low = lowercase(text);

  std::vector<std::size_t> keyword_ends;
  for (std::string_view kw : {std::string_view("score"), std::string_view("similarity")}) {
    for (std::size_t pos = low.find(kw); pos != std::string::npos; pos = low.find(kw, pos + 1)) {
      keyword_ends.push_back(pos + kw.size());
    }
  }

  for (const auto& n : numbers) {
    if (!in_range(n)) continue;
    const std::size_t start = n.negative ? n.begin - 1 : n.begin;
    for (std::size_t kw_end : keyword_ends) {
      if (kw_end <= start && adjacency_gap(std::string_view(text).substr(kw_end, start - kw_end))) return n.value;
    }
  }
  for (const auto& n : numbers) {
    if (in_range(n)) return n.value;
  }
  return std::nullopt;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kClone:
      return "clone";
    case Verdict::kNonClone:
      return "non_clone";
    case Verdict::kUndecided:
      return "undecided";
  }
  return "undecided";
}

}  // namespace xclone::prompts
