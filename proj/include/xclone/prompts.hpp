#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xclone/benchmark.hpp"
#include "xclone/providers/types.hpp"

namespace xclone::prompts {

enum class PromptKind {
  kSimple,
  kImprovedSimple,
  kSimilarLine,
  kReasoning,
  kIntegrate,
  kSeparateCode,
  kSeparateExplanation,
  kCodeSimilarity,
};

inline constexpr PromptKind kAllPromptKinds[] = {
    PromptKind::kSimple,        PromptKind::kImprovedSimple,      PromptKind::kSimilarLine,
    PromptKind::kReasoning,     PromptKind::kIntegrate,           PromptKind::kSeparateCode,
    PromptKind::kSeparateExplanation, PromptKind::kCodeSimilarity,
};

inline constexpr std::string_view kTemplateVersion = "v1";

std::string_view to_string(PromptKind kind);
// Throws Error(kUsage) for unknown names.
PromptKind parse_prompt_kind(std::string_view name);

// Analysis flavour of the first separate_explanation step.
enum class ExplanationVariant { kSimilarity, kReasoning, kDifference, kIntegrated };
std::string_view to_string(ExplanationVariant v);
ExplanationVariant parse_explanation_variant(std::string_view name);

// Distinct template steps (1 or 2).
int template_steps(PromptKind kind);
// Chat calls one protocol run makes: 3 for separate_code (one explanation per
// snippet plus the decision), 2 for separate_explanation, otherwise 1.
int call_count(PromptKind kind);
// True for code_similarity, whose answer is a 0-10 score rather than yes/no.
bool yields_score(PromptKind kind);

struct Snippet {
  std::string language;
  std::string source;
};

// The raw template text for a kind/step, placeholders included.
const std::string& template_text(PromptKind kind, int step,
                                 ExplanationVariant variant = ExplanationVariant::kIntegrated);

// Builds the user message for `step` (0-based). Snippets are placed in
// fenced blocks tagged with their language; `prior` carries step-0 outputs
// for the second step. Throws WrongStep, MissingPrior.
std::vector<providers::ChatMessage> render(PromptKind kind, int step, std::span<const Snippet> snippets,
                                           std::span<const std::string> prior = {},
                                           ExplanationVariant variant = ExplanationVariant::kIntegrated);

std::string fence(const Snippet& snippet);

enum class Verdict { kClone, kNonClone, kUndecided };
std::string_view to_string(Verdict v);

// Standalone "yes"/"no" words, case-insensitive. One polarity decides; when
// both occur the last one wins; neither gives kUndecided.
Verdict parse_yes_no(std::string_view text);

// First number in [0, 10], preferring one that follows a "score" or
// "similarity" keyword. Out-of-range numbers are skipped.
std::optional<double> parse_score(std::string_view text);

struct Decision {
  Verdict verdict = Verdict::kUndecided;
  std::optional<double> score;
  std::vector<std::string> raw;
  int steps = 0;
  std::string note;
};

using ChatFn = std::function<std::string(const std::vector<providers::ChatMessage>&)>;

struct ProtocolOptions {
  ExplanationVariant variant = ExplanationVariant::kIntegrated;
  // Renders longer than this many bytes are not sent; 0 disables the check.
  std::size_t max_prompt_chars = 0;
  // Provisional verdict for score prompts; detectors re-threshold.
  double score_threshold = 5.0;
};

// Executes the protocol's chat calls in order and parses the last response.
// Provider errors propagate; an oversize render yields kUndecided with a note.
Decision run_protocol(PromptKind kind, const CandidatePair& pair, const ChatFn& chat,
                      const ProtocolOptions& options = {});

}  // namespace xclone::prompts
