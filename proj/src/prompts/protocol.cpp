#include "xclone/prompts.hpp"

namespace xclone::prompts {
namespace {

std::size_t rendered_size(const std::vector<providers::ChatMessage>& msgs) {
  std::size_t n = 0;
  for (const auto& m : msgs) n += m.content.size();
  return n;
}

class Runner {
 public:
  Runner(const ChatFn& chat, const ProtocolOptions& options, Decision& decision)
      : chat_(chat), options_(options), decision_(decision) {}

  // Returns nullopt (and marks the decision) when the render is oversize.
  std::optional<std::string> call(const std::vector<providers::ChatMessage>& msgs) {
    if (options_.max_prompt_chars > 0 && rendered_size(msgs) > options_.max_prompt_chars) {
      decision_.verdict = Verdict::kUndecided;
      decision_.note = "prompt of " + std::to_string(rendered_size(msgs)) + " bytes exceeds limit of " +
                       std::to_string(options_.max_prompt_chars);
      return std::nullopt;
    }
    std::string reply = chat_(msgs);
    decision_.raw.push_back(reply);
    ++decision_.steps;
    return reply;
  }

 private:
  const ChatFn& chat_;
  const ProtocolOptions& options_;
  Decision& decision_;
};

}  // namespace

Decision run_protocol(PromptKind kind, const CandidatePair& pair, const ChatFn& chat,
                      const ProtocolOptions& options) {
  Decision decision;
  Runner runner(chat, options, decision);
  const Snippet snippets[2] = {{pair.a.language, pair.a.source}, {pair.b.language, pair.b.source}};
  const auto variant = options.variant;

  std::optional<std::string> final_reply;
  switch (kind) {
    case PromptKind::kSeparateCode: {
      std::vector<std::string> explanations;
      for (const auto& s : snippets) {
        auto reply = runner.call(render(kind, 0, std::span(&s, 1), {}, variant));
        if (!reply) return decision;
        explanations.push_back(std::move(*reply));
      }
      final_reply = runner.call(render(kind, 1, {}, explanations, variant));
      break;
    }
    case PromptKind::kSeparateExplanation: {
      auto analysis = runner.call(render(kind, 0, snippets, {}, variant));
      if (!analysis) return decision;
      const std::string prior[1] = {std::move(*analysis)};
      final_reply = runner.call(render(kind, 1, snippets, prior, variant));
      break;
    }
    default:
      final_reply = runner.call(render(kind, 0, snippets, {}, variant));
      break;
  }
  if (!final_reply) return decision;

  if (yields_score(kind)) {
    decision.score = parse_score(*final_reply);
    if (decision.score) {
      decision.verdict = *decision.score >= options.score_threshold ? Verdict::kClone : Verdict::kNonClone;
    }
  } else {
    decision.verdict = parse_yes_no(*final_reply);
  }
  return decision;
}

}  // namespace xclone::prompts
