#include <map>

#include "xclone/errors.hpp"
#include "xclone/prompts.hpp"

namespace xclone::prompts {

namespace detail {
const std::map<std::string, std::string>& embedded_templates();
}

namespace {

struct KindName {
  PromptKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {PromptKind::kSimple, "simple"},
    {PromptKind::kImprovedSimple, "improved_simple"},
    {PromptKind::kSimilarLine, "similar_line"},
    {PromptKind::kReasoning, "reasoning"},
    {PromptKind::kIntegrate, "integrate"},
    {PromptKind::kSeparateCode, "separate_code"},
    {PromptKind::kSeparateExplanation, "separate_explanation"},
    {PromptKind::kCodeSimilarity, "code_similarity"},
};

std::string asset_name(PromptKind kind, int step, ExplanationVariant variant) {
  std::string name(to_string(kind));
  if (template_steps(kind) == 1) return name;
  name += step == 0 ? "_step1" : "_step2";
  if (kind == PromptKind::kSeparateExplanation && step == 0) {
    name += "_";
    name += to_string(variant);
  }
  return name;
}

// Single left-to-right pass, so substituted text is never rescanned.
std::string interpolate(const std::string& tpl, const std::map<std::string_view, std::string>& values) {
  std::string out;
  out.reserve(tpl.size() + 256);
  std::size_t pos = 0;
  while (pos < tpl.size()) {
    const std::size_t open = tpl.find("{{", pos);
    if (open == std::string::npos) break;
    const std::size_t close = tpl.find("}}", open + 2);
    if (close == std::string::npos) break;
    const std::string_view key(tpl.data() + open + 2, close - open - 2);
    auto it = values.find(key);
    if (it == values.end()) {
      out.append(tpl, pos, close + 2 - pos);
    } else {
      out.append(tpl, pos, open - pos);
      out += it->second;
    }
    pos = close + 2;
  }
  out.append(tpl, pos, std::string::npos);
  return out;
}

}  // namespace

std::string_view to_string(PromptKind kind) {
  for (const auto& kn : kKindNames) {
    if (kn.kind == kind) return kn.name;
  }
  return "simple";
}

PromptKind parse_prompt_kind(std::string_view name) {
  for (const auto& kn : kKindNames) {
    if (kn.name == name) return kn.kind;
  }
  throw Error(ErrorKind::kUsage, "unknown prompt kind '" + std::string(name) + "'");
}

std::string_view to_string(ExplanationVariant v) {
  switch (v) {
    case ExplanationVariant::kSimilarity:
      return "similarity";
    case ExplanationVariant::kReasoning:
      return "reasoning";
    case ExplanationVariant::kDifference:
      return "difference";
    case ExplanationVariant::kIntegrated:
      return "integrated";
  }
  return "integrated";
}

ExplanationVariant parse_explanation_variant(std::string_view name) {
  for (auto v : {ExplanationVariant::kSimilarity, ExplanationVariant::kReasoning, ExplanationVariant::kDifference,
                 ExplanationVariant::kIntegrated}) {
    if (to_string(v) == name) return v;
  }
  throw Error(ErrorKind::kUsage, "unknown explanation variant '" + std::string(name) + "'");
}

int template_steps(PromptKind kind) {
  return kind == PromptKind::kSeparateCode || kind == PromptKind::kSeparateExplanation ? 2 : 1;
}

int call_count(PromptKind kind) {
  switch (kind) {
    case PromptKind::kSeparateCode:
      return 3;
    case PromptKind::kSeparateExplanation:
      return 2;
    default:
      return 1;
  }
}

bool yields_score(PromptKind kind) { return kind == PromptKind::kCodeSimilarity; }

const std::string& template_text(PromptKind kind, int step, ExplanationVariant variant) {
  if (step < 0 || step >= template_steps(kind)) {
    throw WrongStep("prompt '" + std::string(to_string(kind)) + "' has no step " + std::to_string(step));
  }
  const auto& all = detail::embedded_templates();
  auto it = all.find(asset_name(kind, step, variant));
  if (it == all.end()) throw Error(ErrorKind::kUsage, "missing prompt asset " + asset_name(kind, step, variant));
  return it->second;
}

std::string fence(const Snippet& snippet) {
  std::string out = "```" + snippet.language + "\n" + snippet.source;
  if (snippet.source.empty() || snippet.source.back() != '\n') out += '\n';
  out += "```";
  return out;
}

std::vector<providers::ChatMessage> render(PromptKind kind, int step, std::span<const Snippet> snippets,
                                           std::span<const std::string> prior, ExplanationVariant variant) {
  const std::string& tpl = template_text(kind, step, variant);
  std::map<std::string_view, std::string> values;
  auto need_snippets = [&](std::size_t n) {
    if (snippets.size() != n) {
      throw WrongStep("prompt '" + std::string(to_string(kind)) + "' step " + std::to_string(step) + " takes " +
                      std::to_string(n) + " snippet(s), got " + std::to_string(snippets.size()));
    }
  };
  auto need_prior = [&](std::size_t n) {
    if (prior.empty()) throw MissingPrior();
    if (prior.size() != n) {
      throw WrongStep("prompt '" + std::string(to_string(kind)) + "' step 2 takes " + std::to_string(n) +
                      " step-1 output(s), got " + std::to_string(prior.size()));
    }
  };

  if (kind == PromptKind::kSeparateCode && step == 0) {
    need_snippets(1);
    values["snippet_1"] = fence(snippets[0]);
  } else if (kind == PromptKind::kSeparateCode) {
    need_prior(2);
    if (!snippets.empty()) need_snippets(2);
    values["step1_first"] = prior[0];
    values["step1_second"] = prior[1];
  } else {
    need_snippets(2);
    values["snippet_1"] = fence(snippets[0]);
    values["snippet_2"] = fence(snippets[1]);
    if (kind == PromptKind::kSeparateExplanation && step == 1) {
      need_prior(1);
      values["step1_analysis"] = prior[0];
    }
  }
  return {{providers::Role::kUser, interpolate(tpl, values)}};
}

}  // namespace xclone::prompts
