#include <doctest.h>

#include <random>

#include <nlohmann/json.hpp>

#include "support.hpp"
#include "xclone/errors.hpp"
#include "xclone/prompts.hpp"

using namespace xclone;
using namespace xclone::prompts;

namespace {

const Snippet kA{"java", "int add(int a, int b) {\n    return a + b;\n}\n"};
const Snippet kB{"python", "def add(a, b):\n    return a + b"};
const std::string kFirst = "a method that returns the sum of two integers";
const std::string kSecond = "a function that returns the sum of two values";
const std::string kAnalysis = "Both snippets add their two arguments and return the result.";

std::string only(const std::vector<providers::ChatMessage>& msgs) {
  REQUIRE(msgs.size() == 1);
  CHECK(msgs[0].role == providers::Role::kUser);
  return msgs[0].content;
}

CandidatePair fixture_pair() {
  CandidatePair p;
  p.pair_id = "pos-000001";
  p.label = Label::kClone;
  p.a = {"p1", kA.language, kA.source};
  p.b = {"p1", kB.language, kB.source};
  return p;
}

// Scripted chat: returns replies in order and records every prompt.
struct Script {
  std::vector<std::string> replies;
  std::vector<std::string> seen;
  ChatFn fn() {
    return [this](const std::vector<providers::ChatMessage>& m) {
      seen.push_back(m.back().content);
      return replies.at(seen.size() - 1);
    };
  }
};

}  // namespace

TEST_CASE("renders match the golden files byte for byte") {
  const Snippet pair[2] = {kA, kB};
  struct Case {
    PromptKind kind;
    const char* golden;
  };
  for (auto [kind, golden] : {Case{PromptKind::kSimple, "simple"}, Case{PromptKind::kImprovedSimple, "improved_simple"},
                              Case{PromptKind::kSimilarLine, "similar_line"}, Case{PromptKind::kReasoning, "reasoning"},
                              Case{PromptKind::kIntegrate, "integrate"},
                              Case{PromptKind::kCodeSimilarity, "code_similarity"}}) {
    CHECK_MESSAGE(only(render(kind, 0, pair)) == slurp(golden_path(std::string("prompts/") + golden + ".txt")),
                  golden);
  }
  CHECK(only(render(PromptKind::kSeparateCode, 0, std::span(&kA, 1))) ==
        slurp(golden_path("prompts/separate_code.step1.a.txt")));
  CHECK(only(render(PromptKind::kSeparateCode, 0, std::span(&kB, 1))) ==
        slurp(golden_path("prompts/separate_code.step1.b.txt")));
  const std::string both[2] = {kFirst, kSecond};
  CHECK(only(render(PromptKind::kSeparateCode, 1, {}, both)) == slurp(golden_path("prompts/separate_code.step2.txt")));

  struct Variant {
    ExplanationVariant v;
    const char* name;
  };
  for (auto [v, name] : {Variant{ExplanationVariant::kIntegrated, "integrated"},
                         Variant{ExplanationVariant::kSimilarity, "similarity"},
                         Variant{ExplanationVariant::kReasoning, "reasoning"},
                         Variant{ExplanationVariant::kDifference, "difference"}}) {
    CHECK_MESSAGE(only(render(PromptKind::kSeparateExplanation, 0, pair, {}, v)) ==
                      slurp(golden_path(std::string("prompts/separate_explanation.step1.") + name + ".txt")),
                  name);
  }
  const std::string analysis[1] = {kAnalysis};
  CHECK(only(render(PromptKind::kSeparateExplanation, 1, pair, analysis)) ==
        slurp(golden_path("prompts/separate_explanation.step2.txt")));
  // The default variant is the integrated one.
  CHECK(only(render(PromptKind::kSeparateExplanation, 0, pair)) ==
        slurp(golden_path("prompts/separate_explanation.step1.integrated.txt")));
}

TEST_CASE("renders carry the table phrases") {
  const Snippet pair[2] = {kA, kB};
  CHECK(only(render(PromptKind::kSimple, 0, pair))
            .find("Analyze the following two code snippets and determine whether they are clones") !=
        std::string::npos);
  CHECK(only(render(PromptKind::kSeparateCode, 0, std::span(&kA, 1))).find("explain the function of the snippet") !=
        std::string::npos);
  CHECK(only(render(PromptKind::kImprovedSimple, 0, pair)).find("perform a similar task") != std::string::npos);
}

TEST_CASE("substituted text is not rescanned") {
  const Snippet tricky[2] = {{"java", "String s = \"{{snippet_2}}\";"}, kB};
  const auto text = only(render(PromptKind::kSimple, 0, tricky));
  CHECK(text.find("\"{{snippet_2}}\"") != std::string::npos);
}

TEST_CASE("render argument checks") {
  const Snippet pair[2] = {kA, kB};
  CHECK_THROWS_AS(render(PromptKind::kSimple, 0, std::span(&kA, 1)), WrongStep);
  CHECK_THROWS_AS(render(PromptKind::kSeparateCode, 0, pair), WrongStep);
  CHECK_THROWS_AS(render(PromptKind::kSeparateCode, 1, {}), MissingPrior);
  CHECK_THROWS_AS(render(PromptKind::kSeparateExplanation, 1, pair), MissingPrior);
  const std::string one[1] = {"x"};
  CHECK_THROWS_AS(render(PromptKind::kSeparateCode, 1, {}, one), WrongStep);
  CHECK_THROWS(render(PromptKind::kSimple, 1, pair));
}

TEST_CASE("prompt kind metadata") {
  for (auto k : kAllPromptKinds) CHECK(parse_prompt_kind(to_string(k)) == k);
  CHECK_THROWS_AS(parse_prompt_kind("fancy"), Error);
  CHECK(template_steps(PromptKind::kSeparateCode) == 2);
  CHECK(template_steps(PromptKind::kSeparateExplanation) == 2);
  CHECK(template_steps(PromptKind::kSimple) == 1);
  CHECK(call_count(PromptKind::kSeparateCode) == 3);
  CHECK(call_count(PromptKind::kSeparateExplanation) == 2);
  CHECK(call_count(PromptKind::kIntegrate) == 1);
  CHECK(yields_score(PromptKind::kCodeSimilarity));
  CHECK_FALSE(yields_score(PromptKind::kIntegrate));
  CHECK(parse_explanation_variant("difference") == ExplanationVariant::kDifference);
  CHECK_THROWS_AS(parse_explanation_variant("vibes"), Error);
  CHECK(std::string(kTemplateVersion) == "v1");
}

TEST_CASE("parser goldens") {
  const auto j = nlohmann::json::parse(slurp(golden_path("parsers.json")));
  std::size_t cases = 0;
  for (const auto& c : j.at("yes_no")) {
    const auto text = c.at("text").get<std::string>();
    CHECK_MESSAGE(to_string(parse_yes_no(text)) == c.at("verdict").get<std::string>(), text);
    ++cases;
  }
  for (const auto& c : j.at("score")) {
    const auto text = c.at("text").get<std::string>();
    const auto got = parse_score(text);
    if (c.at("score").is_null()) {
      CHECK_MESSAGE(!got.has_value(), text);
    } else {
      REQUIRE_MESSAGE(got.has_value(), text);
      CHECK_MESSAGE(*got == c.at("score").get<double>(), text);
    }
    ++cases;
  }
  CHECK(cases >= 20);
}

TEST_CASE("parsers are total on arbitrary bytes") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_int_distribution<int> len(0, 64);
  for (int t = 0; t < 2000; ++t) {
    std::string s(len(rng), '\0');
    for (auto& c : s) c = static_cast<char>(byte(rng));
    CHECK_NOTHROW(parse_yes_no(s));
    const auto sc = parse_score(s);
    if (sc) {
      CHECK(*sc >= 0.0);
      CHECK(*sc <= 10.0);
    }
  }
}

TEST_CASE("protocol call counts and parsing") {
  const auto pair = fixture_pair();
  SUBCASE("simple") {
    Script s{{"Yes."}};
    const auto d = run_protocol(PromptKind::kSimple, pair, s.fn());
    CHECK(d.verdict == Verdict::kClone);
    CHECK(d.steps == 1);
    CHECK(d.raw == std::vector<std::string>{"Yes."});
    CHECK_FALSE(d.score.has_value());
  }
  SUBCASE("separate_code") {
    Script s{{"adds ints", "adds values", "no"}};
    const auto d = run_protocol(PromptKind::kSeparateCode, pair, s.fn());
    CHECK(d.verdict == Verdict::kNonClone);
    CHECK(d.steps == 3);
    CHECK(d.raw.size() == 3);
    REQUIRE(s.seen.size() == 3);
    CHECK(s.seen[0].find("```java") != std::string::npos);
    CHECK(s.seen[1].find("```python") != std::string::npos);
    CHECK(s.seen[2].find("is adds ints and the function of the second is adds values.") != std::string::npos);
  }
  SUBCASE("separate_explanation") {
    Script s{{"They both add.", "yes"}};
    ProtocolOptions o;
    o.variant = ExplanationVariant::kDifference;
    const auto d = run_protocol(PromptKind::kSeparateExplanation, pair, s.fn(), o);
    CHECK(d.verdict == Verdict::kClone);
    CHECK(d.steps == 2);
    CHECK(s.seen[0].find("describe the differences") != std::string::npos);
    CHECK(s.seen[1].find("code is: They both add. Please respond") != std::string::npos);
  }
  SUBCASE("code_similarity") {
    Script s{{"I rate it 7/10"}};
    const auto d = run_protocol(PromptKind::kCodeSimilarity, pair, s.fn());
    REQUIRE(d.score.has_value());
    CHECK(*d.score == 7.0);
    CHECK(d.steps == 1);
    CHECK(d.verdict == Verdict::kClone);
    Script low{{"Similarity score: 3"}};
    CHECK(run_protocol(PromptKind::kCodeSimilarity, pair, low.fn()).verdict == Verdict::kNonClone);
    Script none{{"cannot say"}};
    CHECK(run_protocol(PromptKind::kCodeSimilarity, pair, none.fn()).verdict == Verdict::kUndecided);
  }
  SUBCASE("every kind makes its declared number of calls") {
    for (auto k : kAllPromptKinds) {
      Script s{{"x", "y", "yes"}};
      const auto d = run_protocol(k, pair, s.fn());
      CHECK(d.steps == call_count(k));
      CHECK(static_cast<int>(s.seen.size()) == call_count(k));
    }
  }
  SUBCASE("oversize renders are not sent") {
    Script s{{"yes"}};
    ProtocolOptions o;
    o.max_prompt_chars = 50;
    const auto d = run_protocol(PromptKind::kSimple, pair, s.fn(), o);
    CHECK(d.verdict == Verdict::kUndecided);
    CHECK(s.seen.empty());
    CHECK_FALSE(d.note.empty());
  }
  SUBCASE("provider errors propagate") {
    ChatFn failing = [](const std::vector<providers::ChatMessage>&) -> std::string {
      throw ProviderError(500, "boom");
    };
    CHECK_THROWS_AS(run_protocol(PromptKind::kSimple, pair, failing), ProviderError);
  }
  SUBCASE("same replies, same decision") {
    Script a{{"p", "q", "Yes... no"}}, b{{"p", "q", "Yes... no"}};
    const auto da = run_protocol(PromptKind::kSeparateCode, pair, a.fn());
    const auto db = run_protocol(PromptKind::kSeparateCode, pair, b.fn());
    CHECK(da.verdict == db.verdict);
    CHECK(da.raw == db.raw);
    CHECK(a.seen == b.seen);
  }
}
