#include <doctest.h>

#include <sstream>

#include "pairing_checks.hpp"
#include "support.hpp"
#include "xclone/errors.hpp"
#include "xclone/pairing.hpp"
#include "xclone/testkit/synthetic.hpp"

using namespace xclone;
using namespace xclone::pairing;

namespace {

corpus::CodeSample sample(const std::string& id, const std::string& lang, int complexity, std::string src = "") {
  if (src.empty()) src = id + "-" + lang + "-" + std::to_string(complexity);
  return {id, lang, src, corpus::SampleStatus::kAccepted, complexity};
}

// Problem with java and python samples of the given complexity.
corpus::Problem problem(const std::string& id, int complexity, std::vector<std::string> langs = {"java", "python"}) {
  corpus::Problem p{id, "about " + id, {}};
  for (const auto& l : langs) p.samples.push_back(sample(id, l, complexity));
  return p;
}

PairingConfig config(std::size_t pairs, std::size_t cap = 3) {
  PairingConfig c;
  c.partner_languages = {"python"};
  c.pairs_per_label = pairs;
  c.max_partner_uses = cap;
  return c;
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_NOTHROW(config(1).validate());
  auto c = config(1);
  c.partner_languages = {"java"};
  CHECK_THROWS_AS(c.validate(), Error);
  c = config(0);
  CHECK_THROWS_AS(c.validate(), Error);
  c = config(1);
  c.dbscan_eps = 2.5;
  CHECK_THROWS_AS(c.validate(), Error);
  c = config(1);
  c.partner_languages.clear();
  CHECK_THROWS_AS(c.validate(), Error);
  c = config(1, 0);
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("negative pairs on a hand-worked fixture") {
  // Three clusters on the unit circle. Complexities order the anchors
  // p1 (5), p3 (4), p5 (3); the remaining problems are less complex.
  corpus::Corpus corpus = {problem("p1", 5), problem("p2", 1), problem("p3", 4),
                           problem("p4", 2), problem("p5", 3), problem("p6", 1)};
  ProblemVectors v;
  v.ids = {"p1", "p2", "p3", "p4", "p5", "p6"};
  v.vectors = {{1, 0}, {0.99, 0.1}, {0, 1}, {0.1, 0.99}, {-1, 0}, {-0.99, -0.1}};
  const auto clustering = cluster_problems(v, 0.3, 2);
  REQUIRE(clustering.clusters.size() == 3);
  CHECK(clustering.noise.empty());

  const auto neg = build_negative_pairs(corpus, v, clustering, config(3));
  REQUIRE(neg.pairs.size() == 3);
  // p1 is furthest from p5 (distance 2); p3 from p6 (about 1.10); p5's
  // furthest, p1, is already paired with it, so p2 (about 1.995) is next.
  CHECK(neg.pairs[0].a.problem_id == "p1");
  CHECK(neg.pairs[0].b.problem_id == "p5");
  CHECK(neg.pairs[1].a.problem_id == "p3");
  CHECK(neg.pairs[1].b.problem_id == "p6");
  CHECK(neg.pairs[2].a.problem_id == "p5");
  CHECK(neg.pairs[2].b.problem_id == "p2");
  CHECK(neg.pairs[0].pair_id == "neg-000001");
  for (const auto& p : neg.pairs) {
    CHECK(p.label == Label::kNonClone);
    CHECK(p.provenance == Provenance::kClusterFurthest);
    CHECK(p.a.language == "java");
    CHECK(p.b.language == "python");
  }
  CHECK(neg.anchors == std::set<std::string>{"p1", "p3", "p5"});

  // Clones come from the rest, most complex first, ties by id.
  const auto pos = build_positive_pairs(corpus, neg.anchors, config(3));
  REQUIRE(pos.size() == 3);
  CHECK(pos[0].a.problem_id == "p4");
  CHECK(pos[1].a.problem_id == "p2");
  CHECK(pos[2].a.problem_id == "p6");
  CHECK(pos[0].pair_id == "pos-000001");

  CHECK_THROWS_AS(build_negative_pairs(corpus, v, clustering, config(7)), InsufficientProblems);
  CHECK_THROWS_AS(build_positive_pairs(corpus, neg.anchors, config(4)), InsufficientProblems);

  const auto all = build_benchmark(corpus, v, config(3));
  CHECK(all.pairs.size() == 6);
  auto c = config(3);
  CHECK(checks::benchmark_invariants(all.pairs, c).empty());
}

TEST_CASE("partner cap forces the next furthest problem") {
  // Clusters handed in directly: {p1}, {q1}, {c1, c2}. Both anchors are
  // furthest from c1; with a cap of one, q1 has to take c2.
  corpus::Corpus corpus = {problem("p1", 9), problem("q1", 8), problem("c1", 1), problem("c2", 1)};
  ProblemVectors v;
  v.ids = {"p1", "q1", "c1", "c2"};
  v.vectors = {{1, 0}, {1, 0.1}, {-1, 0}, {-1, 0.3}};
  Clustering cl;
  cl.clusters = {{0}, {1}, {2, 3}};

  const auto open = build_negative_pairs(corpus, v, cl, config(2, 3));
  CHECK(open.pairs[0].b.problem_id == "c1");
  CHECK(open.pairs[1].a.problem_id == "q1");
  CHECK(open.pairs[1].b.problem_id == "c1");

  const auto capped = build_negative_pairs(corpus, v, cl, config(2, 1));
  CHECK(capped.pairs[0].b.problem_id == "c1");
  CHECK(capped.pairs[1].a.problem_id == "q1");
  CHECK(capped.pairs[1].b.problem_id == "c2");

  // Noise points are never used as partners.
  Clustering with_noise;
  with_noise.clusters = {{0}, {1}, {3}};
  with_noise.noise = {2};
  const auto n = build_negative_pairs(corpus, v, with_noise, config(2, 3));
  for (const auto& p : n.pairs) CHECK(p.b.problem_id != "c1");
}

TEST_CASE("anchors without an anchor-language sample are skipped with a warning") {
  corpus::Corpus corpus = {problem("p1", 9, {"python", "cpp"}), problem("p2", 5), problem("p3", 1)};
  ProblemVectors v;
  v.ids = {"p1", "p2", "p3"};
  v.vectors = {{1, 0}, {0, 1}, {-1, 0}};
  Clustering cl;
  cl.clusters = {{0}, {1}, {2}};
  const auto neg = build_negative_pairs(corpus, v, cl, config(2));
  REQUIRE(neg.pairs.size() == 2);
  CHECK(neg.pairs[0].a.problem_id == "p2");
  REQUIRE_FALSE(neg.warnings.empty());
  CHECK(neg.warnings[0].find("p1") != std::string::npos);
  CHECK(neg.anchors.count("p1") == 0);
}

TEST_CASE("positive pairs") {
  SUBCASE("most complex sample of each side") {
    corpus::Problem p{"p1", "d", {}};
    p.samples = {sample("p1", "java", 2, "j-low"), sample("p1", "java", 5, "j-high"),
                 sample("p1", "java", 5, "j-high-later"), sample("p1", "python", 1, "py-low"),
                 sample("p1", "python", 3, "py-high")};
    const auto pos = build_positive_pairs({p}, {}, config(1));
    REQUIRE(pos.size() == 1);
    CHECK(pos[0].a.source == "j-high");
    CHECK(pos[0].b.source == "py-high");
    CHECK(pos[0].label == Label::kClone);
    CHECK(pos[0].provenance == Provenance::kSameProblem);
  }
  SUBCASE("two partner languages split evenly") {
    corpus::Corpus corpus;
    for (int i = 0; i < 10; ++i) corpus.push_back(problem("p" + std::to_string(i), i, {"java", "python", "cpp"}));
    auto c = config(10);
    c.partner_languages = {"python", "cpp"};
    const auto pos = build_positive_pairs(corpus, {}, c);
    std::map<std::string, int> by_lang;
    for (const auto& p : pos) ++by_lang[p.b.language];
    CHECK(by_lang["python"] == 5);
    CHECK(by_lang["cpp"] == 5);
    CHECK(pos.front().a.problem_id == "p9");
  }
  SUBCASE("problems lacking a partner language are left out") {
    corpus::Corpus corpus = {problem("solo", 9, {"java"}), problem("a", 2), problem("b", 1), problem("used", 7)};
    std::vector<std::string> warnings;
    const auto pos = build_positive_pairs(corpus, {"used"}, config(2), &warnings);
    REQUIRE(pos.size() == 2);
    CHECK(pos[0].a.problem_id == "a");
    CHECK(pos[1].a.problem_id == "b");
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("solo") != std::string::npos);
  }
}

TEST_CASE("benchmark validation and io") {
  CandidatePair clone{"c1", Label::kClone, {"p1", "java", "x"}, {"p1", "python", "y"}, Provenance::kSameProblem};
  CandidatePair non{"n1", Label::kNonClone, {"p1", "java", "x"}, {"p2", "cpp", "z"}, Provenance::kClusterFurthest};
  CHECK_NOTHROW(validate_pairs({clone, non}));

  auto bad = clone;
  bad.b.language = "java";
  CHECK_THROWS_AS(validate_pairs({bad}), Error);
  bad = clone;
  bad.b.problem_id = "p9";
  CHECK_THROWS_AS(validate_pairs({bad}), Error);
  bad = non;
  bad.b.problem_id = "p1";
  CHECK_THROWS_AS(validate_pairs({bad}), Error);
  bad = non;
  bad.pair_id = "c1";
  try {
    validate_pairs({clone, bad});
    FAIL("expected duplicate id error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kValidation);
    CHECK(std::string(e.what()).find("c1") != std::string::npos);
  }

  std::ostringstream lone;
  CHECK_THROWS_AS(write_benchmark({clone}, lone, 1), ImbalancedBenchmark);

  Benchmark b;
  for (int i = 0; i < 20; ++i) {
    auto c = clone;
    c.pair_id = "c" + std::to_string(i);
    auto n = non;
    n.pair_id = "n" + std::to_string(i);
    b.push_back(c);
    b.push_back(n);
  }
  std::ostringstream first, second, other;
  write_benchmark(b, first, 5);
  write_benchmark(b, second, 5);
  write_benchmark(b, other, 6);
  CHECK(first.str() == second.str());
  CHECK(first.str() != other.str());

  std::istringstream in(first.str());
  auto back = read_benchmark(in);
  CHECK(back.size() == b.size());
  std::sort(back.begin(), back.end(), [](auto& x, auto& y) { return x.pair_id < y.pair_id; });
  auto sorted = b;
  std::sort(sorted.begin(), sorted.end(), [](auto& x, auto& y) { return x.pair_id < y.pair_id; });
  CHECK(back == sorted);

  std::istringstream junk("{\"pair_id\": 3}\n");
  CHECK_THROWS_AS(read_benchmark(junk), Error);
}

TEST_CASE("synthetic corpora satisfy the invariants") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    testkit::SyntheticSpec spec;
    spec.n_problems = 40;
    spec.seed = seed;
    const auto syn = testkit::generate_corpus(spec);
    const testkit::MockEmbedder emb(syn.registry);
    ProblemVectors v;
    for (const auto& p : syn.corpus) {
      v.ids.push_back(p.problem_id);
      v.vectors.push_back(emb.embed(p.description));
    }
    auto c = config(20);
    c.partner_languages = {"cpp", "python"};
    c.seed = seed;
    const auto r = build_benchmark(syn.corpus, v, c);
    CHECK_MESSAGE(checks::benchmark_invariants(r.pairs, c).empty(), checks::benchmark_invariants(r.pairs, c));
    const auto again = build_benchmark(syn.corpus, v, c);
    CHECK(again.pairs == r.pairs);
  }
}
