#include "xclone/pairing.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <unordered_map>

#include "xclone/errors.hpp"
#include "xclone/ml/dbscan.hpp"
#include "xclone/providers/clients.hpp"

namespace xclone::pairing {

void PairingConfig::validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorKind::kUsage, "pairing config: " + why); };
  if (anchor_language.empty()) fail("anchor_language is empty");
  if (partner_languages.empty()) fail("partner_languages is empty");
  std::set<std::string> seen;
  for (const auto& l : partner_languages) {
    if (l == anchor_language) fail("partner_languages contains the anchor language");
    if (!seen.insert(l).second) fail("partner language '" + l + "' listed twice");
  }
  if (pairs_per_label == 0) fail("pairs_per_label must be positive");
  if (!(dbscan_eps > 0.0 && dbscan_eps < 2.0)) fail("dbscan_eps must lie in (0, 2)");
  if (dbscan_min_pts < 2) fail("dbscan_min_pts must be at least 2");
  if (max_partner_uses < 1) fail("max_partner_uses must be at least 1");
}

ProblemVectors embed_descriptions(const corpus::Corpus& corpus, providers::EmbeddingClient& client) {
  ProblemVectors out;
  std::vector<std::string> texts;
  for (const auto& p : corpus) {
    out.ids.push_back(p.problem_id);
    texts.push_back(p.description);
  }
  std::vector<providers::EmbeddingVector> vecs;
  try {
    vecs = client.embed_texts(texts);
  } catch (const AuthError&) {
    throw;
  } catch (const ProviderError& e) {
    std::string ids;
    for (std::size_t i = 0; i < out.ids.size() && i < 5; ++i) ids += (i ? ", " : "") + out.ids[i];
    if (out.ids.size() > 5) ids += ", ...";
    throw ProviderError(e.status(), std::string(e.what()) + " [embedding descriptions of problems " + ids + "]");
  }
  for (auto& v : vecs) out.vectors.push_back(std::move(v.values));
  return out;
}

Clustering cluster_problems(const ProblemVectors& vectors, double eps, std::size_t min_pts) {
  const auto result = ml::dbscan(vectors.vectors, eps, min_pts, ml::DistanceMetric::kCosine);
  Clustering c;
  c.clusters.resize(static_cast<std::size_t>(result.cluster_count));
  for (std::size_t i = 0; i < result.labels.size(); ++i) {
    if (result.labels[i] == ml::kNoise) {
      c.noise.push_back(i);
    } else {
      c.clusters[static_cast<std::size_t>(result.labels[i])].push_back(i);
    }
  }
  return c;
}

namespace {

struct ProblemInfo {
  const corpus::Problem* problem = nullptr;
  int complexity = 0;
};

// Most complex sample in `language`; ties keep the earlier sample.
const corpus::CodeSample* most_complex(const corpus::Problem& p, const std::string& language) {
  const corpus::CodeSample* best = nullptr;
  for (const auto& s : p.samples) {
    if (s.language == language && (best == nullptr || s.complexity > best->complexity)) best = &s;
  }
  return best;
}

PairSide side_of(const corpus::CodeSample& s) { return {s.problem_id, s.language, s.source}; }

std::string pair_id(const char* prefix, std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s-%06zu", prefix, n);
  return buf;
}

class LanguageBalancer {
 public:
  explicit LanguageBalancer(const std::vector<std::string>& langs) : langs_(langs), counts_(langs.size(), 0) {}

  // Languages that may receive the next pair without breaking the +-1 rule.
  std::vector<std::size_t> candidates() const {
    const std::size_t lo = *std::min_element(counts_.begin(), counts_.end());
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < langs_.size(); ++i) {
      if (counts_[i] == lo) out.push_back(i);
    }
    return out;
  }
  const std::string& language(std::size_t i) const { return langs_[i]; }
  void record(std::size_t i) { ++counts_[i]; }

 private:
  const std::vector<std::string>& langs_;
  std::vector<std::size_t> counts_;
};

std::unordered_map<std::string, ProblemInfo> index_corpus(const corpus::Corpus& corpus) {
  std::unordered_map<std::string, ProblemInfo> info;
  for (const auto& p : corpus) info[p.problem_id] = {&p, corpus::problem_complexity(p)};
  return info;
}

}  // namespace

NegativeSelection build_negative_pairs(const corpus::Corpus& corpus, const ProblemVectors& vectors,
                                       const Clustering& clustering, const PairingConfig& config) {
  config.validate();
  const auto info = index_corpus(corpus);
  const std::size_t n = vectors.size();
  for (const auto& id : vectors.ids) {
    if (!info.count(id)) throw Error(ErrorKind::kData, "description vector for unknown problem '" + id + "'");
  }

  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) {
    norms[i] = ml::norm(vectors.vectors[i]);
    if (norms[i] == 0.0) throw ZeroVector();
  }
  auto distance = [&](std::size_t i, std::size_t j) {
    const double sim = std::clamp(ml::dot(vectors.vectors[i], vectors.vectors[j]) / (norms[i] * norms[j]), -1.0, 1.0);
    return 1.0 - sim;
  };
  auto by_complexity = [&](std::size_t x, std::size_t y) {
    const int cx = info.at(vectors.ids[x]).complexity;
    const int cy = info.at(vectors.ids[y]).complexity;
    return cx != cy ? cx > cy : vectors.ids[x] < vectors.ids[y];
  };

  // Members most complex first; clusters by their representative.
  std::vector<std::vector<std::size_t>> clusters = clustering.clusters;
  for (auto& c : clusters) std::sort(c.begin(), c.end(), by_complexity);
  clusters.erase(std::remove_if(clusters.begin(), clusters.end(), [](const auto& c) { return c.empty(); }),
                 clusters.end());
  std::sort(clusters.begin(), clusters.end(),
            [&](const auto& a, const auto& b) { return by_complexity(a.front(), b.front()); });

  std::vector<bool> clustered(n, false);
  for (const auto& c : clusters) {
    for (std::size_t i : c) clustered[i] = true;
  }

  NegativeSelection out;
  LanguageBalancer balance(config.partner_languages);
  std::vector<std::size_t> partner_uses(n, 0);
  std::set<std::pair<std::size_t, std::size_t>> used_pairs;
  std::size_t max_size = 0;
  for (const auto& c : clusters) max_size = std::max(max_size, c.size());

  for (std::size_t round = 0; round < max_size && out.pairs.size() < config.pairs_per_label; ++round) {
    for (const auto& cluster : clusters) {
      if (out.pairs.size() >= config.pairs_per_label) break;
      if (round >= cluster.size()) continue;
      const std::size_t a_idx = cluster[round];
      const auto& a_problem = *info.at(vectors.ids[a_idx]).problem;
      const auto* a_sample = most_complex(a_problem, config.anchor_language);
      if (a_sample == nullptr) {
        out.warnings.push_back("problem " + a_problem.problem_id + " has no " + config.anchor_language +
                               " sample; skipped as negative anchor");
        continue;
      }

      bool placed = false;
      for (std::size_t lang_slot : balance.candidates()) {
        const std::string& lang = balance.language(lang_slot);
        std::size_t best = n;
        double best_dist = -1.0;
        const corpus::CodeSample* best_sample = nullptr;
        for (std::size_t j = 0; j < n; ++j) {
          if (j == a_idx || !clustered[j] || partner_uses[j] >= config.max_partner_uses) continue;
          if (used_pairs.count({std::min(a_idx, j), std::max(a_idx, j)})) continue;
          const auto* s = most_complex(*info.at(vectors.ids[j]).problem, lang);
          if (s == nullptr) continue;
          const double d = distance(a_idx, j);
          if (d > best_dist || (d == best_dist && vectors.ids[j] < vectors.ids[best])) {
            best = j;
            best_dist = d;
            best_sample = s;
          }
        }
        if (best == n) continue;
        CandidatePair p;
        p.pair_id = pair_id("neg", out.pairs.size() + 1);
        p.label = Label::kNonClone;
        p.a = side_of(*a_sample);
        p.b = side_of(*best_sample);
        p.provenance = Provenance::kClusterFurthest;
        out.pairs.push_back(std::move(p));
        out.anchors.insert(a_problem.problem_id);
        ++partner_uses[best];
        used_pairs.insert({std::min(a_idx, best), std::max(a_idx, best)});
        balance.record(lang_slot);
        placed = true;
        break;
      }
      if (!placed) {
        out.warnings.push_back("problem " + a_problem.problem_id + " found no eligible negative partner");
      }
    }
  }

  if (out.pairs.size() < config.pairs_per_label) {
    throw InsufficientProblems("only " + std::to_string(out.pairs.size()) + " of " +
                               std::to_string(config.pairs_per_label) +
                               " negative pairs could be formed under the partner caps (" +
                               std::to_string(clusters.size()) + " clusters)");
  }
  return out;
}

Benchmark build_positive_pairs(const corpus::Corpus& corpus, const std::set<std::string>& used_problems,
                               const PairingConfig& config, std::vector<std::string>* warnings) {
  config.validate();
  std::vector<std::pair<int, const corpus::Problem*>> remaining;
  for (const auto& p : corpus) {
    if (!used_problems.count(p.problem_id)) remaining.emplace_back(corpus::problem_complexity(p), &p);
  }
  std::sort(remaining.begin(), remaining.end(), [](const auto& x, const auto& y) {
    return x.first != y.first ? x.first > y.first : x.second->problem_id < y.second->problem_id;
  });

  Benchmark pairs;
  LanguageBalancer balance(config.partner_languages);
  for (const auto& [_, problem] : remaining) {
    if (pairs.size() >= config.pairs_per_label) break;
    const auto* anchor = most_complex(*problem, config.anchor_language);
    if (anchor == nullptr) continue;
    bool placed = false;
    for (std::size_t lang_slot : balance.candidates()) {
      const auto* partner = most_complex(*problem, balance.language(lang_slot));
      if (partner == nullptr) continue;
      CandidatePair p;
      p.pair_id = pair_id("pos", pairs.size() + 1);
      p.label = Label::kClone;
      p.a = side_of(*anchor);
      p.b = side_of(*partner);
      p.provenance = Provenance::kSameProblem;
      pairs.push_back(std::move(p));
      balance.record(lang_slot);
      placed = true;
      break;
    }
    if (!placed && warnings) {
      warnings->push_back("problem " + problem->problem_id + " lacks a partner language needed for balance");
    }
  }
  if (pairs.size() < config.pairs_per_label) {
    throw InsufficientProblems("only " + std::to_string(pairs.size()) + " of " +
                               std::to_string(config.pairs_per_label) + " clone pairs could be formed from " +
                               std::to_string(remaining.size()) + " remaining problems");
  }
  return pairs;
}

BuildResult build_benchmark(const corpus::Corpus& corpus, const ProblemVectors& vectors,
                            const PairingConfig& config) {
  config.validate();
  BuildResult r;
  r.clustering = cluster_problems(vectors, config.dbscan_eps, config.dbscan_min_pts);
  auto negatives = build_negative_pairs(corpus, vectors, r.clustering, config);
  auto positives = build_positive_pairs(corpus, negatives.anchors, config, &negatives.warnings);
  r.pairs = std::move(negatives.pairs);
  r.pairs.insert(r.pairs.end(), std::make_move_iterator(positives.begin()), std::make_move_iterator(positives.end()));
  r.warnings = std::move(negatives.warnings);
  validate_pairs(r.pairs);
  return r;
}

}  // namespace xclone::pairing
