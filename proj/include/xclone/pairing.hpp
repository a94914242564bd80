#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "xclone/benchmark.hpp"
#include "xclone/corpus.hpp"
#include "xclone/ml/vector_ops.hpp"

namespace xclone::providers {
class EmbeddingClient;
}

namespace xclone::pairing {

struct PairingConfig {
  std::string anchor_language = "java";
  std::vector<std::string> partner_languages;
  std::size_t pairs_per_label = 3000;
  double dbscan_eps = 0.3;
  std::size_t dbscan_min_pts = 2;
  std::size_t max_partner_uses = 3;
  std::uint64_t seed = 42;

  // Throws Error(kUsage).
  void validate() const;
};

// Description vectors in corpus order.
struct ProblemVectors {
  std::vector<std::string> ids;
  std::vector<ml::Vector> vectors;

  std::size_t size() const { return ids.size(); }
};

// One vector per problem description. Identical descriptions share a single
// provider request through the embedding cache. Provider errors are rethrown
// with the affected problem ids attached.
ProblemVectors embed_descriptions(const corpus::Corpus& corpus, providers::EmbeddingClient& client);

struct Clustering {
  // Member indices into ProblemVectors, clusters in discovery order.
  std::vector<std::vector<std::size_t>> clusters;
  std::vector<std::size_t> noise;
};

// DBSCAN over cosine distance. Throws DimensionMismatch, ZeroVector.
Clustering cluster_problems(const ProblemVectors& vectors, double eps, std::size_t min_pts);

struct NegativeSelection {
  Benchmark pairs;
  // Problems whose anchor-language sample was consumed as side A.
  std::set<std::string> anchors;
  std::vector<std::string> warnings;
};

// Per cluster, most complex problems first, each paired with the globally
// furthest eligible problem. Throws InsufficientProblems.
NegativeSelection build_negative_pairs(const corpus::Corpus& corpus, const ProblemVectors& vectors,
                                       const Clustering& clustering, const PairingConfig& config);

// Clone pairs from problems not used as negative anchors, most complex first.
// Throws InsufficientProblems.
Benchmark build_positive_pairs(const corpus::Corpus& corpus, const std::set<std::string>& used_problems,
                               const PairingConfig& config, std::vector<std::string>* warnings = nullptr);

struct BuildResult {
  Benchmark pairs;  // negatives then positives
  Clustering clustering;
  std::vector<std::string> warnings;
};

BuildResult build_benchmark(const corpus::Corpus& corpus, const ProblemVectors& vectors,
                            const PairingConfig& config);

}  // namespace xclone::pairing
