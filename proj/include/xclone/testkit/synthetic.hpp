#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xclone/corpus.hpp"
#include "xclone/ml/vector_ops.hpp"

namespace xclone::testkit {

struct SyntheticSpec {
  std::size_t n_problems = 100;
  // First entry is the anchor language.
  std::vector<std::string> languages = {"java", "python", "cpp"};
  std::size_t dim = 64;
  // Norm scale of the embedder noise vector (per component sigma / sqrt(dim)).
  double noise_sigma = 0.02;
  // Minimum pairwise cosine distance between problem code latents.
  double margin = 0.08;
  // Problems per description topic; DBSCAN finds one cluster per topic.
  std::size_t topic_size = 5;
  // Spread of description latents around their topic.
  double description_spread = 0.03;
  std::uint64_t seed = 42;
  std::size_t max_attempts = 100000;

  // Throws Error(kUsage).
  void validate() const;
};

// Marker token -> latent direction.
struct LatentRegistry {
  std::map<std::string, ml::Vector> latents;
  double noise_sigma = 0.02;
  std::uint64_t seed = 42;

  std::size_t dim() const { return latents.empty() ? 0 : latents.begin()->second.size(); }
};

nlohmann::json registry_to_json(const LatentRegistry& r);
LatentRegistry registry_from_json(const nlohmann::json& j);
void save_registry(const LatentRegistry& r, const std::filesystem::path& path);
LatentRegistry load_registry(const std::filesystem::path& path);

struct SyntheticCorpus {
  corpus::Corpus corpus;
  LatentRegistry registry;
};

std::string code_marker(std::size_t problem_index);         // "xclone_p0007"
std::string description_marker(std::size_t problem_index);  // "xclone_d0007"

// Languages the generator can write code for.
const std::vector<std::string>& synthetic_languages();

// Deterministic under spec.seed. Throws RejectionOverflow when the margin
// cannot be met within max_attempts draws.
SyntheticCorpus generate_corpus(const SyntheticSpec& spec);

// Latent plus hash-seeded Gaussian noise for texts holding a marker, a
// hash-derived unit vector otherwise. Same text, same vector.
class MockEmbedder {
 public:
  explicit MockEmbedder(LatentRegistry registry);
  ml::Vector embed(std::string_view text) const;
  std::size_t dim() const { return dim_; }

 private:
  LatentRegistry registry_;
  std::size_t dim_;
};

// All marker tokens in order of appearance.
std::vector<std::string> find_markers(std::string_view text);

// Stable 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view text, std::uint64_t seed = 0);

}  // namespace xclone::testkit
