#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "xclone/benchmark.hpp"
#include "xclone/detectors.hpp"
#include "xclone/ml/learner.hpp"
#include "xclone/pairing.hpp"
#include "xclone/providers/http_transport.hpp"

namespace xclone::cli {

// Parses the TOML subset used by config files: [section] headers, bare keys,
// strings, integers, floats, booleans and single-line arrays of those.
// Returns a JSON object with one nested object per section. Throws
// Error(kUsage) naming the offending line.
nlohmann::json parse_toml(std::string_view text);

struct ProviderConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string embedding_model = "text-embedding-3-large";
  std::string chat_model = "gpt-3.5-turbo";
  std::string credential_env = "XCLONE_API_KEY";
  std::size_t batch_size = 64;
  std::size_t max_in_flight = 4;
  int max_retries = 3;
  int initial_backoff_ms = 500;
  int timeout_s = 120;

  providers::ProviderSettings settings() const;
};

struct DetectorConfig {
  double cosine_threshold = 0.5;
  double score_threshold = 5.0;
  std::string prompt = "simple";
  Label fallback_label = Label::kNonClone;
  std::string explanation_variant = "integrated";
  std::size_t max_prompt_chars = 0;
  double temperature = 0.0;
  int max_tokens = 1024;

  detectors::LlmOptions llm_options() const;
};

struct LearnerConfig {
  std::string kind = "svm";
  std::string kernel = "poly";
  int degree = 3;
  std::optional<double> gamma;  // unset: 1 / (dim * var)
  double coef0 = 0.0;
  double C = 1.0;
  double tolerance = 1e-3;
  int max_passes = 10;
  std::size_t k = 5;
  std::string backend = "kd_tree";

  ml::LearnerSpec spec(std::uint64_t seed) const;
};

struct RunConfig {
  std::uint64_t seed = 42;
  std::filesystem::path out_dir = "xclone-out";
  std::filesystem::path corpus_path;
  std::filesystem::path benchmark_path;  // default <out_dir>/benchmark.jsonl
  std::filesystem::path cache_path;      // default <out_dir>/cache.jsonl
  ProviderConfig provider;
  pairing::PairingConfig pairing;
  DetectorConfig detector;
  LearnerConfig learner;
  std::size_t folds = 10;
  // Language -> {"decision_tokens": [...]}, fed to KeywordRegistry::apply_overrides.
  nlohmann::json keywords = nlohmann::json::object();

  // Overlays keys present in a parsed config file. Unknown keys are errors.
  void apply(const nlohmann::json& file);
  // Fills defaulted paths and copies the seed into the pairing config.
  void resolve();
  // Throws Error(kUsage).
  void validate() const;
  std::string to_toml() const;
};

RunConfig load_config(const std::filesystem::path& path);

}  // namespace xclone::cli
