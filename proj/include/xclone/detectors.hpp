#pragma once

#include <atomic>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "xclone/benchmark.hpp"
#include "xclone/ml/learner.hpp"
#include "xclone/prompts.hpp"

namespace xclone::providers {
class EmbeddingClient;
class ChatClient;
}  // namespace xclone::providers

namespace xclone::detectors {

enum class BackendKind { kCosine, kLlm, kClassifier };

std::string_view to_string(BackendKind kind);
BackendKind parse_backend_kind(std::string_view name);  // "cosine" | "llm" | "classifier"

struct Prediction {
  std::string pair_id;
  // "cosine", "llm(<prompt>)" or "classifier(<learner>)"
  std::string backend;
  Label predicted = Label::kNonClone;
  // Cosine similarity, LLM score or SVM margin.
  std::optional<double> raw_score;
  bool undecided = false;

  // LLM runs only.
  std::optional<std::string> prompt;
  std::optional<prompts::Verdict> verdict;
  std::optional<double> score;
  int steps = 0;
  std::vector<std::string> raw;
  std::string note;

  bool operator==(const Prediction&) const = default;
};

// Snippet vectors keyed by exact source text.
class SnippetEmbeddings {
 public:
  void put(const std::string& source, ml::Vector v) { by_source_[source] = std::move(v); }
  const ml::Vector* find(const std::string& source) const;
  std::size_t size() const { return by_source_.size(); }

 private:
  std::unordered_map<std::string, ml::Vector> by_source_;
};

// One embedding per distinct snippet in the benchmark.
SnippetEmbeddings embed_snippets(const Benchmark& pairs, providers::EmbeddingClient& client);

// clone iff score >= theta. Throws NonFinite.
Label score_to_label(double score, double theta = 5.0);

// clone iff cosine similarity >= theta. Throws MissingEmbedding, and
// Error(kUsage) for theta outside [-1, 1].
Prediction cosine_detect(const CandidatePair& pair, const SnippetEmbeddings& embeddings, double theta = 0.5);

struct LlmOptions {
  prompts::PromptKind kind = prompts::PromptKind::kSimple;
  prompts::ProtocolOptions protocol;
  double score_threshold = 5.0;
  Label fallback = Label::kNonClone;
};

// Undecided verdicts map to the fallback label with the flag set. Provider
// failures other than authentication mark the pair undecided and keep going.
Prediction llm_detect(const CandidatePair& pair, const prompts::ChatFn& chat, const LlmOptions& options);

// abs-diff features of the two snippets. Throws MissingEmbedding.
ml::Vector pair_features(const CandidatePair& pair, const SnippetEmbeddings& embeddings);

Prediction classifier_detect(const CandidatePair& pair, const SnippetEmbeddings& embeddings,
                             const ml::TrainedModel& model, const std::string& backend_name = "classifier");

// Chat callback bound to a client and model.
prompts::ChatFn make_chat_fn(providers::ChatClient& client, std::string model_id, double temperature = 0.0,
                             int max_tokens = 1024);

// Batch versions, one prediction per pair in input order. `cancel` is polled
// between pairs; a raised flag throws Interrupted.
std::vector<Prediction> detect_cosine(const Benchmark& pairs, const SnippetEmbeddings& embeddings, double theta);
std::vector<Prediction> detect_llm(const Benchmark& pairs, const prompts::ChatFn& chat, const LlmOptions& options,
                                   std::size_t workers = 1, const std::atomic<bool>* cancel = nullptr);
std::vector<Prediction> detect_classifier(const Benchmark& pairs, const SnippetEmbeddings& embeddings,
                                          const ml::TrainedModel& model, const std::string& backend_name);

// Relabels by raw_score >= theta; predictions without a score keep their label.
std::vector<Prediction> rethreshold(std::vector<Prediction> predictions, double theta);

// JSONL, one object per prediction.
nlohmann::json prediction_to_json(const Prediction& p);
Prediction prediction_from_json(const nlohmann::json& j);
void write_predictions(const std::vector<Prediction>& predictions, std::ostream& out);
void write_predictions(const std::vector<Prediction>& predictions, const std::filesystem::path& path);
// Throws MalformedRecord.
std::vector<Prediction> read_predictions(std::istream& in);
std::vector<Prediction> read_predictions(const std::filesystem::path& path);

}  // namespace xclone::detectors
