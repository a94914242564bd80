#include "xclone/detectors.hpp"

#include <cmath>

#include "xclone/errors.hpp"
#include "xclone/parallel.hpp"
#include "xclone/providers/clients.hpp"

namespace xclone::detectors {

std::string_view to_string(BackendKind kind) {
  switch (kind) {
    case BackendKind::kCosine:
      return "cosine";
    case BackendKind::kLlm:
      return "llm";
    case BackendKind::kClassifier:
      return "classifier";
  }
  return "cosine";
}

BackendKind parse_backend_kind(std::string_view name) {
  for (auto k : {BackendKind::kCosine, BackendKind::kLlm, BackendKind::kClassifier}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorKind::kUsage, "unknown backend '" + std::string(name) + "' (expected llm, cosine or classifier)");
}

const ml::Vector* SnippetEmbeddings::find(const std::string& source) const {
  auto it = by_source_.find(source);
  return it == by_source_.end() ? nullptr : &it->second;
}

SnippetEmbeddings embed_snippets(const Benchmark& pairs, providers::EmbeddingClient& client) {
  std::vector<std::string> texts;
  texts.reserve(pairs.size() * 2);
  for (const auto& p : pairs) {
    texts.push_back(p.a.source);
    texts.push_back(p.b.source);
  }
  auto vecs = client.embed_texts(texts);
  SnippetEmbeddings out;
  for (std::size_t i = 0; i < texts.size(); ++i) out.put(texts[i], std::move(vecs[i].values));
  return out;
}

Label score_to_label(double score, double theta) {
  if (!std::isfinite(score) || !std::isfinite(theta)) throw NonFinite();
  return score >= theta ? Label::kClone : Label::kNonClone;
}

namespace {

std::pair<const ml::Vector*, const ml::Vector*> lookup(const CandidatePair& pair, const SnippetEmbeddings& emb) {
  const auto* a = emb.find(pair.a.source);
  const auto* b = emb.find(pair.b.source);
  if (a == nullptr || b == nullptr) throw MissingEmbedding(pair.pair_id);
  return {a, b};
}

void check_cancel(const std::atomic<bool>* cancel) {
  if (cancel != nullptr && cancel->load()) throw Interrupted();
}

}  // namespace

Prediction cosine_detect(const CandidatePair& pair, const SnippetEmbeddings& embeddings, double theta) {
  if (!(theta >= -1.0 && theta <= 1.0)) {
    throw Error(ErrorKind::kUsage, "cosine threshold must lie in [-1, 1]");
  }
  const auto [a, b] = lookup(pair, embeddings);
  const double sim = ml::cosine_similarity(*a, *b);
  Prediction p;
  p.pair_id = pair.pair_id;
  p.backend = "cosine";
  p.raw_score = sim;
  p.predicted = score_to_label(sim, theta);
  return p;
}

Prediction llm_detect(const CandidatePair& pair, const prompts::ChatFn& chat, const LlmOptions& options) {
  Prediction p;
  p.pair_id = pair.pair_id;
  p.prompt = std::string(prompts::to_string(options.kind));
  p.backend = "llm(" + *p.prompt + ")";

  prompts::Decision d;
  try {
    d = prompts::run_protocol(options.kind, pair, chat, options.protocol);
  } catch (const AuthError&) {
    throw;
  } catch (const ProviderError& e) {
    d.verdict = prompts::Verdict::kUndecided;
    d.note = e.what();
  }
  p.steps = d.steps;
  p.raw = std::move(d.raw);
  p.note = std::move(d.note);
  p.score = d.score;

  if (prompts::yields_score(options.kind) && d.score) {
    p.raw_score = d.score;
    p.verdict = score_to_label(*d.score, options.score_threshold) == Label::kClone ? prompts::Verdict::kClone
                                                                                     : prompts::Verdict::kNonClone;
  } else if (prompts::yields_score(options.kind)) {
    p.verdict = prompts::Verdict::kUndecided;
  } else {
    p.verdict = d.verdict;
  }

  switch (*p.verdict) {
    case prompts::Verdict::kClone:
      p.predicted = Label::kClone;
      break;
    case prompts::Verdict::kNonClone:
      p.predicted = Label::kNonClone;
      break;
    case prompts::Verdict::kUndecided:
      p.predicted = options.fallback;
      p.undecided = true;
      break;
  }
  return p;
}

ml::Vector pair_features(const CandidatePair& pair, const SnippetEmbeddings& embeddings) {
  const auto [a, b] = lookup(pair, embeddings);
  return ml::abs_diff_features(*a, *b);
}

Prediction classifier_detect(const CandidatePair& pair, const SnippetEmbeddings& embeddings,
                             const ml::TrainedModel& model, const std::string& backend_name) {
  const auto x = pair_features(pair, embeddings);
  const auto out = ml::predict(model, x);
  Prediction p;
  p.pair_id = pair.pair_id;
  p.backend = backend_name;
  p.predicted = from_sign(out.label);
  p.raw_score = out.margin;
  return p;
}

prompts::ChatFn make_chat_fn(providers::ChatClient& client, std::string model_id, double temperature,
                             int max_tokens) {
  return [&client, model_id = std::move(model_id), temperature,
          max_tokens](const std::vector<providers::ChatMessage>& msgs) {
    providers::ChatRequest req;
    req.model_id = model_id;
    req.messages = msgs;
    req.temperature = temperature;
    req.max_tokens = max_tokens;
    return client.chat(req).content;
  };
}

std::vector<Prediction> detect_cosine(const Benchmark& pairs, const SnippetEmbeddings& embeddings, double theta) {
  std::vector<Prediction> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(cosine_detect(p, embeddings, theta));
  return out;
}

std::vector<Prediction> detect_llm(const Benchmark& pairs, const prompts::ChatFn& chat, const LlmOptions& options,
                                   std::size_t workers, const std::atomic<bool>* cancel) {
  std::vector<Prediction> out(pairs.size());
  parallel_for(pairs.size(), workers, [&](std::size_t i) {
    check_cancel(cancel);
    out[i] = llm_detect(pairs[i], chat, options);
  });
  check_cancel(cancel);
  return out;
}

std::vector<Prediction> detect_classifier(const Benchmark& pairs, const SnippetEmbeddings& embeddings,
                                          const ml::TrainedModel& model, const std::string& backend_name) {
  std::vector<Prediction> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(classifier_detect(p, embeddings, model, backend_name));
  return out;
}

std::vector<Prediction> rethreshold(std::vector<Prediction> predictions, double theta) {
  for (auto& p : predictions) {
    if (p.raw_score) {
      p.predicted = score_to_label(*p.raw_score, theta);
      p.undecided = false;
    }
  }
  return predictions;
}

}  // namespace xclone::detectors
