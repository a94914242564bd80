#include <unordered_map>

#include "xclone/errors.hpp"
#include "xclone/parallel.hpp"
#include "xclone/providers/clients.hpp"

namespace xclone::providers {

using nlohmann::json;

namespace {

constexpr std::string_view kEmbedKind = "embed";

json embed_payload(const std::string& text) { return {{"input", text}}; }

}  // namespace

EmbeddingClient::EmbeddingClient(std::shared_ptr<HttpTransport> transport, std::shared_ptr<ResponseCache> cache,
                                 std::string model_id, std::size_t batch_size)
    : transport_(std::move(transport)),
      cache_(std::move(cache)),
      model_id_(std::move(model_id)),
      batch_size_(batch_size == 0 ? 1 : batch_size) {
  if (!cache_) cache_ = std::make_shared<ResponseCache>();
}

void EmbeddingClient::check_vector(const std::vector<double>& v) {
  if (v.empty()) throw ProviderError(200, "embedding is empty");
  bool nonzero = false;
  for (double x : v) {
    if (!std::isfinite(x)) throw ProviderError(200, "embedding has non-finite entries");
    nonzero = nonzero || x != 0.0;
  }
  if (!nonzero) throw ProviderError(200, "provider returned an all-zero embedding");
  std::lock_guard lock(dim_mu_);
  if (dim_ == 0) dim_ = v.size();
  if (v.size() != dim_) {
    throw ProviderError(200, "embedding dimension changed from " + std::to_string(dim_) + " to " +
                                 std::to_string(v.size()) + " for model " + model_id_);
  }
}

std::vector<std::vector<double>> EmbeddingClient::request_batch(const std::vector<std::string>& batch) {
  if (!transport_) throw AuthError("no provider configured and embeddings are not cached");
  const json body = {{"model", model_id_}, {"input", batch}};
  const json resp = transport_->post_json("/embeddings", body);
  std::vector<std::vector<double>> out(batch.size());
  std::vector<bool> filled(batch.size(), false);
  try {
    const auto& data = resp.at("data");
    for (std::size_t pos = 0; pos < data.size(); ++pos) {
      const auto& item = data[pos];
      const std::size_t idx = item.contains("index") ? item.at("index").get<std::size_t>() : pos;
      if (idx >= batch.size()) throw ProviderError(200, "embedding index out of range");
      out[idx] = item.at("embedding").get<std::vector<double>>();
      filled[idx] = true;
    }
  } catch (const json::exception& e) {
    throw ProviderError(200, std::string("malformed embeddings response: ") + e.what());
  }
  for (bool f : filled) {
    if (!f) throw ProviderError(200, "embeddings response is missing entries");
  }
  return out;
}

std::vector<EmbeddingVector> EmbeddingClient::embed_texts(const std::vector<std::string>& texts) {
  // Unique texts in first-seen order.
  std::unordered_map<std::string, std::size_t> slot_of;
  std::vector<std::string> unique;
  for (const auto& t : texts) {
    if (slot_of.emplace(t, unique.size()).second) unique.push_back(t);
  }

  std::vector<std::vector<double>> vectors(unique.size());
  std::vector<std::string> keys(unique.size());
  std::vector<std::size_t> misses;
  for (std::size_t i = 0; i < unique.size(); ++i) {
    keys[i] = ResponseCache::make_key(kEmbedKind, model_id_, embed_payload(unique[i]));
    if (auto hit = cache_->get(keys[i])) {
      vectors[i] = hit->at("embedding").get<std::vector<double>>();
      check_vector(vectors[i]);
    } else {
      misses.push_back(i);
    }
  }

  const std::size_t n_batches = (misses.size() + batch_size_ - 1) / batch_size_;
  const std::size_t workers = transport_ ? transport_->settings().max_in_flight : 1;
  parallel_for(n_batches, workers, [&](std::size_t b) {
    const std::size_t begin = b * batch_size_;
    const std::size_t end = std::min(misses.size(), begin + batch_size_);
    std::vector<std::string> batch;
    for (std::size_t m = begin; m < end; ++m) batch.push_back(unique[misses[m]]);
    auto got = request_batch(batch);
    for (std::size_t m = begin; m < end; ++m) {
      const std::size_t i = misses[m];
      vectors[i] = std::move(got[m - begin]);
      check_vector(vectors[i]);
      cache_->put(keys[i], kEmbedKind, {{"embedding", vectors[i]}});
    }
  });

  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back({vectors[slot_of.at(t)], model_id_});
  return out;
}

}  // namespace xclone::providers
