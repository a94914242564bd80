#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "xclone/providers/cache.hpp"
#include "xclone/providers/http_transport.hpp"
#include "xclone/providers/types.hpp"

namespace xclone::providers {

// Client for a `/embeddings` endpoint. Requests are cached per input text, so
// any batching of a later run replays from the same entries.
class EmbeddingClient {
 public:
  EmbeddingClient(std::shared_ptr<HttpTransport> transport, std::shared_ptr<ResponseCache> cache,
                  std::string model_id, std::size_t batch_size = 64);

  // Order-preserving; duplicate texts are requested once. Throws AuthError
  // (only when some text is not cached), RateLimited, ProviderError.
  std::vector<EmbeddingVector> embed_texts(const std::vector<std::string>& texts);

  const std::string& model_id() const { return model_id_; }

 private:
  std::vector<std::vector<double>> request_batch(const std::vector<std::string>& batch);
  void check_vector(const std::vector<double>& v);

  std::shared_ptr<HttpTransport> transport_;
  std::shared_ptr<ResponseCache> cache_;
  std::string model_id_;
  std::size_t batch_size_;
  std::mutex dim_mu_;
  std::size_t dim_ = 0;
};

// Client for a `/chat/completions` endpoint with replay from the cache.
class ChatClient {
 public:
  ChatClient(std::shared_ptr<HttpTransport> transport, std::shared_ptr<ResponseCache> cache);

  // Throws AuthError, RateLimited, ProviderError, EmptyResponse.
  ChatResponse chat(const ChatRequest& request);

 private:
  std::shared_ptr<HttpTransport> transport_;
  std::shared_ptr<ResponseCache> cache_;
};

}  // namespace xclone::providers
