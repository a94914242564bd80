#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <thread>

#include "xclone/testkit/synthetic.hpp"

namespace httplib {
class Server;
}

namespace xclone::testkit {

struct MockChatOptions {
  // Share of decision replies replaced by an undecidable answer.
  double chaos_rate = 0.0;
  std::uint64_t chaos_seed = 7;
};

// The reply the mock gives to one rendered prompt. Step-1 renders get a
// neutral analysis carrying the snippet's marker; decision renders compare
// markers of the two fenced snippets (or of the whole text when there are no
// fences) and answer "yes"/"no", or a similarity score for the score prompt.
std::string mock_chat_reply(std::string_view prompt, const MockChatOptions& options = {});

struct MockServerOptions {
  LatentRegistry registry;
  MockChatOptions chat;
  // When set, requests must carry exactly this bearer token.
  std::string expected_key;
  // Artificial handling time, makes overlapping requests observable.
  std::chrono::milliseconds latency{0};
};

// OpenAI-style /embeddings and /chat/completions served from an in-process
// HTTP server on a random loopback port.
class MockServer {
 public:
  explicit MockServer(MockServerOptions options);
  ~MockServer();
  MockServer(const MockServer&) = delete;
  MockServer& operator=(const MockServer&) = delete;

  void start();
  void stop();
  // Blocks until stop() is called from another thread.
  void run_on(int port);

  int port() const { return port_; }
  std::string base_url() const;  // "http://127.0.0.1:<port>/v1"

  // The next `count` requests answer with `status` instead of a result.
  void fail_next(int count, int status = 429);
  // The next `count` chat requests return empty content.
  void empty_next(int count);

  std::size_t requests() const { return requests_.load(); }
  std::size_t embedding_requests() const { return embedding_requests_.load(); }
  std::size_t chat_requests() const { return chat_requests_.load(); }
  std::size_t max_in_flight() const { return max_in_flight_.load(); }
  void reset_counters();

 private:
  void install_routes();

  MockServerOptions options_;
  MockEmbedder embedder_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = -1;

  std::atomic<std::size_t> requests_{0};
  std::atomic<std::size_t> embedding_requests_{0};
  std::atomic<std::size_t> chat_requests_{0};
  std::atomic<std::size_t> in_flight_{0};
  std::atomic<std::size_t> max_in_flight_{0};
  std::atomic<int> fail_remaining_{0};
  std::atomic<int> fail_status_{429};
  std::atomic<int> empty_remaining_{0};
};

}  // namespace xclone::testkit
