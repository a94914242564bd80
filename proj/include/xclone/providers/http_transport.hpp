#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace xclone::providers {

struct RetryPolicy {
  // Retries after the first attempt; 3 means up to 4 requests in total.
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{500};
  double multiplier = 2.0;
  std::chrono::milliseconds max_backoff{30000};

  std::chrono::milliseconds delay_before_retry(int retry_index) const;
};

struct ProviderSettings {
  // Scheme, host, optional port and path prefix, e.g. "https://api.openai.com/v1".
  std::string base_url = "https://api.openai.com/v1";
  std::string credential_env = "XCLONE_API_KEY";
  // Programmatic override of the environment lookup; never exposed as a flag.
  std::optional<std::string> api_key;
  std::size_t max_in_flight = 4;
  RetryPolicy retry;
  std::chrono::seconds timeout{120};
};

// Caps the number of concurrently outstanding requests.
class InFlightLimiter {
 public:
  explicit InFlightLimiter(std::size_t limit) : limit_(limit == 0 ? 1 : limit) {}
  void acquire();
  void release();

 private:
  std::size_t limit_;
  std::size_t active_ = 0;
  std::mutex mu_;
  std::condition_variable cv_;
};

// JSON-over-HTTP POST with bearer auth, retries and bounded concurrency.
// Safe to share between threads.
class HttpTransport {
 public:
  explicit HttpTransport(ProviderSettings settings);

  // POSTs to base_url + endpoint. Retries transport failures, 429 and 5xx with
  // exponential backoff. Throws AuthError (missing credential, 401, 403),
  // RateLimited, ProviderError.
  nlohmann::json post_json(std::string_view endpoint, const nlohmann::json& body);

  bool has_credential() const { return !api_key_.empty(); }
  std::size_t requests_sent() const { return requests_sent_.load(); }
  const ProviderSettings& settings() const { return settings_; }

 private:
  struct Endpoint {
    std::string scheme_host_port;
    std::string path_prefix;
  };

  ProviderSettings settings_;
  Endpoint endpoint_;
  std::string api_key_;
  InFlightLimiter limiter_;
  std::atomic<std::size_t> requests_sent_{0};
};

}  // namespace xclone::providers
