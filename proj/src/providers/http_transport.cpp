#include "xclone/providers/http_transport.hpp"

#include <httplib.h>

#include <algorithm>
#include <cstdlib>
#include <thread>

#include "xclone/errors.hpp"

namespace xclone::providers {

using nlohmann::json;

std::chrono::milliseconds RetryPolicy::delay_before_retry(int retry_index) const {
  double ms = static_cast<double>(initial_backoff.count());
  for (int i = 0; i < retry_index; ++i) ms *= multiplier;
  ms = std::min(ms, static_cast<double>(max_backoff.count()));
  return std::chrono::milliseconds(static_cast<long long>(ms));
}

void InFlightLimiter::acquire() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return active_ < limit_; });
  ++active_;
}

void InFlightLimiter::release() {
  {
    std::lock_guard lock(mu_);
    --active_;
  }
  cv_.notify_one();
}

namespace {

class LimiterSlot {
 public:
  explicit LimiterSlot(InFlightLimiter& l) : l_(l) { l_.acquire(); }
  ~LimiterSlot() { l_.release(); }
  LimiterSlot(const LimiterSlot&) = delete;
  LimiterSlot& operator=(const LimiterSlot&) = delete;

 private:
  InFlightLimiter& l_;
};

std::string excerpt(const std::string& body) {
  constexpr std::size_t kMax = 200;
  return body.size() <= kMax ? body : body.substr(0, kMax) + "...";
}

}  // namespace

HttpTransport::HttpTransport(ProviderSettings settings)
    : settings_(std::move(settings)), limiter_(settings_.max_in_flight) {
  const auto& url = settings_.base_url;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorKind::kUsage, "base_url must include a scheme: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  endpoint_.scheme_host_port = url.substr(0, path_start);
  if (path_start != std::string::npos) endpoint_.path_prefix = url.substr(path_start);
  while (!endpoint_.path_prefix.empty() && endpoint_.path_prefix.back() == '/') endpoint_.path_prefix.pop_back();

  if (settings_.api_key) {
    api_key_ = *settings_.api_key;
  } else if (const char* env = std::getenv(settings_.credential_env.c_str()); env != nullptr) {
    api_key_ = env;
  }
}

json HttpTransport::post_json(std::string_view endpoint, const json& body) {
  if (api_key_.empty()) {
    throw AuthError("no credential: set the " + settings_.credential_env + " environment variable");
  }
  const std::string path = endpoint_.path_prefix + std::string(endpoint);
  const std::string payload = body.dump();
  const httplib::Headers headers = {{"Authorization", "Bearer " + api_key_}};
  const int attempts = 1 + std::max(0, settings_.retry.max_retries);

  int last_status = 0;
  std::string last_error;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(settings_.retry.delay_before_retry(attempt - 1));

    httplib::Result res;
    {
      LimiterSlot slot(limiter_);
      httplib::Client client(endpoint_.scheme_host_port);
      client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(settings_.timeout));
      client.set_read_timeout(settings_.timeout);
      client.set_write_timeout(settings_.timeout);
      ++requests_sent_;
      res = client.Post(path, headers, payload, "application/json");
    }

    if (!res) {
      last_status = 0;
      last_error = "transport failure: " + httplib::to_string(res.error());
      continue;
    }
    const int status = res->status;
    if (status == 401 || status == 403) throw AuthError("provider rejected credential: " + excerpt(res->body));
    if (status == 429 || status >= 500) {
      last_status = status;
      last_error = excerpt(res->body);
      continue;
    }
    if (status < 200 || status >= 300) throw ProviderError(status, excerpt(res->body));
    try {
      return json::parse(res->body);
    } catch (const json::parse_error&) {
      throw ProviderError(status, "response is not JSON: " + excerpt(res->body));
    }
  }
  if (last_status == 429) throw RateLimited(attempts);
  throw ProviderError(last_status, last_error);
}

}  // namespace xclone::providers
