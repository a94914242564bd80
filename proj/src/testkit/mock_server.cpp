#include "xclone/testkit/mock_server.hpp"

#include <httplib.h>

#include <nlohmann/json.hpp>

#include "xclone/errors.hpp"
#include "xclone/prompts.hpp"

namespace xclone::testkit {

using nlohmann::json;
namespace pr = xclone::prompts;

namespace {

std::string_view prefix_before_placeholder(const std::string& tpl) {
  return std::string_view(tpl).substr(0, tpl.find("{{"));
}

bool is_step1(std::string_view prompt) {
  if (prompt.starts_with(prefix_before_placeholder(pr::template_text(pr::PromptKind::kSeparateCode, 0)))) return true;
  for (auto v : {pr::ExplanationVariant::kSimilarity, pr::ExplanationVariant::kReasoning,
                 pr::ExplanationVariant::kDifference, pr::ExplanationVariant::kIntegrated}) {
    if (prompt.starts_with(prefix_before_placeholder(pr::template_text(pr::PromptKind::kSeparateExplanation, 0, v)))) {
      return true;
    }
  }
  return false;
}

bool is_score_prompt(std::string_view prompt) {
  return prompt.starts_with(prefix_before_placeholder(pr::template_text(pr::PromptKind::kCodeSimilarity, 0)));
}

std::vector<std::string> code_markers(std::string_view text) {
  std::vector<std::string> out;
  for (auto& m : find_markers(text)) {
    if (m[7] == 'p') out.push_back(std::move(m));
  }
  return out;
}

// Bodies of ``` fenced blocks.
std::vector<std::string_view> fenced_blocks(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t open = text.find("```", pos);
    if (open == std::string_view::npos) break;
    const std::size_t body = text.find('\n', open);
    if (body == std::string_view::npos) break;
    const std::size_t close = text.find("```", body);
    if (close == std::string_view::npos) break;
    out.push_back(text.substr(body + 1, close - body - 1));
    pos = close + 3;
  }
  return out;
}

}  // namespace

std::string mock_chat_reply(std::string_view prompt, const MockChatOptions& options) {
  const auto blocks = fenced_blocks(prompt);
  if (is_step1(prompt)) {
    std::string tags;
    for (auto b : blocks) {
      const auto m = code_markers(b);
      if (!m.empty()) tags += (tags.empty() ? "" : " and ") + m.front();
    }
    if (tags.empty()) tags = "an unknown tag";
    return "The code tagged " + tags + " accumulates a running total in a loop guarded by modular conditions.";
  }

  const double u = static_cast<double>(fnv1a(prompt, options.chaos_seed) >> 11) * 0x1.0p-53;
  if (u < options.chaos_rate) return "It is hard to say without more context.";

  std::vector<std::string> markers;
  if (blocks.size() >= 2) {
    for (std::size_t i = 0; i < 2; ++i) {
      const auto m = code_markers(blocks[i]);
      if (!m.empty()) markers.push_back(m.front());
    }
  } else {
    markers = code_markers(prompt);
  }
  if (markers.size() < 2) return "I cannot tell from what was given.";
  const bool same = markers[0] == markers[1];
  if (is_score_prompt(prompt)) return same ? "Similarity score: 9" : "Similarity score: 1";
  return same ? "yes" : "no";
}

MockServer::MockServer(MockServerOptions options)
    : options_(std::move(options)), embedder_(options_.registry), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

MockServer::~MockServer() { stop(); }

void MockServer::install_routes() {
  auto guard = [this](const httplib::Request& req, httplib::Response& res, auto&& body) {
    ++requests_;
    const std::size_t now = ++in_flight_;
    for (std::size_t prev = max_in_flight_.load(); now > prev && !max_in_flight_.compare_exchange_weak(prev, now);) {
    }
    if (options_.latency.count() > 0) std::this_thread::sleep_for(options_.latency);

    const std::string auth = req.get_header_value("Authorization");
    const std::string expected = "Bearer " + options_.expected_key;
    if (auth.rfind("Bearer ", 0) != 0 || (!options_.expected_key.empty() && auth != expected)) {
      res.status = 401;
      res.set_content(R"({"error":{"message":"invalid api key"}})", "application/json");
    } else if (int left = fail_remaining_.load(); left > 0 && fail_remaining_.compare_exchange_strong(left, left - 1)) {
      res.status = fail_status_.load();
      res.set_content(R"({"error":{"message":"injected failure"}})", "application/json");
    } else {
      try {
        res.set_content(body(json::parse(req.body)).dump(), "application/json");
      } catch (const std::exception& e) {
        res.status = 400;
        res.set_content(json{{"error", {{"message", e.what()}}}}.dump(), "application/json");
      }
    }
    --in_flight_;
  };

  auto embeddings = [this, guard](const httplib::Request& req, httplib::Response& res) {
    ++embedding_requests_;
    guard(req, res, [this](const json& in) {
      json data = json::array();
      const auto& input = in.at("input");
      std::vector<std::string> texts =
          input.is_string() ? std::vector<std::string>{input.get<std::string>()} : input.get<std::vector<std::string>>();
      for (std::size_t i = 0; i < texts.size(); ++i) {
        data.push_back({{"object", "embedding"}, {"index", i}, {"embedding", embedder_.embed(texts[i])}});
      }
      return json{{"object", "list"}, {"model", in.value("model", "mock")}, {"data", std::move(data)}};
    });
  };

  auto chat = [this, guard](const httplib::Request& req, httplib::Response& res) {
    ++chat_requests_;
    guard(req, res, [this](const json& in) {
      const auto& msgs = in.at("messages");
      std::string prompt;
      for (const auto& m : msgs) {
        if (m.at("role") == "user") prompt = m.at("content").get<std::string>();
      }
      std::string reply = mock_chat_reply(prompt, options_.chat);
      if (int left = empty_remaining_.load(); left > 0 && empty_remaining_.compare_exchange_strong(left, left - 1)) {
        reply.clear();
      }
      return json{{"id", "mock"},
                  {"object", "chat.completion"},
                  {"model", in.value("model", "mock")},
                  {"choices",
                   {{{"index", 0},
                     {"message", {{"role", "assistant"}, {"content", reply}}},
                     {"finish_reason", "stop"}}}},
                  {"usage",
                   {{"prompt_tokens", prompt.size() / 4},
                    {"completion_tokens", reply.size() / 4},
                    {"total_tokens", (prompt.size() + reply.size()) / 4}}}};
    });
  };

  for (const char* prefix : {"/v1", ""}) {
    server_->Post(std::string(prefix) + "/embeddings", embeddings);
    server_->Post(std::string(prefix) + "/chat/completions", chat);
  }
}

void MockServer::start() {
  if (thread_.joinable()) return;
  port_ = server_->bind_to_any_port("127.0.0.1");
  if (port_ < 0) throw Error(ErrorKind::kData, "mock server could not bind a port");
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void MockServer::run_on(int port) {
  if (!server_->bind_to_port("127.0.0.1", port)) {
    throw Error(ErrorKind::kData, "mock server could not bind port " + std::to_string(port));
  }
  port_ = port;
  server_->listen_after_bind();
}

void MockServer::stop() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::string MockServer::base_url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }

void MockServer::fail_next(int count, int status) {
  fail_status_ = status;
  fail_remaining_ = count;
}

void MockServer::empty_next(int count) { empty_remaining_ = count; }

void MockServer::reset_counters() {
  requests_ = 0;
  embedding_requests_ = 0;
  chat_requests_ = 0;
  max_in_flight_ = 0;
}

}  // namespace xclone::testkit
