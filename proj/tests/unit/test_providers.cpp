#include <doctest.h>

#include <future>
#include <thread>

#include "support.hpp"
#include "xclone/errors.hpp"
#include "xclone/providers/cache.hpp"
#include "xclone/providers/clients.hpp"
#include "xclone/testkit/mock_server.hpp"
#include "xclone/testkit/synthetic.hpp"

using namespace xclone;
using namespace xclone::providers;
using nlohmann::json;

namespace {

testkit::MockServerOptions server_options(std::string key = "") {
  testkit::SyntheticSpec spec;
  spec.n_problems = 10;
  testkit::MockServerOptions o;
  o.registry = testkit::generate_corpus(spec).registry;
  o.expected_key = std::move(key);
  return o;
}

ProviderSettings settings_for(const testkit::MockServer& s, std::string key = "test-key") {
  ProviderSettings p;
  p.base_url = s.base_url();
  p.api_key = std::move(key);
  p.retry.initial_backoff = std::chrono::milliseconds(1);
  p.retry.max_backoff = std::chrono::milliseconds(5);
  p.timeout = std::chrono::seconds(10);
  return p;
}

ChatRequest hello(const std::string& text = "xclone_p0001 and xclone_p0001") {
  ChatRequest r;
  r.model_id = "mock-chat";
  r.messages = {{Role::kUser, text}};
  return r;
}

}  // namespace

TEST_CASE("sha256 and cache keys") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  const json a = {{"x", 1}, {"y", {1, 2}}};
  const json b = json::parse(R"({"y":[1,2],"x":1})");
  CHECK(ResponseCache::make_key("chat", "m", a) == ResponseCache::make_key("chat", "m", b));
  CHECK(ResponseCache::make_key("chat", "m", a) != ResponseCache::make_key("embed", "m", a));
  CHECK(ResponseCache::make_key("chat", "m", a) != ResponseCache::make_key("chat", "m2", a));
  CHECK(ResponseCache::make_key("chat", "m", a).size() == 64);
}

TEST_CASE("response cache persistence") {
  TempDir dir;
  const auto path = dir / "cache.jsonl";
  {
    ResponseCache c(path);
    CHECK(c.size() == 0);
    c.put("k1", "chat", {{"content", "one"}});
    c.put("k2", "embed", {{"embedding", {1.0, 2.0}}});
    c.put("k1", "chat", {{"content", "uno"}});
    CHECK(c.get("k1")->at("content") == "uno");
  }
  {
    ResponseCache c(path);
    CHECK(c.size() == 2);
    CHECK(c.get("k1")->at("content") == "uno");  // last line wins
    CHECK(c.get("k2")->at("embedding")[1] == 2.0);
    CHECK_FALSE(c.get("k3").has_value());
  }
  // A crash mid-write leaves half a line behind.
  {
    std::ofstream out(path, std::ios::app);
    out << R"({"key":"k3","kind":"chat","payl)";
  }
  {
    ResponseCache c(path);
    CHECK(c.size() == 2);
    CHECK(c.skipped_lines() == 1);
    c.put("k4", "chat", {{"content", "four"}});
  }
  ResponseCache c(path);
  CHECK(c.get("k4").has_value());
  CHECK(c.get("k1")->at("content") == "uno");

  ResponseCache memory;
  memory.put("m", "chat", {{"content", "x"}});
  CHECK(memory.size() == 1);
}

TEST_CASE("retry policy backoff") {
  RetryPolicy p;
  CHECK(p.delay_before_retry(0) == std::chrono::milliseconds(500));
  CHECK(p.delay_before_retry(1) == std::chrono::milliseconds(1000));
  CHECK(p.delay_before_retry(2) == std::chrono::milliseconds(2000));
  CHECK(p.delay_before_retry(20) == std::chrono::milliseconds(30000));
}

TEST_CASE("chat request validation") {
  auto r = hello();
  CHECK_NOTHROW(r.validate());
  CHECK(r.to_json().at("messages")[0].at("role") == "user");
  CHECK(r.to_json().at("temperature") == 0.0);
  r.messages.clear();
  CHECK_THROWS_AS(r.validate(), Error);
  r = hello();
  r.messages.insert(r.messages.begin(), {Role::kAssistant, "hi"});
  CHECK_THROWS_AS(r.validate(), Error);
  r = hello();
  r.messages.insert(r.messages.begin(), {Role::kSystem, "be terse"});
  CHECK_NOTHROW(r.validate());
  r.temperature = -1;
  CHECK_THROWS_AS(r.validate(), Error);
  r = hello();
  r.max_tokens = 0;
  CHECK_THROWS_AS(r.validate(), Error);
  CHECK(parse_role("assistant") == Role::kAssistant);
  CHECK_THROWS(parse_role("robot"));
}

TEST_CASE("chat against the mock server") {
  testkit::MockServer server(server_options("test-key"));
  server.start();
  auto transport = std::make_shared<HttpTransport>(settings_for(server));
  auto cache = std::make_shared<ResponseCache>();
  ChatClient chat(transport, cache);

  SUBCASE("replies and replay from cache") {
    const auto r = chat.chat(hello());
    CHECK_FALSE(r.content.empty());
    CHECK(server.chat_requests() == 1);
    const auto again = chat.chat(hello());
    CHECK(again.content == r.content);
    CHECK(server.chat_requests() == 1);
  }
  SUBCASE("transient failures are retried") {
    server.fail_next(3, 429);
    CHECK_NOTHROW(chat.chat(hello("retry me")));
    CHECK(server.chat_requests() == 4);
    server.reset_counters();
    server.fail_next(2, 503);
    CHECK_NOTHROW(chat.chat(hello("and me")));
    CHECK(server.chat_requests() == 3);
  }
  SUBCASE("retries run out") {
    server.fail_next(10, 429);
    CHECK_THROWS_AS(chat.chat(hello("never")), RateLimited);
    CHECK(server.chat_requests() == 4);
    server.reset_counters();
    server.fail_next(10, 500);
    try {
      chat.chat(hello("still never"));
      FAIL("expected a provider error");
    } catch (const ProviderError& e) {
      CHECK(e.status() == 500);
      CHECK(e.kind() == ErrorKind::kProvider);
    }
  }
  SUBCASE("auth failures are not retried") {
    auto wrong = std::make_shared<HttpTransport>(settings_for(server, "wrong"));
    ChatClient bad(wrong, std::make_shared<ResponseCache>());
    CHECK_THROWS_AS(bad.chat(hello("x")), AuthError);
    CHECK(server.chat_requests() == 1);
  }
  SUBCASE("empty content") {
    server.empty_next(1);
    CHECK_THROWS_AS(chat.chat(hello("empty")), EmptyResponse);
    CHECK(cache->size() == 0);
  }
  server.stop();
}

TEST_CASE("credential comes from the environment") {
  ProviderSettings s;
  s.base_url = "http://127.0.0.1:9/v1";
  s.credential_env = "XCLONE_TEST_SURELY_UNSET_VAR";
  HttpTransport t(s);
  CHECK_FALSE(t.has_credential());
  CHECK_THROWS_AS(t.post_json("/chat/completions", json::object()), AuthError);

  ::setenv("XCLONE_TEST_CREDENTIAL_VAR", "from-env", 1);
  s.credential_env = "XCLONE_TEST_CREDENTIAL_VAR";
  CHECK(HttpTransport(s).has_credential());
  ::unsetenv("XCLONE_TEST_CREDENTIAL_VAR");

  // A cached request needs no credential at all.
  auto cache = std::make_shared<ResponseCache>();
  const auto req = hello("cached");
  cache->put(ResponseCache::make_key("chat", req.model_id, req.to_json()), "chat",
             {{"content", "yes"}, {"finish_reason", "stop"}});
  s.credential_env = "XCLONE_TEST_SURELY_UNSET_VAR";
  ChatClient c(std::make_shared<HttpTransport>(s), cache);
  CHECK(c.chat(req).content == "yes");
}

TEST_CASE("in-flight bound holds under concurrency") {
  auto opts = server_options();
  opts.latency = std::chrono::milliseconds(30);
  testkit::MockServer server(std::move(opts));
  server.start();
  auto s = settings_for(server);
  s.max_in_flight = 2;
  auto transport = std::make_shared<HttpTransport>(s);
  ChatClient chat(transport, std::make_shared<ResponseCache>());
  std::vector<std::future<ChatResponse>> futures;
  for (int i = 0; i < 8; ++i) {
    futures.push_back(std::async(std::launch::async, [&, i] { return chat.chat(hello("q" + std::to_string(i))); }));
  }
  for (auto& f : futures) CHECK_NOTHROW(f.get());
  CHECK(server.chat_requests() == 8);
  CHECK(server.max_in_flight() <= 2);
  CHECK(server.max_in_flight() >= 1);
  server.stop();
}

TEST_CASE("embedding client") {
  testkit::MockServer server(server_options());
  server.start();
  auto transport = std::make_shared<HttpTransport>(settings_for(server));
  auto cache = std::make_shared<ResponseCache>();
  EmbeddingClient emb(transport, cache, "mock-embed", 2);

  const std::vector<std::string> texts = {"xclone_d0001", "xclone_d0002", "xclone_d0001", "plain", "xclone_d0003"};
  const auto v = emb.embed_texts(texts);
  REQUIRE(v.size() == 5);
  // Four distinct texts in batches of two.
  CHECK(server.embedding_requests() == 2);
  CHECK(v[0].values == v[2].values);
  CHECK(v[0].values != v[1].values);
  CHECK(v[0].model_id == "mock-embed");
  CHECK(v[0].dim() == 64);

  const testkit::MockEmbedder local(server_options().registry);
  const auto expect = local.embed("xclone_d0002");
  for (std::size_t i = 0; i < expect.size(); ++i) CHECK(v[1].values[i] == doctest::Approx(expect[i]));

  // Any later batching replays from the per-text cache.
  EmbeddingClient other(transport, cache, "mock-embed", 64);
  const auto w = other.embed_texts({"xclone_d0003", "xclone_d0001"});
  CHECK(server.embedding_requests() == 2);
  CHECK(w[0].values == v[4].values);
  CHECK(emb.embed_texts({}).empty());
  server.stop();
}
