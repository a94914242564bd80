#include "xclone/errors.hpp"
#include "xclone/providers/clients.hpp"

namespace xclone::providers {

using nlohmann::json;

std::string_view to_string(Role role) {
  switch (role) {
    case Role::kSystem:
      return "system";
    case Role::kUser:
      return "user";
    case Role::kAssistant:
      return "assistant";
  }
  return "user";
}

Role parse_role(std::string_view name) {
  if (name == "system") return Role::kSystem;
  if (name == "user") return Role::kUser;
  if (name == "assistant") return Role::kAssistant;
  throw Error(ErrorKind::kValidation, "unknown chat role '" + std::string(name) + "'");
}

void ChatRequest::validate() const {
  if (messages.empty()) throw Error(ErrorKind::kUsage, "chat request has no messages");
  for (const auto& m : messages) {
    if (m.role == Role::kSystem) continue;
    if (m.role != Role::kUser) throw Error(ErrorKind::kUsage, "first non-system message must come from the user");
    break;
  }
  if (temperature < 0.0) throw Error(ErrorKind::kUsage, "temperature must be non-negative");
  if (max_tokens < 1) throw Error(ErrorKind::kUsage, "max_tokens must be positive");
}

json ChatRequest::to_json() const {
  json msgs = json::array();
  for (const auto& m : messages) msgs.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  return {{"model", model_id}, {"messages", std::move(msgs)}, {"temperature", temperature}, {"max_tokens", max_tokens}};
}

namespace {

constexpr std::string_view kChatKind = "chat";

json response_to_json(const ChatResponse& r) {
  return {{"content", r.content},
          {"finish_reason", r.finish_reason},
          {"usage",
           {{"prompt_tokens", r.usage.prompt_tokens},
            {"completion_tokens", r.usage.completion_tokens},
            {"total_tokens", r.usage.total_tokens}}}};
}

ChatResponse response_from_cache(const json& j) {
  ChatResponse r;
  r.content = j.at("content").get<std::string>();
  r.finish_reason = j.value("finish_reason", "");
  if (const auto it = j.find("usage"); it != j.end()) {
    r.usage.prompt_tokens = it->value("prompt_tokens", 0);
    r.usage.completion_tokens = it->value("completion_tokens", 0);
    r.usage.total_tokens = it->value("total_tokens", 0);
  }
  return r;
}

ChatResponse response_from_wire(const json& j) {
  try {
    const auto& choice = j.at("choices").at(0);
    ChatResponse r;
    const auto& content = choice.at("message").at("content");
    r.content = content.is_null() ? std::string() : content.get<std::string>();
    const auto& reason = choice.value("finish_reason", json());
    r.finish_reason = reason.is_string() ? reason.get<std::string>() : std::string();
    if (const auto it = j.find("usage"); it != j.end() && it->is_object()) {
      r.usage.prompt_tokens = it->value("prompt_tokens", 0);
      r.usage.completion_tokens = it->value("completion_tokens", 0);
      r.usage.total_tokens = it->value("total_tokens", 0);
    }
    return r;
  } catch (const json::exception& e) {
    throw ProviderError(200, std::string("malformed chat response: ") + e.what());
  }
}

}  // namespace

ChatClient::ChatClient(std::shared_ptr<HttpTransport> transport, std::shared_ptr<ResponseCache> cache)
    : transport_(std::move(transport)), cache_(std::move(cache)) {
  if (!cache_) cache_ = std::make_shared<ResponseCache>();
}

ChatResponse ChatClient::chat(const ChatRequest& request) {
  request.validate();
  const json payload = request.to_json();
  const std::string key = ResponseCache::make_key(kChatKind, request.model_id, payload);
  if (auto hit = cache_->get(key)) return response_from_cache(*hit);

  if (!transport_) throw AuthError("no provider configured and response is not cached");
  ChatResponse r = response_from_wire(transport_->post_json("/chat/completions", payload));
  if (r.content.empty()) throw EmptyResponse();
  cache_->put(key, kChatKind, response_to_json(r));
  return r;
}

}  // namespace xclone::providers
