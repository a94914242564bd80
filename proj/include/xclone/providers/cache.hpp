#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace xclone::providers {

// Append-only JSONL store of provider responses keyed by a digest of the
// request content. One line per entry:
//   {"key": hex, "kind": "embed"|"chat", "payload": {...}, "created_at": iso8601}
// A truncated final line (crash mid-write) is ignored on load; when a key
// occurs more than once the last line wins.
class ResponseCache {
 public:
  // An empty path gives a purely in-memory cache.
  explicit ResponseCache(std::filesystem::path path = {});

  ResponseCache(const ResponseCache&) = delete;
  ResponseCache& operator=(const ResponseCache&) = delete;

  // SHA-256 over kind, model id and the canonical dump of the payload.
  static std::string make_key(std::string_view kind, std::string_view model_id, const nlohmann::json& payload);

  std::optional<nlohmann::json> get(const std::string& key) const;
  void put(const std::string& key, std::string_view kind, const nlohmann::json& payload);

  std::size_t size() const;
  std::size_t skipped_lines() const { return skipped_lines_; }
  void flush();
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  // Loaded once at construction and never mutated afterwards.
  std::unordered_map<std::string, nlohmann::json> base_;
  std::size_t skipped_lines_ = 0;

  mutable std::mutex mu_;
  std::unordered_map<std::string, nlohmann::json> delta_;
  std::ofstream writer_;
};

std::string sha256_hex(std::string_view data);

}  // namespace xclone::providers
