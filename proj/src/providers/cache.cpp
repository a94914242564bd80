#include "xclone/providers/cache.hpp"

#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <ctime>

#include "xclone/errors.hpp"

namespace xclone::providers {

using nlohmann::json;

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::kData, "SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0x0f]);
  }
  return out;
}

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

ResponseCache::ResponseCache(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.empty()) return;
  bool needs_newline = false;
  if (std::ifstream in(path_, std::ios::binary); in) {
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      try {
        json rec = json::parse(line);
        base_.insert_or_assign(rec.at("key").get<std::string>(), std::move(rec.at("payload")));
      } catch (const json::exception&) {
        ++skipped_lines_;
      }
    }
    in.clear();
    in.seekg(0, std::ios::end);
    if (in.tellg() > 0) {
      in.seekg(-1, std::ios::end);
      needs_newline = in.get() != '\n';
    }
  }
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  writer_.open(path_, std::ios::binary | std::ios::app);
  if (!writer_) throw Error(ErrorKind::kData, "cannot open cache file " + path_.string());
  // Keep the next record off the truncated line.
  if (needs_newline) writer_ << '\n';
}

std::string ResponseCache::make_key(std::string_view kind, std::string_view model_id, const json& payload) {
  std::string material;
  material.append(kind).push_back('\n');
  material.append(model_id).push_back('\n');
  // nlohmann orders object keys, so equal payloads dump identically.
  material.append(payload.dump());
  return sha256_hex(material);
}

std::optional<json> ResponseCache::get(const std::string& key) const {
  {
    std::lock_guard lock(mu_);
    if (auto it = delta_.find(key); it != delta_.end()) return std::optional<json>(std::in_place, it->second);
  }
  if (auto it = base_.find(key); it != base_.end()) return std::optional<json>(std::in_place, it->second);
  return std::nullopt;
}

void ResponseCache::put(const std::string& key, std::string_view kind, const json& payload) {
  json rec = {{"key", key}, {"kind", kind}, {"payload", payload}, {"created_at", utc_timestamp()}};
  std::lock_guard lock(mu_);
  delta_.insert_or_assign(key, payload);
  if (writer_.is_open()) {
    writer_ << rec.dump() << '\n';
    writer_.flush();
  }
}

std::size_t ResponseCache::size() const {
  std::lock_guard lock(mu_);
  std::size_t n = base_.size();
  for (const auto& [key, _] : delta_) {
    if (!base_.count(key)) ++n;
  }
  return n;
}

void ResponseCache::flush() {
  std::lock_guard lock(mu_);
  if (writer_.is_open()) writer_.flush();
}

}  // namespace xclone::providers
