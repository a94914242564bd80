#include "xclone/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "xclone/errors.hpp"

namespace xclone::cli {

using nlohmann::json;

namespace {

class TomlLine {
 public:
  TomlLine(std::string_view text, std::size_t line_no) : s_(text), line_no_(line_no) {}

  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::kUsage, fmt::format("config line {}: {}", line_no_, why));
  }

  void skip_ws() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t')) ++i_;
  }
  bool at_end_or_comment() {
    skip_ws();
    return i_ >= s_.size() || s_[i_] == '#' || s_[i_] == '\r';
  }
  bool peek(char c) {
    skip_ws();
    return i_ < s_.size() && s_[i_] == c;
  }
  void expect(char c) {
    if (!peek(c)) fail(fmt::format("expected '{}'", c));
    ++i_;
  }

  std::string key() {
    skip_ws();
    const std::size_t b = i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_' || s_[i_] == '-')) {
      ++i_;
    }
    if (b == i_) fail("expected a key");
    return std::string(s_.substr(b, i_ - b));
  }

  json value() {
    skip_ws();
    if (i_ >= s_.size()) fail("missing value");
    const char c = s_[i_];
    if (c == '"') return basic_string();
    if (c == '\'') return literal_string();
    if (c == '[') return array();
    if (s_.substr(i_).starts_with("true")) {
      i_ += 4;
      return true;
    }
    if (s_.substr(i_).starts_with("false")) {
      i_ += 5;
      return false;
    }
    return number();
  }

 private:
  json basic_string() {
    ++i_;
    std::string out;
    while (i_ < s_.size() && s_[i_] != '"') {
      char c = s_[i_++];
      if (c == '\\') {
        if (i_ >= s_.size()) break;
        const char e = s_[i_++];
        switch (e) {
          case 'n':
            c = '\n';
            break;
          case 't':
            c = '\t';
            break;
          case '"':
          case '\\':
            c = e;
            break;
          default:
            fail(fmt::format("unsupported escape \\{}", e));
        }
      }
      out += c;
    }
    if (i_ >= s_.size()) fail("unterminated string");
    ++i_;
    return out;
  }

  json literal_string() {
    ++i_;
    const std::size_t b = i_;
    while (i_ < s_.size() && s_[i_] != '\'') ++i_;
    if (i_ >= s_.size()) fail("unterminated string");
    return std::string(s_.substr(b, i_++ - b));
  }

  json array() {
    ++i_;
    json out = json::array();
    if (peek(']')) {
      ++i_;
      return out;
    }
    for (;;) {
      out.push_back(value());
      if (peek(',')) {
        ++i_;
        if (peek(']')) break;  // trailing comma
        continue;
      }
      break;
    }
    expect(']');
    return out;
  }

  json number() {
    const std::size_t b = i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.' || s_[i_] == '-' ||
                              s_[i_] == '+' || s_[i_] == '_')) {
      ++i_;
    }
    std::string tok;
    for (char c : s_.substr(b, i_ - b)) {
      if (c != '_') tok += c;
    }
    if (tok.empty()) fail("expected a value");
    const bool integral = tok.find_first_of(".eE") == std::string::npos;
    const char* first = tok.data() + (tok[0] == '+' ? 1 : 0);
    const char* last = tok.data() + tok.size();
    if (integral) {
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || p != last) fail("bad value '" + tok + "'");
      return v;
    }
    double v = 0.0;
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || p != last || !std::isfinite(v)) fail("bad value '" + tok + "'");
    return v;
  }

  std::string_view s_;
  std::size_t i_ = 0;
  std::size_t line_no_;
};

std::string quote(const std::string& s) { return json(s).dump(); }

std::string fmt_double(double v) {
  std::string s = fmt::format("{}", v);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

// Typed readers that name the key on mismatch.
template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!it->is_number()) throw Error(ErrorKind::kUsage, "");
      out = it->get<double>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      out = it->get<std::string>();
    } else if constexpr (std::is_same_v<T, bool>) {
      out = it->get<bool>();
    } else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
      out = it->get<std::vector<std::string>>();
    } else {
      if (!it->is_number_integer() || it->get<std::int64_t>() < 0) throw Error(ErrorKind::kUsage, "");
      out = it->get<T>();
    }
  } catch (const std::exception&) {
    throw Error(ErrorKind::kUsage, fmt::format("config key {}{} has the wrong type", where, key));
  }
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> known, const std::string& where) {
  for (const auto& [k, _] : obj.items()) {
    if (std::find(known.begin(), known.end(), k) == known.end()) {
      throw Error(ErrorKind::kUsage, fmt::format("unknown config key {}{}", where, k));
    }
  }
}

}  // namespace

json parse_toml(std::string_view text) {
  json root = json::object();
  json* section = &root;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    TomlLine line(text.substr(pos, end - pos), ++line_no);
    pos = end + 1;
    if (line.at_end_or_comment()) {
      if (end == text.size()) break;
      continue;
    }
    if (line.peek('[')) {
      line.expect('[');
      const std::string name = line.key();
      line.expect(']');
      if (!line.at_end_or_comment()) line.fail("trailing characters after section header");
      if (root.contains(name)) line.fail("section [" + name + "] appears twice");
      root[name] = json::object();
      section = &root[name];
    } else {
      const std::string k = line.key();
      line.expect('=');
      json v = line.value();
      if (!line.at_end_or_comment()) line.fail("trailing characters after value");
      if (section->contains(k)) line.fail("key '" + k + "' set twice");
      (*section)[k] = std::move(v);
    }
    if (end == text.size()) break;
  }
  return root;
}

providers::ProviderSettings ProviderConfig::settings() const {
  providers::ProviderSettings s;
  s.base_url = base_url;
  s.credential_env = credential_env;
  s.max_in_flight = max_in_flight;
  s.retry.max_retries = max_retries;
  s.retry.initial_backoff = std::chrono::milliseconds(initial_backoff_ms);
  s.timeout = std::chrono::seconds(timeout_s);
  return s;
}

detectors::LlmOptions DetectorConfig::llm_options() const {
  detectors::LlmOptions o;
  o.kind = prompts::parse_prompt_kind(prompt);
  o.protocol.variant = prompts::parse_explanation_variant(explanation_variant);
  o.protocol.max_prompt_chars = max_prompt_chars;
  o.protocol.score_threshold = score_threshold;
  o.score_threshold = score_threshold;
  o.fallback = fallback_label;
  return o;
}

ml::LearnerSpec LearnerConfig::spec(std::uint64_t seed) const {
  ml::LearnerSpec s;
  s.kind = ml::parse_learner_kind(kind);
  s.svm.kernel.type = ml::parse_kernel_type(kernel);
  s.svm.kernel.degree = degree;
  s.svm.kernel.gamma = gamma;
  s.svm.kernel.coef0 = coef0;
  s.svm.C = C;
  s.svm.tolerance = tolerance;
  s.svm.max_passes = max_passes;
  s.svm.seed = seed;
  s.k = k;
  s.backend = ml::parse_knn_backend(backend);
  return s;
}

void RunConfig::apply(const json& file) {
  reject_unknown(file,
                 {"seed", "out_dir", "corpus_path", "benchmark_path", "cache_path", "provider", "pairing", "detector",
                  "learner", "eval", "keywords"},
                 "");
  read(file, "seed", seed, "");
  std::string s;
  if (file.contains("out_dir")) read(file, "out_dir", s, ""), out_dir = s;
  if (file.contains("corpus_path")) read(file, "corpus_path", s, ""), corpus_path = s;
  if (file.contains("benchmark_path")) read(file, "benchmark_path", s, ""), benchmark_path = s;
  if (file.contains("cache_path")) read(file, "cache_path", s, ""), cache_path = s;

  if (auto it = file.find("provider"); it != file.end()) {
    const auto& p = *it;
    const std::string w = "provider.";
    reject_unknown(p,
                   {"base_url", "embedding_model", "chat_model", "credential_env", "batch_size", "max_in_flight",
                    "max_retries", "initial_backoff_ms", "timeout_s"},
                   w);
    read(p, "base_url", provider.base_url, w);
    read(p, "embedding_model", provider.embedding_model, w);
    read(p, "chat_model", provider.chat_model, w);
    read(p, "credential_env", provider.credential_env, w);
    read(p, "batch_size", provider.batch_size, w);
    read(p, "max_in_flight", provider.max_in_flight, w);
    read(p, "max_retries", provider.max_retries, w);
    read(p, "initial_backoff_ms", provider.initial_backoff_ms, w);
    read(p, "timeout_s", provider.timeout_s, w);
  }
  if (auto it = file.find("pairing"); it != file.end()) {
    const auto& p = *it;
    const std::string w = "pairing.";
    reject_unknown(p,
                   {"anchor_language", "partner_languages", "pairs_per_label", "dbscan_eps", "dbscan_min_pts",
                    "max_partner_uses"},
                   w);
    read(p, "anchor_language", pairing.anchor_language, w);
    read(p, "partner_languages", pairing.partner_languages, w);
    read(p, "pairs_per_label", pairing.pairs_per_label, w);
    read(p, "dbscan_eps", pairing.dbscan_eps, w);
    read(p, "dbscan_min_pts", pairing.dbscan_min_pts, w);
    read(p, "max_partner_uses", pairing.max_partner_uses, w);
  }
  if (auto it = file.find("detector"); it != file.end()) {
    const auto& d = *it;
    const std::string w = "detector.";
    reject_unknown(d,
                   {"cosine_threshold", "score_threshold", "prompt", "fallback_label", "explanation_variant",
                    "max_prompt_chars", "temperature", "max_tokens"},
                   w);
    read(d, "cosine_threshold", detector.cosine_threshold, w);
    read(d, "score_threshold", detector.score_threshold, w);
    read(d, "prompt", detector.prompt, w);
    std::string fb;
    read(d, "fallback_label", fb, w);
    if (!fb.empty()) {
      try {
        detector.fallback_label = parse_label(fb);
      } catch (const Error& e) {
        throw Error(ErrorKind::kUsage, e.what());
      }
    }
    read(d, "explanation_variant", detector.explanation_variant, w);
    read(d, "max_prompt_chars", detector.max_prompt_chars, w);
    read(d, "temperature", detector.temperature, w);
    read(d, "max_tokens", detector.max_tokens, w);
  }
  if (auto it = file.find("learner"); it != file.end()) {
    const auto& l = *it;
    const std::string w = "learner.";
    reject_unknown(l, {"kind", "kernel", "degree", "gamma", "coef0", "C", "tolerance", "max_passes", "k", "backend"},
                   w);
    read(l, "kind", learner.kind, w);
    read(l, "kernel", learner.kernel, w);
    read(l, "degree", learner.degree, w);
    if (auto g = l.find("gamma"); g != l.end()) {
      if (g->is_string() && g->get<std::string>() == "scale") {
        learner.gamma.reset();
      } else {
        double v = 0.0;
        read(l, "gamma", v, w);
        learner.gamma = v;
      }
    }
    read(l, "coef0", learner.coef0, w);
    read(l, "C", learner.C, w);
    read(l, "tolerance", learner.tolerance, w);
    read(l, "max_passes", learner.max_passes, w);
    read(l, "k", learner.k, w);
    read(l, "backend", learner.backend, w);
  }
  if (auto it = file.find("eval"); it != file.end()) {
    reject_unknown(*it, {"folds"}, "eval.");
    read(*it, "folds", folds, "eval.");
  }
  // [keywords] maps a language to its decision tokens.
  if (auto it = file.find("keywords"); it != file.end()) {
    for (const auto& [lang, tokens] : it->items()) {
      std::vector<std::string> v;
      read(*it, lang.c_str(), v, "keywords.");
      keywords[lang] = {{"decision_tokens", v}};
    }
  }
}

void RunConfig::resolve() {
  if (benchmark_path.empty()) benchmark_path = out_dir / "benchmark.jsonl";
  if (cache_path.empty()) cache_path = out_dir / "cache.jsonl";
  pairing.seed = seed;
}

void RunConfig::validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorKind::kUsage, why); };
  if (out_dir.empty()) fail("out_dir must not be empty");
  if (provider.batch_size == 0) fail("provider.batch_size must be positive");
  if (provider.max_in_flight == 0) fail("provider.max_in_flight must be positive");
  if (provider.max_retries < 0) fail("provider.max_retries must be non-negative");
  if (!(detector.cosine_threshold >= -1.0 && detector.cosine_threshold <= 1.0)) {
    fail("detector.cosine_threshold must lie in [-1, 1]");
  }
  if (!(detector.score_threshold >= 0.0 && detector.score_threshold <= 10.0)) {
    fail("detector.score_threshold must lie in [0, 10]");
  }
  (void)detector.llm_options();
  (void)learner.spec(seed);
  if (folds < 2) fail("eval.folds must be at least 2");
}

std::string RunConfig::to_toml() const {
  std::ostringstream o;
  o << "seed = " << seed << "\n";
  o << "out_dir = " << quote(out_dir.string()) << "\n";
  o << "corpus_path = " << quote(corpus_path.string()) << "\n";
  o << "benchmark_path = " << quote(benchmark_path.string()) << "\n";
  o << "cache_path = " << quote(cache_path.string()) << "\n";
  o << "\n[provider]\n";
  o << "base_url = " << quote(provider.base_url) << "\n";
  o << "embedding_model = " << quote(provider.embedding_model) << "\n";
  o << "chat_model = " << quote(provider.chat_model) << "\n";
  o << "credential_env = " << quote(provider.credential_env) << "\n";
  o << "batch_size = " << provider.batch_size << "\n";
  o << "max_in_flight = " << provider.max_in_flight << "\n";
  o << "max_retries = " << provider.max_retries << "\n";
  o << "initial_backoff_ms = " << provider.initial_backoff_ms << "\n";
  o << "timeout_s = " << provider.timeout_s << "\n";
  o << "\n[pairing]\n";
  o << "anchor_language = " << quote(pairing.anchor_language) << "\n";
  o << "partner_languages = " << json(pairing.partner_languages).dump() << "\n";
  o << "pairs_per_label = " << pairing.pairs_per_label << "\n";
  o << "dbscan_eps = " << fmt_double(pairing.dbscan_eps) << "\n";
  o << "dbscan_min_pts = " << pairing.dbscan_min_pts << "\n";
  o << "max_partner_uses = " << pairing.max_partner_uses << "\n";
  o << "\n[detector]\n";
  o << "cosine_threshold = " << fmt_double(detector.cosine_threshold) << "\n";
  o << "score_threshold = " << fmt_double(detector.score_threshold) << "\n";
  o << "prompt = " << quote(detector.prompt) << "\n";
  o << "fallback_label = " << quote(std::string(to_string(detector.fallback_label))) << "\n";
  o << "explanation_variant = " << quote(detector.explanation_variant) << "\n";
  o << "max_prompt_chars = " << detector.max_prompt_chars << "\n";
  o << "temperature = " << fmt_double(detector.temperature) << "\n";
  o << "max_tokens = " << detector.max_tokens << "\n";
  o << "\n[learner]\n";
  o << "kind = " << quote(learner.kind) << "\n";
  o << "kernel = " << quote(learner.kernel) << "\n";
  o << "degree = " << learner.degree << "\n";
  o << "gamma = " << (learner.gamma ? fmt_double(*learner.gamma) : quote("scale")) << "\n";
  o << "coef0 = " << fmt_double(learner.coef0) << "\n";
  o << "C = " << fmt_double(learner.C) << "\n";
  o << "tolerance = " << fmt_double(learner.tolerance) << "\n";
  o << "max_passes = " << learner.max_passes << "\n";
  o << "k = " << learner.k << "\n";
  o << "backend = " << quote(learner.backend) << "\n";
  o << "\n[eval]\n";
  o << "folds = " << folds << "\n";
  if (!keywords.empty()) {
    o << "\n[keywords]\n";
    for (const auto& [lang, spec] : keywords.items()) o << lang << " = " << spec.at("decision_tokens").dump() << "\n";
  }
  return o.str();
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kUsage, "cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  RunConfig c;
  c.apply(parse_toml(buf.str()));
  return c;
}

}  // namespace xclone::cli
