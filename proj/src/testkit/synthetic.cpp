#include "xclone/testkit/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "xclone/errors.hpp"

namespace xclone::testkit {

using nlohmann::json;

namespace {

// Placeholders: $M marker, $N modulus, $K multiplier.
struct CodeTemplate {
  std::string_view language;
  std::string_view head;
  std::string_view branch;
  std::string_view tail;
};

constexpr CodeTemplate kTemplates[] = {
    {"java",
     "// solution $M\npublic class Main {\n    static long solve(int n) {\n        long acc = 0;\n"
     "        for (int i = 0; i < n; i++) {\n",
     "            if (i % $N == 0) acc += i * $K;\n",
     "        }\n        return acc;\n    }\n}\n"},
    {"c", "/* solution $M */\nlong solve(int n) {\n    long acc = 0;\n    for (int i = 0; i < n; i++) {\n",
     "        if (i % $N == 0) acc += i * $K;\n", "    }\n    return acc;\n}\n"},
    {"cpp",
     "// solution $M\n#include <cstdint>\nint64_t solve(int n) {\n    int64_t acc = 0;\n"
     "    for (int i = 0; i < n; ++i) {\n",
     "        if (i % $N == 0) acc += i * $K;\n", "    }\n    return acc;\n}\n"},
    {"csharp",
     "// solution $M\nstatic class Solver {\n    public static long Solve(int n) {\n        long acc = 0;\n"
     "        for (int i = 0; i < n; i++) {\n",
     "            if (i % $N == 0) acc += i * $K;\n", "        }\n        return acc;\n    }\n}\n"},
    {"javascript", "// solution $M\nfunction solve(n) {\n  let acc = 0;\n  for (let i = 0; i < n; i++) {\n",
     "    if (i % $N === 0) acc += i * $K;\n", "  }\n  return acc;\n}\n"},
    {"go", "// solution $M\nfunc solve(n int) int {\n\tacc := 0\n\tfor i := 0; i < n; i++ {\n",
     "\t\tif i%$N == 0 {\n\t\t\tacc += i * $K\n\t\t}\n", "\t}\n\treturn acc\n}\n"},
    {"rust", "// solution $M\nfn solve(n: i64) -> i64 {\n    let mut acc = 0;\n    for i in 0..n {\n",
     "        if i % $N == 0 {\n            acc += i * $K;\n        }\n", "    }\n    acc\n}\n"},
    {"python", "# solution $M\ndef solve(n):\n    acc = 0\n    for i in range(n):\n",
     "        if i % $N == 0:\n            acc += i * $K\n", "    return acc\n"},
    {"ruby", "# solution $M\ndef solve(n)\n  acc = 0\n  (0...n).each do |i|\n", "    acc += i * $K if i % $N == 0\n",
     "  end\n  acc\nend\n"},
};

const CodeTemplate* find_template(std::string_view language) {
  for (const auto& t : kTemplates) {
    if (t.language == language) return &t;
  }
  return nullptr;
}

std::string fill(std::string_view tpl, const std::string& marker, int modulus, int mult) {
  std::string out;
  for (std::size_t i = 0; i < tpl.size(); ++i) {
    if (tpl[i] == '$' && i + 1 < tpl.size()) {
      const char c = tpl[i + 1];
      if (c == 'M' || c == 'N' || c == 'K') {
        out += c == 'M' ? marker : std::to_string(c == 'N' ? modulus : mult);
        ++i;
        continue;
      }
    }
    out += tpl[i];
  }
  return out;
}

ml::Vector gaussian(std::size_t dim, std::mt19937_64& rng, double sd) {
  std::normal_distribution<double> nd(0.0, sd);
  ml::Vector v(dim);
  for (auto& x : v) x = nd(rng);
  return v;
}

void normalize(ml::Vector& v) {
  const double n = ml::norm(v);
  for (auto& x : v) x /= n;
}

ml::Vector random_unit(std::size_t dim, std::mt19937_64& rng) {
  for (;;) {
    auto v = gaussian(dim, rng, 1.0);
    if (ml::norm(v) > 1e-12) {
      normalize(v);
      return v;
    }
  }
}

std::string numbered(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%04zu", prefix, i);
  return buf;
}

constexpr std::string_view kTasks[] = {"sum", "count", "weighted total", "checksum", "running score"};
constexpr std::string_view kSubjects[] = {"integers", "indices", "positions", "steps", "values"};

}  // namespace

void SyntheticSpec::validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorKind::kUsage, "synthetic spec: " + why); };
  if (n_problems == 0) fail("n_problems must be positive");
  if (languages.size() < 2) fail("need an anchor and at least one partner language");
  for (const auto& l : languages) {
    if (find_template(l) == nullptr) fail("no code template for language '" + l + "'");
  }
  if (dim < 2) fail("dim must be at least 2");
  if (!(noise_sigma >= 0.0)) fail("noise_sigma must be non-negative");
  if (!(margin > 2.0 * noise_sigma)) fail("margin must exceed 2 * noise_sigma");
  if (margin >= 2.0) fail("margin must be below 2");
  if (topic_size == 0) fail("topic_size must be positive");
  if (!(description_spread >= 0.0)) fail("description_spread must be non-negative");
}

std::string code_marker(std::size_t i) { return numbered("xclone_p", i); }
std::string description_marker(std::size_t i) { return numbered("xclone_d", i); }

const std::vector<std::string>& synthetic_languages() {
  static const std::vector<std::string> langs = [] {
    std::vector<std::string> v;
    for (const auto& t : kTemplates) v.emplace_back(t.language);
    return v;
  }();
  return langs;
}

SyntheticCorpus generate_corpus(const SyntheticSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  SyntheticCorpus out;
  out.registry.noise_sigma = spec.noise_sigma;
  out.registry.seed = spec.seed;

  // Code latents, rejection-sampled to keep every pair at least `margin` apart.
  std::vector<ml::Vector> code;
  std::size_t attempts = 0;
  while (code.size() < spec.n_problems) {
    if (++attempts > spec.max_attempts) {
      throw RejectionOverflow("could only place " + std::to_string(code.size()) + " of " +
                              std::to_string(spec.n_problems) + " latents with margin " +
                              std::to_string(spec.margin) + " in dim " + std::to_string(spec.dim));
    }
    auto v = random_unit(spec.dim, rng);
    bool ok = true;
    for (const auto& u : code) {
      if (1.0 - ml::dot(u, v) < spec.margin) {
        ok = false;
        break;
      }
    }
    if (ok) code.push_back(std::move(v));
  }

  const std::size_t n_topics = (spec.n_problems + spec.topic_size - 1) / spec.topic_size;
  std::vector<ml::Vector> topics;
  for (std::size_t t = 0; t < n_topics; ++t) topics.push_back(random_unit(spec.dim, rng));

  const auto registry = corpus::KeywordRegistry::with_defaults();
  std::uniform_int_distribution<int> modulus(2, 9);
  std::uniform_int_distribution<int> mult(1, 7);
  std::uniform_int_distribution<int> branches(1, 4);
  for (std::size_t i = 0; i < spec.n_problems; ++i) {
    const std::string cm = code_marker(i);
    const std::string dm = description_marker(i);
    const std::size_t topic = i / spec.topic_size;

    auto d = topics[topic];
    const auto jitter = gaussian(spec.dim, rng, spec.description_spread / std::sqrt(static_cast<double>(spec.dim)));
    for (std::size_t c = 0; c < spec.dim; ++c) d[c] += jitter[c];
    normalize(d);
    out.registry.latents[cm] = code[i];
    out.registry.latents[dm] = std::move(d);

    corpus::Problem p;
    p.problem_id = numbered("p", i);
    p.description = "Problem " + dm + ": given n, compute the " + std::string(kTasks[topic % std::size(kTasks)]) +
                    " over the " + std::string(kSubjects[(topic / std::size(kTasks)) % std::size(kSubjects)]) +
                    " below n (topic " + std::to_string(topic) + ").";
    for (const auto& lang : spec.languages) {
      const auto& t = *find_template(lang);
      std::string src = fill(t.head, cm, 0, 0);
      const int nb = branches(rng);
      for (int b = 0; b < nb; ++b) src += fill(t.branch, cm, modulus(rng), mult(rng));
      src += fill(t.tail, cm, 0, 0);
      corpus::CodeSample s;
      s.problem_id = p.problem_id;
      s.language = lang;
      s.source = std::move(src);
      s.complexity = corpus::compute_complexity(s.source, registry.at(lang));
      p.samples.push_back(std::move(s));
    }
    out.corpus.push_back(std::move(p));
  }
  return out;
}

std::uint64_t fnv1a(std::string_view text, std::uint64_t seed) {
  std::uint64_t h = 14695981039346656037ull ^ seed;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<std::string> find_markers(std::string_view text) {
  std::vector<std::string> out;
  constexpr std::string_view kPrefix = "xclone_";
  for (std::size_t pos = text.find(kPrefix); pos != std::string_view::npos; pos = text.find(kPrefix, pos + 1)) {
    std::size_t end = pos + kPrefix.size();
    if (end >= text.size() || (text[end] != 'p' && text[end] != 'd')) continue;
    ++end;
    const std::size_t digits = end;
    while (end < text.size() && text[end] >= '0' && text[end] <= '9') ++end;
    if (end > digits) out.emplace_back(text.substr(pos, end - pos));
  }
  return out;
}

MockEmbedder::MockEmbedder(LatentRegistry registry) : registry_(std::move(registry)), dim_(registry_.dim()) {
  if (dim_ == 0) throw Error(ErrorKind::kUsage, "mock embedder needs a non-empty latent registry");
}

ml::Vector MockEmbedder::embed(std::string_view text) const {
  std::mt19937_64 rng(fnv1a(text, registry_.seed));
  for (const auto& m : find_markers(text)) {
    auto it = registry_.latents.find(m);
    if (it == registry_.latents.end()) continue;
    auto v = it->second;
    const auto noise = gaussian(dim_, rng, registry_.noise_sigma / std::sqrt(static_cast<double>(dim_)));
    for (std::size_t c = 0; c < dim_; ++c) v[c] += noise[c];
    return v;
  }
  return random_unit(dim_, rng);
}

json registry_to_json(const LatentRegistry& r) {
  return {{"format", "xclone-latents"}, {"noise_sigma", r.noise_sigma}, {"seed", r.seed}, {"latents", r.latents}};
}

LatentRegistry registry_from_json(const json& j) {
  LatentRegistry r;
  try {
    if (j.value("format", std::string()) != "xclone-latents") throw Error(ErrorKind::kValidation, "not a latents file");
    r.noise_sigma = j.at("noise_sigma").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.latents = j.at("latents").get<std::map<std::string, ml::Vector>>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kValidation, std::string("bad latents file: ") + e.what());
  }
  return r;
}

void save_registry(const LatentRegistry& r, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kData, "cannot write " + path.string());
  out << registry_to_json(r).dump() << '\n';
}

LatentRegistry load_registry(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kValidation, "cannot open " + path.string());
  try {
    return registry_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kValidation, std::string("bad latents file: ") + e.what());
  }
}

}  // namespace xclone::testkit
