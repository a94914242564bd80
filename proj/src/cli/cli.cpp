#include "xclone/cli/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "xclone/benchmark.hpp"
#include "xclone/cli/config.hpp"
#include "xclone/corpus.hpp"
#include "xclone/detectors.hpp"
#include "xclone/eval.hpp"
#include "xclone/pairing.hpp"
#include "xclone/providers/cache.hpp"
#include "xclone/providers/clients.hpp"
#include "xclone/testkit/mock_server.hpp"
#include "xclone/testkit/synthetic.hpp"

namespace xclone::cli {

using nlohmann::json;
namespace fs = std::filesystem;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kValidation:
      return kExitValidation;
    case ErrorKind::kData:
    case ErrorKind::kProvider:
      return kExitData;
    case ErrorKind::kUsage:
      return kExitUsage;
    case ErrorKind::kInterrupted:
      return kExitInterrupted;
  }
  return kExitData;
}

std::atomic<bool>& interrupt_flag() {
  static std::atomic<bool> flag{false};
  return flag;
}

namespace {

// Flag values; each is applied only when the flag was given.
struct Flags {
  std::uint64_t seed = 0;
  std::string config, out_dir, corpus, benchmark, cache, base_url;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* out_dir_opt = nullptr;
  CLI::Option* corpus_opt = nullptr;
  CLI::Option* benchmark_opt = nullptr;
  CLI::Option* cache_opt = nullptr;
  CLI::Option* base_url_opt = nullptr;

  // ingest / build-pairs
  std::string corpus_arg;
  std::size_t pairs_per_label = 0;
  std::string anchor;
  std::vector<std::string> partners;
  double eps = 0.0;
  std::size_t min_pts = 0, max_uses = 0;

  // detect
  std::string backend, prompt, model, output, fallback, variant;
  double threshold = 0.0;

  // train
  std::string learner, kernel, knn_backend;
  double C = 0.0, gamma = 0.0;
  int degree = 0;
  std::size_t k = 0;

  // evaluate / sweep
  std::string predictions, scores, grid;
  bool by_language = false;
  std::size_t cv = 0;

  // synth / mock-server
  std::size_t problems = 0, dim = 0, topic_size = 0;
  std::vector<std::string> languages;
  double sigma = 0.0, margin = 0.0, chaos = 0.0;
  std::string latents;
  int port = 8089;
  int latency_ms = 0;
};

bool given(const CLI::Option* o) { return o != nullptr && o->count() > 0; }

void require_file(const fs::path& p, const std::string& what) {
  if (p.empty()) throw Error(ErrorKind::kUsage, what + " path is not set");
  if (!fs::is_regular_file(p)) throw Error(ErrorKind::kValidation, what + " not found: " + p.string());
}

void prepare_out_dir(const RunConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  std::ofstream(cfg.out_dir / "resolved_config.toml", std::ios::binary) << cfg.to_toml();
}

void write_text(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error(ErrorKind::kData, "cannot write " + p.string());
  f << text;
}

struct Providers {
  std::shared_ptr<providers::HttpTransport> transport;
  std::shared_ptr<providers::ResponseCache> cache;
};

Providers make_providers(const RunConfig& cfg) {
  if (cfg.cache_path.has_parent_path()) fs::create_directories(cfg.cache_path.parent_path());
  Providers p;
  p.transport = std::make_shared<providers::HttpTransport>(cfg.provider.settings());
  p.cache = std::make_shared<providers::ResponseCache>(cfg.cache_path);
  return p;
}

providers::EmbeddingClient embedding_client(const RunConfig& cfg, const Providers& p) {
  return providers::EmbeddingClient(p.transport, p.cache, cfg.provider.embedding_model, cfg.provider.batch_size);
}

corpus::KeywordRegistry keyword_registry(const RunConfig& cfg) {
  auto reg = corpus::KeywordRegistry::with_defaults();
  if (!cfg.keywords.empty()) reg.apply_overrides(cfg.keywords);
  return reg;
}

fs::path corpus_input(const RunConfig& cfg, const Flags& f) {
  return f.corpus_arg.empty() ? cfg.corpus_path : fs::path(f.corpus_arg);
}

std::string describe_model(const ml::TrainedModel& m) {
  if (const auto* svm = std::get_if<ml::SvmModel>(&m)) {
    return "classifier(svm(kernel=" + std::string(ml::to_string(svm->kernel.type)) + "))";
  }
  const auto& knn = std::get<ml::KnnModel>(m);
  return "classifier(knn(k=" + std::to_string(knn.k()) + "," + std::string(ml::to_string(knn.backend())) + "))";
}

// ---- commands ----

int cmd_ingest(const RunConfig& cfg, const Flags& f, std::ostream& out) {
  const fs::path path = corpus_input(cfg, f);
  require_file(path, "corpus");
  const auto corpus = corpus::load_corpus(path, keyword_registry(cfg));
  prepare_out_dir(cfg);

  std::map<std::string, std::pair<std::size_t, std::size_t>> per_lang;  // samples, problems
  std::size_t samples = 0;
  constexpr int kEdges[] = {5, 10, 20, 50};
  std::size_t hist[5] = {};
  for (const auto& p : corpus) {
    std::set<std::string> langs;
    for (const auto& s : p.samples) {
      ++per_lang[s.language].first;
      langs.insert(s.language);
      ++samples;
    }
    for (const auto& l : langs) ++per_lang[l].second;
    const int c = corpus::problem_complexity(p);
    std::size_t b = 0;
    while (b < std::size(kEdges) && c > kEdges[b]) ++b;
    ++hist[b];
  }
  const char* bucket_names[] = {"1-5", "6-10", "11-20", "21-50", "51+"};

  json summary = {{"problems", corpus.size()}, {"samples", samples}};
  out << fmt::format("problems: {}\nsamples: {}\n\n", corpus.size(), samples);
  out << fmt::format("| {:<12} | {:>7} | {:>8} |\n|{:-<14}|{:->9}|{:->10}|\n", "language", "samples", "problems", "",
                     "", "");
  for (const auto& [lang, c] : per_lang) {
    out << fmt::format("| {:<12} | {:>7} | {:>8} |\n", lang, c.first, c.second);
    summary["languages"][lang] = {{"samples", c.first}, {"problems", c.second}};
  }
  out << fmt::format("\n| {:<10} | {:>8} |\n|{:-<12}|{:->10}|\n", "complexity", "problems", "", "");
  for (std::size_t b = 0; b < 5; ++b) {
    out << fmt::format("| {:<10} | {:>8} |\n", bucket_names[b], hist[b]);
    summary["complexity_histogram"][bucket_names[b]] = hist[b];
  }
  write_text(cfg.out_dir / "ingest_summary.json", summary.dump(2) + "\n");
  return kExitOk;
}

int cmd_build_pairs(RunConfig cfg, const Flags& f, std::ostream& out, std::ostream& err) {
  const fs::path path = corpus_input(cfg, f);
  require_file(path, "corpus");
  const auto corpus = corpus::load_corpus(path, keyword_registry(cfg));
  if (cfg.pairing.partner_languages.empty()) {
    std::set<std::string> langs;
    for (const auto& p : corpus) {
      for (const auto& s : p.samples) {
        if (s.language != cfg.pairing.anchor_language) langs.insert(s.language);
      }
    }
    cfg.pairing.partner_languages.assign(langs.begin(), langs.end());
  }
  cfg.pairing.validate();
  prepare_out_dir(cfg);

  auto prov = make_providers(cfg);
  auto client = embedding_client(cfg, prov);
  const auto vectors = pairing::embed_descriptions(corpus, client);
  const auto result = pairing::build_benchmark(corpus, vectors, cfg.pairing);
  write_benchmark(result.pairs, cfg.benchmark_path, cfg.seed);

  json clusters = json::array();
  for (const auto& c : result.clustering.clusters) {
    json ids = json::array();
    for (std::size_t i : c) ids.push_back(vectors.ids[i]);
    clusters.push_back(std::move(ids));
  }
  json noise = json::array();
  for (std::size_t i : result.clustering.noise) noise.push_back(vectors.ids[i]);
  std::map<std::string, std::map<std::string, std::size_t>> counts;
  json provenance = json::array();
  for (const auto& p : result.pairs) {
    ++counts[std::string(to_string(p.label))][p.partner_language()];
    provenance.push_back({{"pair_id", p.pair_id},
                          {"provenance", to_string(p.provenance)},
                          {"a", p.a.problem_id},
                          {"b", p.b.problem_id},
                          {"partner_language", p.partner_language()}});
  }
  const json log = {{"clusters", std::move(clusters)}, {"noise", std::move(noise)}, {"warnings", result.warnings},
                    {"counts", counts},                {"pairs", std::move(provenance)}};
  write_text(cfg.out_dir / "pairs_log.json", log.dump(2) + "\n");

  for (const auto& w : result.warnings) err << "warning: " << w << '\n';
  out << fmt::format("clusters: {}  noise: {}\n", result.clustering.clusters.size(), result.clustering.noise.size());
  for (const auto& [label, langs] : counts) {
    for (const auto& [lang, n] : langs) out << fmt::format("{:<10} {:<12} {}\n", label, lang, n);
  }
  out << fmt::format("wrote {} pairs to {}\n", result.pairs.size(), cfg.benchmark_path.string());
  return kExitOk;
}

int cmd_detect(RunConfig cfg, const Flags& f, std::ostream& out, std::ostream& err) {
  const auto backend = detectors::parse_backend_kind(f.backend);
  // Validate prompt settings before touching any input.
  const auto llm = cfg.detector.llm_options();
  require_file(cfg.benchmark_path, "benchmark");
  const fs::path model_path = f.model.empty() ? cfg.out_dir / "model.json" : fs::path(f.model);
  if (backend == detectors::BackendKind::kClassifier) require_file(model_path, "model");
  const auto pairs = read_benchmark(cfg.benchmark_path);
  prepare_out_dir(cfg);
  const fs::path output = f.output.empty() ? cfg.out_dir / "predictions.jsonl" : fs::path(f.output);

  auto prov = make_providers(cfg);
  std::vector<detectors::Prediction> preds;
  switch (backend) {
    case detectors::BackendKind::kCosine: {
      auto client = embedding_client(cfg, prov);
      preds = detectors::detect_cosine(pairs, detectors::embed_snippets(pairs, client), cfg.detector.cosine_threshold);
      break;
    }
    case detectors::BackendKind::kClassifier: {
      const auto model = ml::load_model(model_path);
      auto client = embedding_client(cfg, prov);
      preds = detectors::detect_classifier(pairs, detectors::embed_snippets(pairs, client), model,
                                           describe_model(model));
      break;
    }
    case detectors::BackendKind::kLlm: {
      providers::ChatClient chat(prov.transport, prov.cache);
      const auto fn = detectors::make_chat_fn(chat, cfg.provider.chat_model, cfg.detector.temperature,
                                              cfg.detector.max_tokens);
      preds = detectors::detect_llm(pairs, fn, llm, cfg.provider.max_in_flight, &interrupt_flag());
      break;
    }
  }
  if (output.has_parent_path()) fs::create_directories(output.parent_path());
  detectors::write_predictions(preds, output);

  std::size_t clones = 0, undecided = 0;
  for (const auto& p : preds) {
    clones += p.predicted == Label::kClone;
    undecided += p.undecided;
  }
  if (undecided > 0) err << fmt::format("warning: {} undecided pairs mapped to the fallback label\n", undecided);
  out << fmt::format("{} predictions ({} clone, {} undecided) written to {}\n", preds.size(), clones, undecided,
                     output.string());
  return kExitOk;
}

int cmd_train(const RunConfig& cfg, const Flags& f, std::ostream& out) {
  const auto spec = cfg.learner.spec(cfg.seed);
  require_file(cfg.benchmark_path, "benchmark");
  const auto pairs = read_benchmark(cfg.benchmark_path);
  prepare_out_dir(cfg);
  auto prov = make_providers(cfg);
  auto client = embedding_client(cfg, prov);
  const auto emb = detectors::embed_snippets(pairs, client);
  std::vector<ml::Vector> xs;
  std::vector<int> ys;
  for (const auto& p : pairs) {
    xs.push_back(detectors::pair_features(p, emb));
    ys.push_back(to_sign(p.label));
  }
  const auto model = ml::train_learner(spec, xs, ys);
  const fs::path path = f.model.empty() ? cfg.out_dir / "model.json" : fs::path(f.model);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  ml::save_model(model, path);
  std::string detail;
  if (const auto* svm = std::get_if<ml::SvmModel>(&model)) {
    detail = fmt::format(", {} support vectors", svm->support_vectors.size());
  }
  out << fmt::format("trained {} on {} pairs{}; model written to {}\n", spec.describe(), pairs.size(), detail,
                     path.string());
  return kExitOk;
}

void emit_report(const RunConfig& cfg, const eval::EvalReport& report, const eval::EvalReport& decided,
                 const std::vector<detectors::Prediction>& preds, const Benchmark& pairs, bool by_language,
                 std::ostream& out) {
  const json j = {{"report", eval::report_to_json(report)}, {"decided_only", eval::report_to_json(decided)}};
  write_text(cfg.out_dir / "report.json", j.dump(2) + "\n");

  std::string md = eval::markdown_class_table({report});
  md += fmt::format("\nundecided: {} of {} ({:.2f})\n", report.undecided, report.n, report.undecided_rate);
  if (report.undecided > 0) {
    md += "\nDecided pairs only:\n\n" + eval::markdown_class_table({decided});
  }
  if (by_language) md += "\n" + eval::markdown_language_table({report});
  write_text(cfg.out_dir / "report.md", md);

  std::ostringstream csv;
  eval::write_predictions_csv(preds, pairs, csv);
  write_text(cfg.out_dir / "predictions.csv", csv.str());
  out << md;
}

int cmd_evaluate(const RunConfig& cfg, const Flags& f, const CLI::Option* cv_opt, std::ostream& out) {
  require_file(cfg.benchmark_path, "benchmark");
  if (given(cv_opt)) {
    const auto spec = cfg.learner.spec(cfg.seed);
    const auto pairs = read_benchmark(cfg.benchmark_path);
    prepare_out_dir(cfg);
    auto prov = make_providers(cfg);
    auto client = embedding_client(cfg, prov);
    const auto emb = detectors::embed_snippets(pairs, client);
    const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    const auto cv = eval::cross_validate(pairs, emb, spec, f.cv, cfg.seed, workers);
    detectors::write_predictions(cv.predictions, cfg.out_dir / "cv_predictions.jsonl");
    emit_report(cfg, cv.report, cv.report, cv.predictions, pairs, f.by_language, out);
    return kExitOk;
  }
  const fs::path pred_path = f.predictions.empty() ? cfg.out_dir / "predictions.jsonl" : fs::path(f.predictions);
  require_file(pred_path, "predictions");
  const auto pairs = read_benchmark(cfg.benchmark_path);
  const auto preds = detectors::read_predictions(pred_path);
  const auto report = eval::compute_metrics(preds, pairs);
  const auto decided = eval::compute_decided_metrics(preds, pairs);
  prepare_out_dir(cfg);
  emit_report(cfg, report, decided, preds, pairs, f.by_language, out);
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, const Flags& f, std::ostream& out) {
  const auto grid = eval::parse_grid(f.grid);
  require_file(f.scores, "scores");
  require_file(cfg.benchmark_path, "benchmark");
  const auto pairs = read_benchmark(cfg.benchmark_path);
  std::vector<std::pair<std::string, double>> scores;
  for (const auto& p : detectors::read_predictions(fs::path(f.scores))) {
    if (!p.raw_score) throw Error(ErrorKind::kValidation, "prediction '" + p.pair_id + "' carries no raw_score");
    scores.emplace_back(p.pair_id, *p.raw_score);
  }
  const auto sweep = eval::sweep_threshold(scores, pairs, grid);
  prepare_out_dir(cfg);
  write_text(cfg.out_dir / "sweep.json", eval::sweep_to_json(sweep).dump(2) + "\n");
  const std::string md = eval::markdown_sweep_table(sweep);
  write_text(cfg.out_dir / "sweep.md", md);
  out << md;
  out << fmt::format("best threshold: {:g} (macro F1 {:.2f})\n", sweep.rows[sweep.best].theta,
                     sweep.rows[sweep.best].report.overall.macro.f1);
  return kExitOk;
}

int cmd_synth(const RunConfig& cfg, const Flags& f, const CLI::App& sub, std::ostream& out) {
  testkit::SyntheticSpec spec;
  spec.seed = cfg.seed;
  if (sub.count("--problems")) spec.n_problems = f.problems;
  if (sub.count("--languages")) spec.languages = f.languages;
  if (sub.count("--dim")) spec.dim = f.dim;
  if (sub.count("--sigma")) spec.noise_sigma = f.sigma;
  spec.margin = std::max(spec.margin, 4.0 * spec.noise_sigma);
  if (sub.count("--margin")) spec.margin = f.margin;
  if (sub.count("--topic-size")) spec.topic_size = f.topic_size;
  const auto syn = testkit::generate_corpus(spec);
  prepare_out_dir(cfg);
  const fs::path corpus_path = cfg.corpus_path.empty() ? cfg.out_dir / "corpus.jsonl" : cfg.corpus_path;
  const fs::path latents_path = f.latents.empty() ? cfg.out_dir / "latents.json" : fs::path(f.latents);
  if (corpus_path.has_parent_path()) fs::create_directories(corpus_path.parent_path());
  corpus::save_corpus(syn.corpus, corpus_path);
  testkit::save_registry(syn.registry, latents_path);
  out << fmt::format("wrote {} problems to {} and latents to {}\n", syn.corpus.size(), corpus_path.string(),
                     latents_path.string());
  return kExitOk;
}

int cmd_mock_server(const RunConfig& cfg, const Flags& f, std::ostream& out) {
  require_file(f.latents, "latents");
  testkit::MockServerOptions opt;
  opt.registry = testkit::load_registry(f.latents);
  if (const char* key = std::getenv(cfg.provider.credential_env.c_str())) opt.expected_key = key;
  opt.chat.chaos_rate = f.chaos;
  opt.chat.chaos_seed = cfg.seed;
  opt.latency = std::chrono::milliseconds(f.latency_ms);
  testkit::MockServer server(std::move(opt));
  std::atomic<bool> done{false};
  std::jthread watcher([&] {
    while (!done.load() && !interrupt_flag().load()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
  });
  out << fmt::format("serving on http://127.0.0.1:{}/v1 (Ctrl-C to stop)\n", f.port) << std::flush;
  try {
    server.run_on(f.port);
  } catch (...) {
    done = true;
    throw;
  }
  done = true;
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cross-lingual code clone detection toolkit", "xclone"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  f.seed_opt = app.add_option("--seed", f.seed, "Random seed (default 42)");
  app.add_option("--config", f.config, "TOML config file; flags override it");
  f.out_dir_opt = app.add_option("--out-dir", f.out_dir, "Output directory");
  f.corpus_opt = app.add_option("--corpus", f.corpus, "Corpus JSONL path");
  f.benchmark_opt = app.add_option("--benchmark", f.benchmark, "Benchmark JSONL path");
  f.cache_opt = app.add_option("--cache", f.cache, "Provider response cache path");
  f.base_url_opt = app.add_option("--base-url", f.base_url, "Provider base URL");

  auto* ingest = app.add_subcommand("ingest", "Validate and summarize a corpus");
  ingest->add_option("corpus", f.corpus_arg, "Corpus JSONL");

  auto* build = app.add_subcommand("build-pairs", "Construct a balanced clone/non-clone benchmark");
  build->add_option("corpus", f.corpus_arg, "Corpus JSONL");
  auto* ppl_opt = build->add_option("--pairs-per-label", f.pairs_per_label, "Pairs per label");
  auto* anchor_opt = build->add_option("--anchor", f.anchor, "Anchor language");
  auto* partners_opt = build->add_option("--partners", f.partners, "Partner languages")->delimiter(',');
  auto* eps_opt = build->add_option("--eps", f.eps, "DBSCAN eps (cosine distance)");
  auto* minpts_opt = build->add_option("--min-pts", f.min_pts, "DBSCAN min points");
  auto* uses_opt = build->add_option("--max-partner-uses", f.max_uses, "Cap on partner reuse");

  auto* detect = app.add_subcommand("detect", "Predict clone labels for a benchmark");
  detect->add_option("--backend", f.backend, "llm | cosine | classifier")->required();
  auto* prompt_opt = detect->add_option("--prompt", f.prompt, "Prompt kind for the llm backend");
  auto* threshold_opt = detect->add_option("--threshold", f.threshold, "Cosine or score threshold");
  detect->add_option("--model", f.model, "Trained model (default <out-dir>/model.json)");
  detect->add_option("--output", f.output, "Predictions JSONL (default <out-dir>/predictions.jsonl)");
  auto* fallback_opt = detect->add_option("--fallback", f.fallback, "Label for undecided answers");
  auto* variant_opt = detect->add_option("--explanation", f.variant, "separate_explanation analysis variant");

  auto* train = app.add_subcommand("train", "Train a classifier on benchmark embeddings");
  auto* learner_opt = train->add_option("--learner", f.learner, "svm | knn");
  auto* kernel_opt = train->add_option("--kernel", f.kernel, "linear | poly | rbf");
  auto* c_opt = train->add_option("--C", f.C, "SVM box constraint");
  auto* degree_opt = train->add_option("--degree", f.degree, "Polynomial degree");
  auto* gamma_opt = train->add_option("--gamma", f.gamma, "Kernel gamma (default 1/(dim*var))");
  auto* k_opt = train->add_option("--k", f.k, "Neighbours for knn");
  auto* knn_backend_opt = train->add_option("--knn-backend", f.knn_backend, "brute | kd_tree");
  train->add_option("--model", f.model, "Output path (default <out-dir>/model.json)");

  auto* evaluate = app.add_subcommand("evaluate", "Score predictions or cross-validate a learner");
  evaluate->add_option("--predictions", f.predictions, "Predictions JSONL");
  evaluate->add_flag("--by-language", f.by_language, "Add the per-language table");
  auto* cv_opt = evaluate->add_option("--cv", f.cv, "Cross-validate the configured learner with k folds");
  auto* eval_learner_opt = evaluate->add_option("--learner", f.learner, "svm | knn (with --cv)");
  auto* eval_kernel_opt = evaluate->add_option("--kernel", f.kernel, "Kernel (with --cv)");

  auto* sweep = app.add_subcommand("sweep", "Threshold sweep over recorded scores");
  sweep->add_option("--scores", f.scores, "Predictions JSONL with raw scores")->required();
  sweep->add_option("--grid", f.grid, "a:b:step")->required();

  auto* synth = app.add_subcommand("synth", "Write a synthetic corpus and its latent vectors");
  synth->add_option("--problems", f.problems, "Number of problems");
  synth->add_option("--languages", f.languages, "Languages, anchor first")->delimiter(',');
  synth->add_option("--dim", f.dim, "Embedding dimension");
  synth->add_option("--sigma", f.sigma, "Embedder noise scale");
  synth->add_option("--margin", f.margin, "Minimum latent cosine distance");
  synth->add_option("--topic-size", f.topic_size, "Problems per description topic");
  synth->add_option("--latents", f.latents, "Latents output path");

  auto* mock = app.add_subcommand("mock-server", "Serve the offline mock provider");
  mock->add_option("--latents", f.latents, "Latents file written by synth")->required();
  mock->add_option("--port", f.port, "Port");
  mock->add_option("--chaos", f.chaos, "Share of undecidable chat answers");
  mock->add_option("--latency-ms", f.latency_ms, "Artificial per-request latency");

  std::vector<const char*> argv = {"xclone"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    RunConfig cfg = f.config.empty() ? RunConfig{} : load_config(f.config);
    if (given(f.seed_opt)) cfg.seed = f.seed;
    if (given(f.out_dir_opt)) cfg.out_dir = f.out_dir;
    if (given(f.corpus_opt)) cfg.corpus_path = f.corpus;
    if (given(f.benchmark_opt)) cfg.benchmark_path = f.benchmark;
    if (given(f.cache_opt)) cfg.cache_path = f.cache;
    if (given(f.base_url_opt)) cfg.provider.base_url = f.base_url;
    if (given(ppl_opt)) cfg.pairing.pairs_per_label = f.pairs_per_label;
    if (given(anchor_opt)) cfg.pairing.anchor_language = f.anchor;
    if (given(partners_opt)) cfg.pairing.partner_languages = f.partners;
    if (given(eps_opt)) cfg.pairing.dbscan_eps = f.eps;
    if (given(minpts_opt)) cfg.pairing.dbscan_min_pts = f.min_pts;
    if (given(uses_opt)) cfg.pairing.max_partner_uses = f.max_uses;
    if (given(prompt_opt)) cfg.detector.prompt = f.prompt;
    if (given(threshold_opt)) {
      if (f.backend == "llm") {
        cfg.detector.score_threshold = f.threshold;
      } else {
        cfg.detector.cosine_threshold = f.threshold;
      }
    }
    if (given(fallback_opt)) {
      try {
        cfg.detector.fallback_label = parse_label(f.fallback);
      } catch (const Error& e) {
        throw Error(ErrorKind::kUsage, e.what());
      }
    }
    if (given(variant_opt)) cfg.detector.explanation_variant = f.variant;
    if (given(learner_opt) || given(eval_learner_opt)) cfg.learner.kind = f.learner;
    if (given(kernel_opt) || given(eval_kernel_opt)) cfg.learner.kernel = f.kernel;
    if (given(c_opt)) cfg.learner.C = f.C;
    if (given(degree_opt)) cfg.learner.degree = f.degree;
    if (given(gamma_opt)) cfg.learner.gamma = f.gamma;
    if (given(k_opt)) cfg.learner.k = f.k;
    if (given(knn_backend_opt)) cfg.learner.backend = f.knn_backend;
    if (given(cv_opt)) cfg.folds = f.cv;
    cfg.resolve();
    cfg.validate();

    if (*ingest) return cmd_ingest(cfg, f, out);
    if (*build) return cmd_build_pairs(cfg, f, out, err);
    if (*detect) return cmd_detect(cfg, f, out, err);
    if (*train) return cmd_train(cfg, f, out);
    if (*evaluate) return cmd_evaluate(cfg, f, cv_opt, out);
    if (*sweep) return cmd_sweep(cfg, f, out);
    if (*synth) return cmd_synth(cfg, f, *synth, out);
    if (*mock) return cmd_mock_server(cfg, f, out);
    return kExitUsage;
  } catch (const MalformedRecord& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace xclone::cli
