#include "xclone/ml/learner.hpp"

#include <fstream>

#include "xclone/errors.hpp"

namespace xclone::ml {

using nlohmann::json;

std::string LearnerSpec::describe() const {
  if (kind == LearnerKind::kSvm) return "svm(kernel=" + std::string(to_string(svm.kernel.type)) + ")";
  return "knn(k=" + std::to_string(k) + "," + std::string(to_string(backend)) + ")";
}

LearnerKind parse_learner_kind(std::string_view name) {
  if (name == "svm") return LearnerKind::kSvm;
  if (name == "knn") return LearnerKind::kKnn;
  throw Error(ErrorKind::kUsage, "unknown learner '" + std::string(name) + "'");
}

TrainedModel train_learner(const LearnerSpec& spec, std::span<const Vector> features, std::span<const int> labels) {
  if (spec.kind == LearnerKind::kSvm) return svm_train(features, labels, spec.svm);
  return KnnModel(std::vector<Vector>(features.begin(), features.end()),
                  std::vector<int>(labels.begin(), labels.end()), spec.k, spec.backend);
}

ModelOutput predict(const TrainedModel& model, ConstSpan feature) {
  if (const auto* svm = std::get_if<SvmModel>(&model)) {
    const auto p = svm_predict(*svm, feature);
    return {p.label, p.margin};
  }
  return {std::get<KnnModel>(model).predict(feature), std::nullopt};
}

namespace {

json kernel_to_json(const Kernel& k) {
  json j = {{"type", to_string(k.type)}, {"degree", k.degree}, {"coef0", k.coef0}};
  j["gamma"] = k.gamma ? json(*k.gamma) : json(nullptr);
  return j;
}

Kernel kernel_from_json(const json& j) {
  Kernel k;
  k.type = parse_kernel_type(j.at("type").get<std::string>());
  k.degree = j.at("degree").get<int>();
  k.coef0 = j.at("coef0").get<double>();
  if (!j.at("gamma").is_null()) k.gamma = j.at("gamma").get<double>();
  return k;
}

}  // namespace

json model_to_json(const TrainedModel& model) {
  if (const auto* svm = std::get_if<SvmModel>(&model)) {
    return {{"format", "xclone-model"},
            {"version", kModelFormatVersion},
            {"learner", "svm"},
            {"kernel", kernel_to_json(svm->kernel)},
            {"C", svm->C},
            {"tolerance", svm->tolerance},
            {"bias", svm->bias},
            {"alphas", svm->alphas},
            {"labels", svm->labels},
            {"support_vectors", svm->support_vectors}};
  }
  const auto& knn = std::get<KnnModel>(model);
  return {{"format", "xclone-model"},
          {"version", kModelFormatVersion},
          {"learner", "knn"},
          {"k", knn.k()},
          {"backend", to_string(knn.backend())},
          {"labels", knn.labels()},
          {"points", knn.points()}};
}

TrainedModel model_from_json(const json& j) {
  try {
    if (j.value("format", "") != "xclone-model") throw Error(ErrorKind::kValidation, "not an xclone model file");
    if (j.at("version").get<int>() != kModelFormatVersion) {
      throw Error(ErrorKind::kValidation, "unsupported model version " + j.at("version").dump());
    }
    const auto learner = j.at("learner").get<std::string>();
    if (learner == "svm") {
      SvmModel m;
      m.kernel = kernel_from_json(j.at("kernel"));
      m.C = j.at("C").get<double>();
      m.tolerance = j.at("tolerance").get<double>();
      m.bias = j.at("bias").get<double>();
      m.alphas = j.at("alphas").get<std::vector<double>>();
      m.labels = j.at("labels").get<std::vector<int>>();
      m.support_vectors = j.at("support_vectors").get<std::vector<Vector>>();
      if (m.alphas.size() != m.labels.size() || m.alphas.size() != m.support_vectors.size()) {
        throw Error(ErrorKind::kValidation, "SVM model arrays have inconsistent lengths");
      }
      return m;
    }
    if (learner == "knn") {
      return KnnModel(j.at("points").get<std::vector<Vector>>(), j.at("labels").get<std::vector<int>>(),
                      j.at("k").get<std::size_t>(), parse_knn_backend(j.at("backend").get<std::string>()));
    }
    throw Error(ErrorKind::kValidation, "unknown learner '" + learner + "' in model file");
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kValidation, std::string("bad model file: ") + e.what());
  }
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kData, "cannot write model file " + path.string());
  out << model_to_json(model).dump() << '\n';
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kValidation, "cannot open model file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kValidation, "model file is not valid JSON: " + path.string());
  }
  return model_from_json(j);
}

}  // namespace xclone::ml
