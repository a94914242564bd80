#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "xclone/ml/knn.hpp"
#include "xclone/ml/svm.hpp"

namespace xclone::ml {

enum class LearnerKind { kSvm, kKnn };

struct LearnerSpec {
  LearnerKind kind = LearnerKind::kSvm;
  SvmParams svm;
  std::size_t k = 5;
  KnnBackend backend = KnnBackend::kKdTree;

  // e.g. "svm(kernel=poly)" or "knn(k=5,kd_tree)"
  std::string describe() const;
};

LearnerKind parse_learner_kind(std::string_view name);

using TrainedModel = std::variant<SvmModel, KnnModel>;

// Labels are +1 (clone) / -1 (non-clone).
TrainedModel train_learner(const LearnerSpec& spec, std::span<const Vector> features, std::span<const int> labels);

struct ModelOutput {
  int label = 1;
  std::optional<double> margin;  // SVM only
};

ModelOutput predict(const TrainedModel& model, ConstSpan feature);

inline constexpr int kModelFormatVersion = 1;

nlohmann::json model_to_json(const TrainedModel& model);
// Throws Error(kValidation) on unknown format or version.
TrainedModel model_from_json(const nlohmann::json& j);
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace xclone::ml
