#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xclone/ml/vector_ops.hpp"

namespace xclone::ml {

enum class KernelType { kLinear, kPolynomial, kRbf };

struct Kernel {
  KernelType type = KernelType::kLinear;
  int degree = 3;
  // Unset means "scale": 1 / (dim * variance of the training features),
  // resolved once at training time and stored in the model.
  std::optional<double> gamma;
  double coef0 = 0.0;

  static Kernel linear() { return {}; }
  static Kernel polynomial(int degree = 3, std::optional<double> gamma = std::nullopt, double coef0 = 0.0) {
    return {KernelType::kPolynomial, degree, gamma, coef0};
  }
  static Kernel rbf(std::optional<double> gamma = std::nullopt) {
    return {KernelType::kRbf, 3, gamma, 0.0};
  }

  // Requires gamma to be resolved for polynomial and rbf kernels.
  double operator()(ConstSpan x, ConstSpan y) const;
};

std::string_view to_string(KernelType type);
KernelType parse_kernel_type(std::string_view name);  // "linear" | "poly" | "polynomial" | "rbf"

// 1 / (dim * var) over every entry of the feature matrix; 1.0 when the
// variance is zero.
double scale_gamma(std::span<const Vector> features);

struct SvmParams {
  Kernel kernel = Kernel::polynomial();
  double C = 1.0;
  double tolerance = 1e-3;
  int max_passes = 10;
  std::uint64_t seed = 42;
  // Hard cap on outer-loop sweeps.
  std::size_t max_sweeps = 100000;
};

struct SvmModel {
  std::vector<Vector> support_vectors;
  std::vector<double> alphas;
  std::vector<int> labels;
  double bias = 0.0;
  Kernel kernel;
  double C = 1.0;
  double tolerance = 1e-3;

  std::size_t dim() const { return support_vectors.empty() ? 0 : support_vectors.front().size(); }
  // sum_i alpha_i y_i K(sv_i, x) + bias. Throws DimensionMismatch.
  double decision_value(ConstSpan x) const;
};

struct SvmPrediction {
  int label = 1;
  double margin = 0.0;
};

// sign of the decision value; an exact zero maps to +1.
SvmPrediction svm_predict(const SvmModel& model, ConstSpan x);

// Optional solver introspection, filled by svm_train when supplied.
struct SmoDiagnostics {
  bool record_objective = false;
  // Dual objective after every accepted pair update (only if record_objective).
  std::vector<double> objective_trace;
  // Multipliers for every training point, in input order.
  std::vector<double> alphas;
  std::size_t updates = 0;
  std::size_t sweeps = 0;
  bool converged = false;
};

// Soft-margin SVM trained with sequential minimal optimization. Labels must
// be +1/-1 with both classes present. Throws DegenerateData, NonFinite,
// DimensionMismatch.
SvmModel svm_train(std::span<const Vector> features, std::span<const int> labels, const SvmParams& params,
                   SmoDiagnostics* diagnostics = nullptr);

}  // namespace xclone::ml
