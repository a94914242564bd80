#include "xclone/ml/svm.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "xclone/errors.hpp"

namespace xclone::ml {

double Kernel::operator()(ConstSpan x, ConstSpan y) const {
  switch (type) {
    case KernelType::kLinear:
      return dot(x, y);
    case KernelType::kPolynomial: {
      const double base = gamma.value_or(1.0) * dot(x, y) + coef0;
      double r = 1.0;
      for (int i = 0; i < degree; ++i) r *= base;
      return r;
    }
    case KernelType::kRbf:
      return std::exp(-gamma.value_or(1.0) * squared_euclidean(x, y));
  }
  return 0.0;
}

std::string_view to_string(KernelType type) {
  switch (type) {
    case KernelType::kLinear:
      return "linear";
    case KernelType::kPolynomial:
      return "poly";
    case KernelType::kRbf:
      return "rbf";
  }
  return "linear";
}

KernelType parse_kernel_type(std::string_view name) {
  if (name == "linear") return KernelType::kLinear;
  if (name == "poly" || name == "polynomial") return KernelType::kPolynomial;
  if (name == "rbf") return KernelType::kRbf;
  throw Error(ErrorKind::kUsage, "unknown kernel '" + std::string(name) + "'");
}

double scale_gamma(std::span<const Vector> features) {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;
  for (const auto& f : features) {
    for (double x : f) {
      sum += x;
      sum_sq += x * x;
      ++count;
    }
  }
  if (count == 0) return 1.0;
  const double mean = sum / static_cast<double>(count);
  const double var = sum_sq / static_cast<double>(count) - mean * mean;
  if (!(var > 0.0)) return 1.0;
  const double dim = static_cast<double>(features.front().size());
  return 1.0 / (dim * var);
}

double SvmModel::decision_value(ConstSpan x) const {
  if (!support_vectors.empty() && x.size() != dim()) throw DimensionMismatch(dim(), x.size());
  double f = bias;
  for (std::size_t i = 0; i < support_vectors.size(); ++i) {
    f += alphas[i] * labels[i] * kernel(support_vectors[i], x);
  }
  return f;
}

SvmPrediction svm_predict(const SvmModel& model, ConstSpan x) {
  const double margin = model.decision_value(x);
  return {margin >= 0.0 ? 1 : -1, margin};
}

namespace {

// Gram matrices up to this many points are precomputed.
constexpr std::size_t kMaxCachedPoints = 4096;
// Relative threshold below which a multiplier change is treated as no change.
constexpr double kStepEps = 1e-10;

class SmoSolver {
 public:
  SmoSolver(std::span<const Vector> x, std::span<const int> y, const Kernel& kernel, const SvmParams& params,
            SmoDiagnostics* diag)
      : x_(x),
        y_(y),
        kernel_(kernel),
        c_(params.C),
        tol_(params.tolerance),
        n_(x.size()),
        alpha_(n_, 0.0),
        error_(n_),
        rng_(params.seed),
        diag_(diag) {
    if (n_ <= kMaxCachedPoints) {
      gram_.resize(n_ * n_);
      for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i; j < n_; ++j) {
          const double k = kernel_(x_[i], x_[j]);
          gram_[i * n_ + j] = k;
          gram_[j * n_ + i] = k;
        }
      }
    }
    // All multipliers start at zero, so f(x_i) = b = 0.
    for (std::size_t i = 0; i < n_; ++i) error_[i] = -static_cast<double>(y_[i]);
  }

  void run(int max_passes, std::size_t max_sweeps) {
    bool examine_all = true;
    int quiet_full_passes = 0;
    std::size_t sweeps = 0;
    bool converged = false;
    while (sweeps < max_sweeps) {
      ++sweeps;
      std::size_t changed = 0;
      for (std::size_t i = 0; i < n_; ++i) {
        if (examine_all || is_free(i)) changed += examine(i);
      }
      if (examine_all) {
        quiet_full_passes = changed == 0 ? quiet_full_passes + 1 : 0;
        if (quiet_full_passes >= max_passes) {
          converged = true;
          break;
        }
        if (changed > 0) examine_all = false;
      } else if (changed == 0) {
        examine_all = true;
      }
    }
    if (diag_) {
      diag_->sweeps = sweeps;
      diag_->converged = converged;
      diag_->updates = updates_;
      diag_->alphas = alpha_;
    }
  }

  SvmModel model() const {
    SvmModel m;
    m.kernel = kernel_;
    m.C = c_;
    m.tolerance = tol_;
    m.bias = b_;
    for (std::size_t i = 0; i < n_; ++i) {
      if (alpha_[i] > 0.0) {
        m.support_vectors.push_back(x_[i]);
        m.alphas.push_back(alpha_[i]);
        m.labels.push_back(y_[i]);
      }
    }
    return m;
  }

 private:
  double k(std::size_t i, std::size_t j) const {
    return gram_.empty() ? kernel_(x_[i], x_[j]) : gram_[i * n_ + j];
  }

  bool is_free(std::size_t i) const { return alpha_[i] > 0.0 && alpha_[i] < c_; }

  double dual_objective() const {
    // W = sum a_i - 1/2 sum_i a_i y_i (f_i - b), with f_i - b = E_i + y_i - b.
    double w = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (alpha_[i] == 0.0) continue;
      w += alpha_[i] - 0.5 * alpha_[i] * y_[i] * (error_[i] + y_[i] - b_);
    }
    return w;
  }

  std::size_t examine(std::size_t i2) {
    const double r2 = error_[i2] * y_[i2];
    const bool violates = (r2 < -tol_ && alpha_[i2] < c_) || (r2 > tol_ && alpha_[i2] > 0.0);
    if (!violates) return 0;

    // Second choice: largest |E1 - E2| among free multipliers.
    std::size_t best = n_;
    double best_gap = -1.0;
    std::size_t free_count = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (!is_free(i)) continue;
      ++free_count;
      const double gap = std::fabs(error_[i] - error_[i2]);
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (free_count > 1 && best != n_ && take_step(best, i2)) return 1;

    std::uniform_int_distribution<std::size_t> pick(0, n_ - 1);
    const std::size_t start_free = pick(rng_);
    for (std::size_t off = 0; off < n_; ++off) {
      const std::size_t i1 = (start_free + off) % n_;
      if (is_free(i1) && take_step(i1, i2)) return 1;
    }
    const std::size_t start_all = pick(rng_);
    for (std::size_t off = 0; off < n_; ++off) {
      const std::size_t i1 = (start_all + off) % n_;
      if (take_step(i1, i2)) return 1;
    }
    return 0;
  }

  bool take_step(std::size_t i1, std::size_t i2) {
    if (i1 == i2) return false;
    const double a1 = alpha_[i1];
    const double a2 = alpha_[i2];
    const int y1 = y_[i1];
    const int y2 = y_[i2];
    const double e1 = error_[i1];
    const double e2 = error_[i2];
    const double s = y1 * y2;

    double lo, hi;
    if (y1 != y2) {
      lo = std::max(0.0, a2 - a1);
      hi = std::min(c_, c_ + a2 - a1);
    } else {
      lo = std::max(0.0, a1 + a2 - c_);
      hi = std::min(c_, a1 + a2);
    }
    if (hi - lo <= 0.0) return false;

    const double k11 = k(i1, i1);
    const double k12 = k(i1, i2);
    const double k22 = k(i2, i2);
    const double eta = k11 + k22 - 2.0 * k12;

    double a2_new;
    if (eta > 0.0) {
      a2_new = std::clamp(a2 + y2 * (e1 - e2) / eta, lo, hi);
    } else {
      // Objective (to minimise) at both ends of the feasible segment.
      const double f1 = y1 * (e1 - b_) - a1 * k11 - s * a2 * k12;
      const double f2 = y2 * (e2 - b_) - s * a1 * k12 - a2 * k22;
      auto psi = [&](double a2_end) {
        const double a1_end = a1 + s * (a2 - a2_end);
        return a1_end * f1 + a2_end * f2 + 0.5 * a1_end * a1_end * k11 + 0.5 * a2_end * a2_end * k22 +
               s * a2_end * a1_end * k12;
      };
      const double psi_lo = psi(lo);
      const double psi_hi = psi(hi);
      if (psi_lo < psi_hi - kStepEps) {
        a2_new = lo;
      } else if (psi_lo > psi_hi + kStepEps) {
        a2_new = hi;
      } else {
        a2_new = a2;
      }
    }
    if (std::fabs(a2_new - a2) < kStepEps * (a2_new + a2 + kStepEps)) return false;

    double a1_new = a1 + s * (a2 - a2_new);
    // Snap tiny rounding excursions back into the box, keeping y1a1 + y2a2 fixed.
    if (a1_new < 0.0) {
      a2_new += s * a1_new;
      a1_new = 0.0;
    } else if (a1_new > c_) {
      a2_new += s * (a1_new - c_);
      a1_new = c_;
    }
    a2_new = snap(a2_new);
    a1_new = snap(a1_new);

    const double d1 = y1 * (a1_new - a1);
    const double d2 = y2 * (a2_new - a2);
    const double b1 = b_ - e1 - d1 * k11 - d2 * k12;
    const double b2 = b_ - e2 - d1 * k12 - d2 * k22;
    double b_new;
    if (a1_new > 0.0 && a1_new < c_) {
      b_new = b1;
    } else if (a2_new > 0.0 && a2_new < c_) {
      b_new = b2;
    } else {
      b_new = 0.5 * (b1 + b2);
    }
    const double db = b_new - b_;

    for (std::size_t i = 0; i < n_; ++i) error_[i] += d1 * k(i1, i) + d2 * k(i2, i) + db;
    alpha_[i1] = a1_new;
    alpha_[i2] = a2_new;
    b_ = b_new;
    ++updates_;
    if (diag_ && diag_->record_objective) diag_->objective_trace.push_back(dual_objective());
    return true;
  }

  double snap(double a) const {
    const double eps = 1e-12 * std::max(1.0, c_);
    if (a < eps) return 0.0;
    if (a > c_ - eps) return c_;
    return a;
  }

  std::span<const Vector> x_;
  std::span<const int> y_;
  Kernel kernel_;
  double c_;
  double tol_;
  std::size_t n_;
  std::vector<double> alpha_;
  std::vector<double> error_;
  std::vector<double> gram_;
  double b_ = 0.0;
  std::size_t updates_ = 0;
  std::mt19937_64 rng_;
  SmoDiagnostics* diag_;
};

}  // namespace

SvmModel svm_train(std::span<const Vector> features, std::span<const int> labels, const SvmParams& params,
                   SmoDiagnostics* diagnostics) {
  if (features.size() != labels.size()) throw DimensionMismatch(features.size(), labels.size());
  if (features.empty()) throw DegenerateData("no training examples");
  if (!(params.C > 0.0) || !(params.tolerance > 0.0) || params.max_passes < 1) {
    throw Error(ErrorKind::kUsage, "SVM requires C > 0, tolerance > 0, max_passes >= 1");
  }
  const std::size_t dim = features.front().size();
  bool has_pos = false;
  bool has_neg = false;
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].size() != dim) throw DimensionMismatch(dim, features[i].size());
    require_finite(features[i]);
    if (labels[i] == 1) {
      has_pos = true;
    } else if (labels[i] == -1) {
      has_neg = true;
    } else {
      throw DegenerateData("SVM labels must be +1 or -1");
    }
  }
  if (!has_pos || !has_neg) throw DegenerateData("SVM training needs both classes");

  Kernel kernel = params.kernel;
  if (kernel.type != KernelType::kLinear && !kernel.gamma) kernel.gamma = scale_gamma(features);

  SmoSolver solver(features, labels, kernel, params, diagnostics);
  solver.run(params.max_passes, params.max_sweeps);
  return solver.model();
}

}  // namespace xclone::ml
