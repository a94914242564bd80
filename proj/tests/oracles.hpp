#pragma once

// Reference implementations used as test oracles. They are written for
// clarity, share no code with the library, and are only fast enough for
// the small instances the tests feed them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double sq_dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

inline double cos_dist(const Vec& a, const Vec& b) {
  return 1.0 - dot(a, b) / std::sqrt(dot(a, a) * dot(b, b));
}

// Gaussian elimination with partial pivoting; nullopt when singular.
inline std::optional<Vec> solve(Mat a, Vec b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
    }
    if (std::fabs(a[piv][c]) < 1e-12) return std::nullopt;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  Vec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

struct QpSolution {
  Vec alpha;
  double bias = 0.0;
  double objective = -std::numeric_limits<double>::infinity();
};

inline double dual_objective(const Mat& gram, const std::vector<int>& y, const Vec& alpha) {
  double w = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    w += alpha[i];
    for (std::size_t j = 0; j < alpha.size(); ++j) w -= 0.5 * alpha[i] * alpha[j] * y[i] * y[j] * gram[i][j];
  }
  return w;
}

// Exact soft-margin SVM dual by enumerating every assignment of each
// multiplier to {0, free, C} and solving the KKT equalities of the free set.
// 3^n candidates, so keep n small.
inline QpSolution svm_dual_by_active_sets(const Mat& gram, const std::vector<int>& y, double C) {
  const std::size_t n = y.size();
  QpSolution best;
  std::vector<int> state(n, 0);  // 0 lower, 1 free, 2 upper
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < n; ++i) {
      state[i] = static_cast<int>(c % 3);
      c /= 3;
    }
    std::vector<std::size_t> free;
    Vec alpha(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (state[i] == 1) free.push_back(i);
      if (state[i] == 2) alpha[i] = C;
    }
    double bias = 0.0;
    if (!free.empty()) {
      // Unknowns: alpha over the free set, then b.
      const std::size_t m = free.size();
      Mat a(m + 1, Vec(m + 1, 0.0));
      Vec rhs(m + 1, 0.0);
      for (std::size_t r = 0; r < m; ++r) {
        const std::size_t i = free[r];
        double fixed = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          if (state[j] == 2) fixed += C * y[i] * y[j] * gram[i][j];
        }
        for (std::size_t s = 0; s < m; ++s) a[r][s] = y[i] * y[free[s]] * gram[i][free[s]];
        a[r][m] = y[i];
        rhs[r] = 1.0 - fixed;
      }
      double fixed_sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (state[j] == 2) fixed_sum += C * y[j];
      }
      for (std::size_t s = 0; s < m; ++s) a[m][s] = y[free[s]];
      rhs[m] = -fixed_sum;
      const auto x = solve(a, rhs);
      if (!x) continue;
      bool ok = true;
      for (std::size_t s = 0; s < m; ++s) {
        if ((*x)[s] <= 0.0 || (*x)[s] >= C) ok = false;
        alpha[free[s]] = (*x)[s];
      }
      if (!ok) continue;
      bias = (*x)[m];
    } else {
      double sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) sum += alpha[j] * y[j];
      if (std::fabs(sum) > 1e-9) continue;
    }
    // Bound multipliers must satisfy the inequality KKT conditions; with no
    // free multiplier, b may be anything in the implied interval.
    double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (state[i] == 1) continue;
      double g = 0.0;
      for (std::size_t j = 0; j < n; ++j) g += alpha[j] * y[j] * gram[i][j];
      // y_i (g + b) >= 1 at the lower bound, <= 1 at the upper bound.
      const bool lower = state[i] == 0;
      const double edge = y[i] - g;  // y_i (g + b) = 1  <=>  b = y_i - g
      if ((y[i] > 0) == lower) {
        lo = std::max(lo, edge);
      } else {
        hi = std::min(hi, edge);
      }
    }
    if (!free.empty()) {
      if (bias < lo - 1e-9 || bias > hi + 1e-9) continue;
    } else {
      if (lo > hi + 1e-9) continue;
      bias = std::isfinite(lo) && std::isfinite(hi) ? 0.5 * (lo + hi) : (std::isfinite(lo) ? lo : hi);
    }
    const double w = dual_objective(gram, y, alpha);
    if (w > best.objective) best = {alpha, bias, w};
  }
  return best;
}

// KKT residual of one training point given its decision value.
inline double kkt_residual(double alpha, int y, double f, double C, double zero_eps = 1e-9) {
  const double yf = y * f;
  if (alpha <= zero_eps) return std::max(0.0, 1.0 - yf);
  if (alpha >= C - zero_eps) return std::max(0.0, yf - 1.0);
  return std::fabs(yf - 1.0);
}

// Brute-force DBSCAN via connected components of core points. Clusters are
// numbered by their smallest core index; a border point goes to the lowest
// numbered cluster among its core neighbours.
inline std::vector<int> dbscan(const std::vector<Vec>& pts, double eps, std::size_t min_pts,
                               const std::function<double(const Vec&, const Vec&)>& dist) {
  const std::size_t n = pts.size();
  std::vector<std::vector<std::size_t>> nb(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || dist(pts[i], pts[j]) <= eps) nb[i].push_back(j);
    }
  }
  std::vector<bool> core(n);
  for (std::size_t i = 0; i < n; ++i) core[i] = nb[i].size() >= min_pts;

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (!core[i]) continue;
    for (std::size_t j : nb[i]) {
      if (core[j]) parent[find(i)] = find(j);
    }
  }
  std::map<std::size_t, int> id_of_root;
  int next = 0;
  std::vector<int> label(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (!core[i]) continue;
    auto [it, inserted] = id_of_root.emplace(find(i), next);
    if (inserted) ++next;
    label[i] = it->second;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i]) continue;
    for (std::size_t j : nb[i]) {
      if (core[j] && (label[i] < 0 || label[j] < label[i])) label[i] = label[j];
    }
  }
  return label;
}

// k nearest by (squared distance, index), full sort.
inline std::vector<std::size_t> knn_indices(const std::vector<Vec>& pts, const Vec& q, std::size_t k) {
  std::vector<std::size_t> idx(pts.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<double> d(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) d[i] = sq_dist(pts[i], q);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  idx.resize(std::min(k, idx.size()));
  return idx;
}

// Majority vote; ties go to the tied class that owns the closest neighbour.
inline int knn_vote(const std::vector<std::size_t>& nearest, const std::vector<int>& labels) {
  std::map<int, int> votes;
  for (auto i : nearest) ++votes[labels[i]];
  int top = 0;
  for (auto& [c, v] : votes) top = std::max(top, v);
  for (auto i : nearest) {
    if (votes[labels[i]] == top) return labels[i];
  }
  return labels[nearest.front()];
}

struct Counts {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

// Per-class precision/recall/F1 written out from the definitions.
struct ClassScores {
  double precision, recall, f1;
};

inline double ratio(double a, double b) { return b == 0.0 ? 0.0 : a / b; }

inline ClassScores scores_for(double tp, double fp, double fn) {
  const double p = ratio(tp, tp + fp);
  const double r = ratio(tp, tp + fn);
  return {p, r, p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r)};
}

}  // namespace oracle
