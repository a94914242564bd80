#include "xclone/ml/vector_ops.hpp"

#include <algorithm>
#include <cmath>

#include "xclone/errors.hpp"

namespace xclone::ml {

namespace {
void require_same_dim(ConstSpan u, ConstSpan v) {
  if (u.size() != v.size()) throw DimensionMismatch(u.size(), v.size());
}
}  // namespace

double dot(ConstSpan u, ConstSpan v) {
  require_same_dim(u, v);
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

double norm(ConstSpan v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double squared_euclidean(ConstSpan u, ConstSpan v) {
  require_same_dim(u, v);
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - v[i];
    s += d * d;
  }
  return s;
}

double cosine_similarity(ConstSpan u, ConstSpan v) {
  require_same_dim(u, v);
  const double nu = norm(u);
  const double nv = norm(v);
  if (nu == 0.0 || nv == 0.0) throw ZeroVector();
  return std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
}

Vector abs_diff_features(ConstSpan a, ConstSpan b) {
  require_same_dim(a, b);
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::fabs(a[i] - b[i]);
  return out;
}

void require_finite(ConstSpan v) {
  for (double x : v) {
    if (!std::isfinite(x)) throw NonFinite();
  }
}

}  // namespace xclone::ml
