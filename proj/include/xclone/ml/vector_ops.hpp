#pragma once

#include <span>
#include <vector>

namespace xclone::ml {

using Vector = std::vector<double>;
using ConstSpan = std::span<const double>;

double dot(ConstSpan u, ConstSpan v);
double norm(ConstSpan v);
double squared_euclidean(ConstSpan u, ConstSpan v);

// u.v / (|u||v|) clamped to [-1, 1]. Throws ZeroVector, DimensionMismatch.
double cosine_similarity(ConstSpan u, ConstSpan v);
inline double cosine_distance(ConstSpan u, ConstSpan v) { return 1.0 - cosine_similarity(u, v); }

// Elementwise |a - b|; symmetric in its arguments. Throws DimensionMismatch.
Vector abs_diff_features(ConstSpan a, ConstSpan b);

// Throws NonFinite if any entry is NaN or infinite.
void require_finite(ConstSpan v);

}  // namespace xclone::ml
