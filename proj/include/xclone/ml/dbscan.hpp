#pragma once

#include <cstddef>
#include <vector>

#include "xclone/ml/vector_ops.hpp"

namespace xclone::ml {

enum class DistanceMetric { kCosine, kEuclidean };

inline constexpr int kNoise = -1;

struct DbscanResult {
  // Cluster id per input point (0-based, numbered in discovery order) or kNoise.
  std::vector<int> labels;
  std::vector<bool> core;
  int cluster_count = 0;
};

// Density-based clustering. A point is core when at least min_pts points
// (itself included) lie within eps. Points are scanned in input order, so a
// border point reachable from several clusters joins the first one expanded.
// Throws DimensionMismatch, ZeroVector (cosine metric), and usage errors for
// eps <= 0 or min_pts < 2.
DbscanResult dbscan(const std::vector<Vector>& points, double eps, std::size_t min_pts,
                    DistanceMetric metric = DistanceMetric::kCosine);

}  // namespace xclone::ml
