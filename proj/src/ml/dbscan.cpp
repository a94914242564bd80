#include "xclone/ml/dbscan.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "xclone/errors.hpp"

namespace xclone::ml {
namespace {

class Neighborhoods {
 public:
  Neighborhoods(const std::vector<Vector>& points, DistanceMetric metric) : points_(points), metric_(metric) {
    if (metric_ == DistanceMetric::kCosine) {
      norms_.reserve(points.size());
      for (const auto& p : points) {
        const double n = norm(p);
        if (n == 0.0) throw ZeroVector();
        norms_.push_back(n);
      }
    }
  }

  double distance(std::size_t i, std::size_t j) const {
    if (metric_ == DistanceMetric::kEuclidean) return std::sqrt(squared_euclidean(points_[i], points_[j]));
    const double sim = std::clamp(dot(points_[i], points_[j]) / (norms_[i] * norms_[j]), -1.0, 1.0);
    return 1.0 - sim;
  }

  std::vector<std::size_t> within(std::size_t i, double eps) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < points_.size(); ++j) {
      if (j == i || distance(i, j) <= eps) out.push_back(j);
    }
    return out;
  }

 private:
  const std::vector<Vector>& points_;
  DistanceMetric metric_;
  std::vector<double> norms_;
};

constexpr int kUnvisited = -2;

}  // namespace

DbscanResult dbscan(const std::vector<Vector>& points, double eps, std::size_t min_pts, DistanceMetric metric) {
  if (!(eps > 0.0)) throw Error(ErrorKind::kUsage, "DBSCAN eps must be positive");
  if (min_pts < 2) throw Error(ErrorKind::kUsage, "DBSCAN min_pts must be at least 2");
  DbscanResult result;
  const std::size_t n = points.size();
  result.labels.assign(n, kUnvisited);
  result.core.assign(n, false);
  if (n == 0) return result;
  const std::size_t dim = points.front().size();
  for (const auto& p : points) {
    if (p.size() != dim) throw DimensionMismatch(dim, p.size());
  }

  const Neighborhoods hood(points, metric);
  int cluster = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (result.labels[i] != kUnvisited) continue;
    const auto seeds = hood.within(i, eps);
    if (seeds.size() < min_pts) {
      result.labels[i] = kNoise;  // may still be claimed as a border point
      continue;
    }
    result.core[i] = true;
    result.labels[i] = cluster;
    std::deque<std::size_t> queue(seeds.begin(), seeds.end());
    while (!queue.empty()) {
      const std::size_t j = queue.front();
      queue.pop_front();
      if (result.labels[j] == kNoise) result.labels[j] = cluster;
      if (result.labels[j] != kUnvisited) continue;
      result.labels[j] = cluster;
      const auto reach = hood.within(j, eps);
      if (reach.size() >= min_pts) {
        result.core[j] = true;
        for (std::size_t q : reach) {
          if (result.labels[q] == kUnvisited || result.labels[q] == kNoise) queue.push_back(q);
        }
      }
    }
    ++cluster;
  }
  result.cluster_count = cluster;
  return result;
}

}  // namespace xclone::ml
