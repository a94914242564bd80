#pragma once

#include <cstddef>
#include <memory>
#include <string_view>
#include <vector>

#include "xclone/ml/vector_ops.hpp"

namespace xclone::ml {

enum class KnnBackend { kBrute, kKdTree };

std::string_view to_string(KnnBackend backend);
KnnBackend parse_knn_backend(std::string_view name);  // "brute" | "kd_tree"

struct Neighbor {
  std::size_t index = 0;
  double sq_distance = 0.0;
};

// Orders neighbours by (distance, insertion index).
inline bool closer(const Neighbor& a, const Neighbor& b) {
  return a.sq_distance < b.sq_distance || (a.sq_distance == b.sq_distance && a.index < b.index);
}

// Exact k-d tree over a fixed point set. Query results are identical to a
// brute-force scan, including the tie-break on insertion index.
class KdTree {
 public:
  explicit KdTree(const std::vector<Vector>& points, std::size_t leaf_size = 16);

  std::vector<Neighbor> nearest(ConstSpan query, std::size_t k) const;

 private:
  struct Node {
    std::size_t begin = 0;  // range into order_
    std::size_t end = 0;
    std::size_t split_dim = 0;
    double split_value = 0.0;
    int left = -1;
    int right = -1;
  };

  int build(std::size_t begin, std::size_t end);
  void search(int node, ConstSpan query, std::size_t k, std::vector<Neighbor>& heap) const;

  std::vector<Vector> points_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
  std::size_t leaf_size_;
};

std::vector<Neighbor> brute_nearest(const std::vector<Vector>& points, ConstSpan query, std::size_t k);

class KnnModel {
 public:
  // Throws DegenerateData if there are fewer than k points, DimensionMismatch
  // on ragged input.
  KnnModel(std::vector<Vector> points, std::vector<int> labels, std::size_t k, KnnBackend backend);

  // Majority vote over the k nearest by Euclidean distance; vote ties go to
  // the class of the closest neighbour among the tied classes.
  int predict(ConstSpan x) const;
  std::vector<Neighbor> neighbors(ConstSpan x) const;

  const std::vector<Vector>& points() const { return points_; }
  const std::vector<int>& labels() const { return labels_; }
  std::size_t k() const { return k_; }
  KnnBackend backend() const { return backend_; }
  std::size_t dim() const { return points_.front().size(); }

 private:
  std::vector<Vector> points_;
  std::vector<int> labels_;
  std::size_t k_;
  KnnBackend backend_;
  // Immutable once built, so copies of the model can share it.
  std::shared_ptr<const KdTree> tree_;
};

}  // namespace xclone::ml
