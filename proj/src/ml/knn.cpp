#include "xclone/ml/knn.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "xclone/errors.hpp"

namespace xclone::ml {

std::string_view to_string(KnnBackend backend) {
  return backend == KnnBackend::kBrute ? "brute" : "kd_tree";
}

KnnBackend parse_knn_backend(std::string_view name) {
  if (name == "brute") return KnnBackend::kBrute;
  if (name == "kd_tree" || name == "kdtree") return KnnBackend::kKdTree;
  throw Error(ErrorKind::kUsage, "unknown kNN backend '" + std::string(name) + "'");
}

namespace {

// Bounded max-heap on `closer`: front() is the current worst of the best k.
void offer(std::vector<Neighbor>& heap, std::size_t k, Neighbor cand) {
  if (heap.size() < k) {
    heap.push_back(cand);
    std::push_heap(heap.begin(), heap.end(), closer);
  } else if (closer(cand, heap.front())) {
    std::pop_heap(heap.begin(), heap.end(), closer);
    heap.back() = cand;
    std::push_heap(heap.begin(), heap.end(), closer);
  }
}

}  // namespace

std::vector<Neighbor> brute_nearest(const std::vector<Vector>& points, ConstSpan query, std::size_t k) {
  std::vector<Neighbor> heap;
  heap.reserve(k + 1);
  for (std::size_t i = 0; i < points.size(); ++i) offer(heap, k, {i, squared_euclidean(points[i], query)});
  std::sort(heap.begin(), heap.end(), closer);
  return heap;
}

KdTree::KdTree(const std::vector<Vector>& points, std::size_t leaf_size)
    : points_(points), order_(points.size()), leaf_size_(std::max<std::size_t>(1, leaf_size)) {
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  if (!points_.empty()) build(0, points_.size());
}

int KdTree::build(std::size_t begin, std::size_t end) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back({begin, end});
  if (end - begin <= leaf_size_) return id;

  const std::size_t dim = points_[order_[begin]].size();
  std::size_t best_dim = 0;
  double best_spread = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    double lo = points_[order_[begin]][d];
    double hi = lo;
    for (std::size_t i = begin + 1; i < end; ++i) {
      const double v = points_[order_[i]][d];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > best_spread) {
      best_spread = hi - lo;
      best_dim = d;
    }
  }
  if (best_spread == 0.0) return id;  // all points coincide

  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                   order_.begin() + static_cast<std::ptrdiff_t>(mid),
                   order_.begin() + static_cast<std::ptrdiff_t>(end), [&](std::size_t a, std::size_t b) {
                     return points_[a][best_dim] < points_[b][best_dim];
                   });
  const double split = points_[order_[mid]][best_dim];
  const int left = build(begin, mid);
  const int right = build(mid, end);
  Node& node = nodes_[static_cast<std::size_t>(id)];
  node.split_dim = best_dim;
  node.split_value = split;
  node.left = left;
  node.right = right;
  return id;
}

void KdTree::search(int node_id, ConstSpan query, std::size_t k, std::vector<Neighbor>& heap) const {
  const Node& node = nodes_[static_cast<std::size_t>(node_id)];
  if (node.left < 0) {
    for (std::size_t i = node.begin; i < node.end; ++i) {
      const std::size_t idx = order_[i];
      offer(heap, k, {idx, squared_euclidean(points_[idx], query)});
    }
    return;
  }
  // Left holds values <= split, right values >= split.
  const double diff = query[node.split_dim] - node.split_value;
  const int near = diff < 0.0 ? node.left : node.right;
  const int far = diff < 0.0 ? node.right : node.left;
  search(near, query, k, heap);
  // Equal distance must still be explored: a tie may carry a lower index.
  if (heap.size() < k || diff * diff <= heap.front().sq_distance) search(far, query, k, heap);
}

std::vector<Neighbor> KdTree::nearest(ConstSpan query, std::size_t k) const {
  std::vector<Neighbor> heap;
  if (points_.empty() || k == 0) return heap;
  if (query.size() != points_.front().size()) throw DimensionMismatch(points_.front().size(), query.size());
  heap.reserve(k + 1);
  search(0, query, k, heap);
  std::sort(heap.begin(), heap.end(), closer);
  return heap;
}

KnnModel::KnnModel(std::vector<Vector> points, std::vector<int> labels, std::size_t k, KnnBackend backend)
    : points_(std::move(points)), labels_(std::move(labels)), k_(k), backend_(backend) {
  if (k_ == 0) throw Error(ErrorKind::kUsage, "k must be positive");
  if (points_.size() != labels_.size()) throw DimensionMismatch(points_.size(), labels_.size());
  if (points_.size() < k_) throw DegenerateData("kNN needs at least k training points");
  const std::size_t dim = points_.front().size();
  for (const auto& p : points_) {
    if (p.size() != dim) throw DimensionMismatch(dim, p.size());
    require_finite(p);
  }
  if (backend_ == KnnBackend::kKdTree) tree_ = std::make_shared<const KdTree>(points_);
}

std::vector<Neighbor> KnnModel::neighbors(ConstSpan x) const {
  if (x.size() != dim()) throw DimensionMismatch(dim(), x.size());
  return tree_ ? tree_->nearest(x, k_) : brute_nearest(points_, x, k_);
}

int KnnModel::predict(ConstSpan x) const {
  const auto nn = neighbors(x);
  std::map<int, std::size_t> votes;
  for (const auto& n : nn) ++votes[labels_[n.index]];
  std::size_t top = 0;
  for (const auto& [_, v] : votes) top = std::max(top, v);
  // Walk neighbours nearest-first; the first whose class has the top vote wins.
  for (const auto& n : nn) {
    if (votes[labels_[n.index]] == top) return labels_[n.index];
  }
  return labels_[nn.front().index];
}

}  // namespace xclone::ml
