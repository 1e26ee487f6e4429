#include "spinenav/spatial_index.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace spinenav {

namespace {

bool better(double d_sq, int index, const NeighborHit& best) {
  return d_sq < best.distance_sq || (d_sq == best.distance_sq && index < best.index);
}

}  // namespace

KdTree3::KdTree3(std::span<const Eigen::Vector3d> points)
    : points_(points.begin(), points.end()) {
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0);
  if (!points_.empty()) {
    nodes_.reserve(2 * points_.size() / kLeafSize + 8);
    root_ = build(0, static_cast<int>(points_.size()));
  }
}

int KdTree3::build(int begin, int end) {
  const int node_index = static_cast<int>(nodes_.size());
  nodes_.emplace_back();

  if (end - begin <= kLeafSize) {
    Node& leaf = nodes_[node_index];
    leaf.begin = begin;
    leaf.end = end;
    return node_index;
  }

  Eigen::Vector3d lo = points_[order_[begin]];
  Eigen::Vector3d hi = lo;
  for (int i = begin + 1; i < end; ++i) {
    lo = lo.cwiseMin(points_[order_[i]]);
    hi = hi.cwiseMax(points_[order_[i]]);
  }
  int axis = 0;
  (hi - lo).maxCoeff(&axis);

  const int mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](int a, int b) {
                     const double ca = points_[a](axis), cb = points_[b](axis);
                     return ca < cb || (ca == cb && a < b);
                   });

  const double split = points_[order_[mid]](axis);
  const int left = build(begin, mid);
  const int right = build(mid, end);
  Node& node = nodes_[node_index];
  node.axis = axis;
  node.split = split;
  node.left = left;
  node.right = right;
  return node_index;
}

void KdTree3::search(int node_index, const Eigen::Vector3d& query, NeighborHit& best) const {
  const Node& node = nodes_[node_index];
  if (node.axis < 0) {
    for (int i = node.begin; i < node.end; ++i) {
      const int pt = order_[i];
      const double d_sq = (points_[pt] - query).squaredNorm();
      if (better(d_sq, pt, best)) {
        best = {pt, d_sq};
      }
    }
    return;
  }

  const double delta = query(node.axis) - node.split;
  const int near_child = delta < 0.0 ? node.left : node.right;
  const int far_child = delta < 0.0 ? node.right : node.left;
  search(near_child, query, best);
  // Prune only on strict >, so an equal-distance lower index on the far side
  // is still found (keeps the tie-break exact).
  if (!(delta * delta > best.distance_sq)) {
    search(far_child, query, best);
  }
}

std::optional<NeighborHit> KdTree3::nearest(const Eigen::Vector3d& query,
                                            double max_distance) const {
  if (points_.empty()) return std::nullopt;
  NeighborHit best{static_cast<int>(points_.size()), max_distance * max_distance};
  // Start past the radius: anything at exactly max_distance still qualifies.
  best.distance_sq = std::nextafter(best.distance_sq, std::numeric_limits<double>::infinity());
  search(root_, query, best);
  if (best.index >= static_cast<int>(points_.size())) return std::nullopt;
  return best;
}

std::optional<NeighborHit> nearest_exhaustive(std::span<const Eigen::Vector3d> points,
                                              const Eigen::Vector3d& query,
                                              double max_distance) {
  NeighborHit best{static_cast<int>(points.size()),
                   std::nextafter(max_distance * max_distance,
                                  std::numeric_limits<double>::infinity())};
  for (int i = 0; i < static_cast<int>(points.size()); ++i) {
    const double d_sq = (points[i] - query).squaredNorm();
    if (better(d_sq, i, best)) {
      best = {i, d_sq};
    }
  }
  if (best.index >= static_cast<int>(points.size())) return std::nullopt;
  return best;
}

std::vector<int> match_correspondences(const KdTree3& target,
                                       std::span<const Eigen::Vector3d> queries,
                                       double max_distance, bool parallel) {
  std::vector<int> slots(queries.size(), -1);
  const auto n = static_cast<std::int64_t>(queries.size());
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t i = 0; i < n; ++i) {
    if (auto hit = target.nearest(queries[i], max_distance)) {
      slots[i] = hit->index;
    }
  }
  return slots;
}

}  // namespace spinenav
