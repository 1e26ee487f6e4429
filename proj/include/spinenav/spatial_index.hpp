#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

namespace spinenav {

/// Nearest-neighbor hit. Ties on distance are broken toward the lowest point
/// index, so every query has exactly one correct answer and parallel and
/// serial searches agree bit-for-bit.
struct NeighborHit {
  int index;
  double distance_sq;
};

/// Static kd-tree over 3D points (median split on the widest axis).
class KdTree3 {
 public:
  KdTree3() = default;
  explicit KdTree3(std::span<const Eigen::Vector3d> points);

  /// Nearest point within `max_distance` (Euclidean, mm), or nullopt.
  std::optional<NeighborHit> nearest(const Eigen::Vector3d& query, double max_distance) const;

  std::size_t size() const { return points_.size(); }

 private:
  struct Node {
    int axis = -1;          // -1 marks a leaf
    double split = 0.0;
    int left = -1;
    int right = -1;
    int begin = 0;          // leaf: range into order_
    int end = 0;
  };

  int build(int begin, int end);
  void search(int node, const Eigen::Vector3d& query, NeighborHit& best) const;

  static constexpr int kLeafSize = 16;

  std::vector<Eigen::Vector3d> points_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

/// Exhaustive-scan reference for the same query; the kd-tree must return
/// identical hits. Kept as the serial oracle and benchmark baseline.
std::optional<NeighborHit> nearest_exhaustive(std::span<const Eigen::Vector3d> points,
                                              const Eigen::Vector3d& query, double max_distance);

/// One correspondence slot per query point: the matched target index, or -1
/// when nothing lies within `max_distance`. `parallel` runs the per-query
/// loop under OpenMP; each slot is computed independently, so the output is
/// bit-identical to the serial pass.
std::vector<int> match_correspondences(const KdTree3& target,
                                       std::span<const Eigen::Vector3d> queries,
                                       double max_distance, bool parallel);

}  // namespace spinenav
