#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "spinenav/errors.hpp"

namespace spinenav {

/// Millimeters everywhere; frames are right-handed.

/// Nearest rotation to `m` (orthogonal Procrustes projection via SVD),
/// determinant forced to +1 by flipping the smallest singular direction.
/// Throws SingularMatrix when the smallest singular value is below 1e-12.
Eigen::Matrix3d orthonormalize(const Eigen::Matrix3d& m);

/// Element of SE(3): rotation + translation (mm). The rotation is kept
/// orthonormal with det +1 to within 1e-9 Frobenius after every constructor;
/// construction re-projects when drift exceeds 1e-12.
class RigidTransform {
 public:
  RigidTransform() : rotation_(Eigen::Matrix3d::Identity()), translation_(Eigen::Vector3d::Zero()) {}
  RigidTransform(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation);

  static RigidTransform identity() { return {}; }

  /// Unit quaternion (w, x, y, z) + translation. The quaternion is normalized
  /// on entry; |norm - 1| > 1e-3 is rejected as InvalidParams.
  static RigidTransform from_quaternion(double qw, double qx, double qy, double qz,
                                        const Eigen::Vector3d& translation);

  /// Rotation of `angle_rad` about `axis` (normalized internally).
  static RigidTransform about_axis(const Eigen::Vector3d& axis, double angle_rad,
                                   const Eigen::Vector3d& translation = Eigen::Vector3d::Zero());

  static RigidTransform translate(const Eigen::Vector3d& translation) {
    return {Eigen::Matrix3d::Identity(), translation};
  }

  const Eigen::Matrix3d& rotation() const { return rotation_; }
  const Eigen::Vector3d& translation() const { return translation_; }

  /// Normalized quaternion with qw >= 0, for serialization.
  Eigen::Vector4d quaternion_wxyz() const;

 private:
  Eigen::Matrix3d rotation_;
  Eigen::Vector3d translation_;
};

/// Applies b first, then a.
RigidTransform compose(const RigidTransform& a, const RigidTransform& b);

RigidTransform invert(const RigidTransform& t);

/// R * p + t.
Eigen::Vector3d apply(const RigidTransform& t, const Eigen::Vector3d& p);

/// Frobenius distance between rotations plus Euclidean distance between
/// translations; convergence/consistency metric used by the frame graph.
double transform_distance(const RigidTransform& a, const RigidTransform& b);

/// Coordinate frames of the rig: optical tracker, robot base (world), CT scan,
/// manipulator end-effector, tracked tool body, drill tip.
enum class FrameId { OT, S, CT, KukaEE, Tool, Tip };

const char* to_string(FrameId id);
FrameId frame_from_string(const std::string& name);

/// Transform bookkeeping over the frame set. An edge (from, to) stores the
/// transform taking coordinates in `from` to coordinates in `to`; edges are
/// traversable in both directions. The graph is expected to be a tree plus
/// consistency-checked redundant edges: resolve() raises AmbiguousPath when
/// any registered edge disagrees with the traversal tree by more than 1e-6.
class FrameGraph {
 public:
  struct Edge {
    FrameId from;
    FrameId to;
    RigidTransform transform;  // maps `from` coordinates to `to` coordinates
  };

  void insert(FrameId from, FrameId to, const RigidTransform& transform);

  /// Composed transform mapping `from` coordinates to `to` coordinates.
  /// Throws NoPath when the frames are disconnected.
  RigidTransform resolve(FrameId from, FrameId to) const;

  bool contains(FrameId frame) const;
  const std::vector<Edge>& edges() const { return edges_; }

  static constexpr double kConsistencyTolerance = 1e-6;

 private:
  std::vector<Edge> edges_;
};

}  // namespace spinenav
