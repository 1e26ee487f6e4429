#pragma once

#include <Eigen/Dense>
#include <array>
#include <span>
#include <vector>

#include "spinenav/geometry.hpp"

namespace spinenav {

struct PointCloud {
  std::vector<Eigen::Vector3d> points;  // mm
  FrameId frame = FrameId::S;
};

/// Validates the cloud invariants (non-empty, all coordinates finite).
void validate(const PointCloud& cloud);

/// Closed-form least-squares rigid transform (cross-covariance SVD, no
/// scaling) mapping src[i] onto dst[i]. Reflections are repaired by flipping
/// the smallest singular direction. Requires src.size() == dst.size() >= 3.
RigidTransform fit_rigid(std::span<const Eigen::Vector3d> src,
                         std::span<const Eigen::Vector3d> dst);

/// Three-point absolute-orientation alignment used as the loose first stage.
/// Both triplets must span a triangle with area > 1e-6 mm^2; exact when the
/// triplets are congruent. Throws CollinearPoints otherwise.
RigidTransform coarse_align(const std::array<Eigen::Vector3d, 3>& src3,
                            const std::array<Eigen::Vector3d, 3>& dst3);

struct IcpParams {
  int max_iterations = 100;
  double convergence_delta = 1e-6;         // mm of RMSE improvement
  double max_correspondence_distance = 10;  // mm
  bool parallel_matching = true;            // OpenMP inner pass; bit-identical to serial
};

/// Per-iteration record: RMSE over the iteration's correspondence set before
/// and after the closed-form update. rmse_after <= rmse_before always (the
/// update is the global minimizer over the fixed set).
struct IcpIteration {
  double rmse_before;
  double rmse_after;
  int correspondences;
};

struct IcpResult {
  RigidTransform transform;  // maps source-frame coordinates into the target frame
  double rmse = 0.0;         // over the final correspondence set, mm
  int iterations = 0;
  bool converged = false;
  int correspondence_count = 0;
  std::vector<IcpIteration> trace;
};

/// Point-to-point ICP minimizing E(T) = sum ||p - T q||^2 over nearest-
/// neighbor correspondences gated at max_correspondence_distance. Stops when
/// the within-iteration RMSE improvement drops below convergence_delta or at
/// the iteration cap. Throws NoCorrespondences when the gate empties at any
/// iteration (initialization too far off).
IcpResult icp(const PointCloud& source, const PointCloud& target, const RigidTransform& init,
              const IcpParams& params = {});

struct RegistrationResult {
  RigidTransform coarse;  // stage-1 transform from the picked triplets
  IcpResult icp;          // stage-2 refinement (final transform lives here)
};

/// Dual-stage registration: coarse_align on the picked triplets, then ICP
/// seeded with it. The returned transform maps `digitized`-frame coordinates
/// into the `ct_model` frame; consumers wanting the opposite direction invert.
RegistrationResult register_dual_stage(const PointCloud& digitized, const PointCloud& ct_model,
                                       const std::array<Eigen::Vector3d, 3>& picked_src,
                                       const std::array<Eigen::Vector3d, 3>& picked_dst,
                                       const IcpParams& params = {});

}  // namespace spinenav
