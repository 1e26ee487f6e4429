#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spinenav/geometry.hpp"

namespace spinenav {

/// End-effector poses (in the robot base frame S) collected while pivoting
/// the mounted tool about a fixed point.
struct PivotDataset {
  std::vector<RigidTransform> poses;
};

struct PivotResult {
  Eigen::Vector3d x_tip;    // tool tip in the end-effector frame, mm
  Eigen::Vector3d x_pivot;  // pivot point in the base frame S, mm
  double residual_rms;      // RMS of the stacked residual components, mm
  double condition_number;  // extreme singular-value ratio of the stacked matrix
};

/// Least-squares solution of the stacked 3n x 6 system
///   [ R_i | -I ] [ x_tip ; x_pivot ] = -p_i
/// via SVD (never normal equations). Throws InsufficientData for n < 3 and
/// DegenerateMotion when the stack's condition number exceeds 1e6 (pivot
/// sweeps with no usable rotational diversity).
PivotResult solve_pivot(const PivotDataset& dataset);

}  // namespace spinenav
