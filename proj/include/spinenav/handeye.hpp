#pragma once

#include <vector>

#include "spinenav/geometry.hpp"

namespace spinenav {

/// Index-aligned pose pairs for the AX = ZB problem.
///
/// a_poses[i] is the tracked-tool pose stream seen from the optical tracker,
/// expressed as tool-from-tracker (T_{Tool<-OT}); b_poses[i] is the robot
/// stream expressed as end-effector-from-base (T_{KukaEE<-S}). With those
/// directions the chain
///   a_poses[i] * X = Z * b_poses[i]
/// holds exactly for X = tracker-from-base (T_{OT<-S}) and
/// Z = tool-from-end-effector (T_{Tool<-KukaEE}).
struct HandEyeDataset {
  std::vector<RigidTransform> a_poses;
  std::vector<RigidTransform> b_poses;
};

struct HandEyeResult {
  RigidTransform x;  // tracker-from-base: frame-graph edge (S, OT)
  RigidTransform z;  // tool-from-end-effector: frame-graph edge (KukaEE, Tool)
  double rotation_residual;     // mean Frobenius norm of A_i X - Z B_i rotation blocks
  double translation_residual;  // mean Euclidean norm of the translation residuals, mm
};

/// Two-stage linear solution of AX = ZB.
///
/// Stage 1 stacks the rotation constraints R_Ai R_X = R_Z R_Bi via
/// Kronecker-product vectorization into a 9n x 18 homogeneous system and takes
/// the SVD null-space direction; the sign is fixed so det(R_X) > 0 before both
/// blocks are re-orthonormalized. Stage 2 solves the stacked 3n x 6 system
/// R_Ai t_X - t_Z = R_Z t_Bi - t_Ai for the translations with the rotations
/// held fixed.
///
/// Throws InsufficientData for n < 3 and DegenerateMotion when the rotation
/// system's null space is more than one-dimensional (second-smallest singular
/// value below 1e-8), which happens when all motion shares one rotation axis.
HandEyeResult solve_handeye(const HandEyeDataset& dataset);

}  // namespace spinenav
