#include "spinenav/handeye.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

namespace spinenav {

namespace {

constexpr double kNullSpaceGap = 1e-8;

// kron(I3, R): block-diagonal, carries vec(R * M) = kron(I3, R) vec(M).
void put_kron_identity_rot(Eigen::MatrixXd& m, Eigen::Index row, Eigen::Index col,
                           const Eigen::Matrix3d& r, double sign) {
  for (int b = 0; b < 3; ++b) {
    m.block<3, 3>(row + 3 * b, col + 3 * b) = sign * r;
  }
}

// kron(R^T, I3): carries vec(M * R) = kron(R^T, I3) vec(M).
void put_kron_rot_identity(Eigen::MatrixXd& m, Eigen::Index row, Eigen::Index col,
                           const Eigen::Matrix3d& r, double sign) {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      m.block<3, 3>(row + 3 * i, col + 3 * j) =
          sign * r(j, i) * Eigen::Matrix3d::Identity();
    }
  }
}

Eigen::Matrix3d unvec(const Eigen::VectorXd& v, Eigen::Index offset) {
  Eigen::Matrix3d m;  // column-major, matching the vectorization above
  for (int c = 0; c < 3; ++c) {
    for (int r = 0; r < 3; ++r) {
      m(r, c) = v(offset + 3 * c + r);
    }
  }
  return m;
}

}  // namespace

HandEyeResult solve_handeye(const HandEyeDataset& dataset) {
  if (dataset.a_poses.size() != dataset.b_poses.size()) {
    throw InvalidParamsError("hand-eye pose streams must be index-aligned (equal lengths)");
  }
  const auto n = static_cast<Eigen::Index>(dataset.a_poses.size());
  if (n < 3) {
    throw InsufficientDataError("hand-eye calibration needs at least 3 pose pairs");
  }

  // Stage 1: rotations. vec(R_Ai R_X) - vec(R_Z R_Bi) = 0 stacked over i.
  Eigen::MatrixXd rot_system = Eigen::MatrixXd::Zero(9 * n, 18);
  for (Eigen::Index i = 0; i < n; ++i) {
    put_kron_identity_rot(rot_system, 9 * i, 0, dataset.a_poses[i].rotation(), 1.0);
    put_kron_rot_identity(rot_system, 9 * i, 9, dataset.b_poses[i].rotation(), -1.0);
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> rot_svd(rot_system, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = rot_svd.singularValues();
  if (sv(16) < kNullSpaceGap) {
    throw DegenerateMotionError(
        "rotation axes are coplanar or share a single direction; X and Z are unobservable");
  }

  Eigen::VectorXd null_dir = rot_svd.matrixV().col(17);
  if (unvec(null_dir, 0).determinant() < 0) {
    null_dir = -null_dir;
  }
  const Eigen::Matrix3d rot_x = orthonormalize(unvec(null_dir, 0));
  const Eigen::Matrix3d rot_z = orthonormalize(unvec(null_dir, 9));

  // Stage 2: translations with rotations fixed.
  //   R_Ai t_X - t_Z = R_Z t_Bi - t_Ai
  Eigen::MatrixXd trans_system(3 * n, 6);
  Eigen::VectorXd trans_rhs(3 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    trans_system.block<3, 3>(3 * i, 0) = dataset.a_poses[i].rotation();
    trans_system.block<3, 3>(3 * i, 3) = -Eigen::Matrix3d::Identity();
    trans_rhs.segment<3>(3 * i) =
        rot_z * dataset.b_poses[i].translation() - dataset.a_poses[i].translation();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> trans_svd(trans_system,
                                              Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd trans = trans_svd.solve(trans_rhs);

  HandEyeResult result;
  result.x = RigidTransform(rot_x, trans.head<3>());
  result.z = RigidTransform(rot_z, trans.tail<3>());

  double rot_residual = 0.0;
  double trans_residual = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const RigidTransform lhs = compose(dataset.a_poses[i], result.x);
    const RigidTransform rhs = compose(result.z, dataset.b_poses[i]);
    rot_residual += (lhs.rotation() - rhs.rotation()).norm();
    trans_residual += (lhs.translation() - rhs.translation()).norm();
  }
  result.rotation_residual = rot_residual / static_cast<double>(n);
  result.translation_residual = trans_residual / static_cast<double>(n);
  return result;
}

}  // namespace spinenav
