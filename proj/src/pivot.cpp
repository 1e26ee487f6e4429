#include "spinenav/pivot.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace spinenav {

namespace {
constexpr double kConditionLimit = 1e6;
}

PivotResult solve_pivot(const PivotDataset& dataset) {
  const auto n = static_cast<Eigen::Index>(dataset.poses.size());
  if (n < 3) {
    throw InsufficientDataError("pivot calibration needs at least 3 poses");
  }

  Eigen::MatrixXd stack(3 * n, 6);
  Eigen::VectorXd rhs(3 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    stack.block<3, 3>(3 * i, 0) = dataset.poses[i].rotation();
    stack.block<3, 3>(3 * i, 3) = -Eigen::Matrix3d::Identity();
    rhs.segment<3>(3 * i) = -dataset.poses[i].translation();
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stack, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double condition = sv(5) > 0.0 ? sv(0) / sv(5) : std::numeric_limits<double>::infinity();
  if (!(condition <= kConditionLimit)) {
    throw DegenerateMotionError("pivot sweep lacks rotational diversity (condition number " +
                                std::to_string(condition) + ")");
  }

  const Eigen::VectorXd solution = svd.solve(rhs);
  const double residual_rms = std::sqrt((stack * solution - rhs).squaredNorm() /
                                        static_cast<double>(3 * n));

  PivotResult result;
  result.x_tip = solution.head<3>();
  result.x_pivot = solution.tail<3>();
  result.residual_rms = residual_rms;
  result.condition_number = condition;
  return result;
}

}  // namespace spinenav
