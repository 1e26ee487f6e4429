#include "spinenav/registration.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "spinenav/spatial_index.hpp"

namespace spinenav {

void validate(const PointCloud& cloud) {
  if (cloud.points.empty()) {
    throw InvalidParamsError("point cloud is empty");
  }
  for (const auto& p : cloud.points) {
    if (!p.allFinite()) {
      throw InvalidParamsError("point cloud contains non-finite coordinates");
    }
  }
}

RigidTransform fit_rigid(std::span<const Eigen::Vector3d> src,
                         std::span<const Eigen::Vector3d> dst) {
  if (src.size() != dst.size()) {
    throw InvalidParamsError("rigid fit needs equally sized point sets");
  }
  if (src.size() < 3) {
    throw InsufficientDataError("rigid fit needs at least 3 correspondences");
  }
  const double inv_n = 1.0 / static_cast<double>(src.size());

  Eigen::Vector3d src_centroid = Eigen::Vector3d::Zero();
  Eigen::Vector3d dst_centroid = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < src.size(); ++i) {
    src_centroid += src[i];
    dst_centroid += dst[i];
  }
  src_centroid *= inv_n;
  dst_centroid *= inv_n;

  Eigen::Matrix3d cross_cov = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < src.size(); ++i) {
    cross_cov += (src[i] - src_centroid) * (dst[i] - dst_centroid).transpose();
  }

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(cross_cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Matrix3d u = svd.matrixU();
  const Eigen::Matrix3d v = svd.matrixV();
  Eigen::Vector3d signs(1.0, 1.0, (v * u.transpose()).determinant() < 0 ? -1.0 : 1.0);
  const Eigen::Matrix3d rotation = v * signs.asDiagonal() * u.transpose();
  return {rotation, dst_centroid - rotation * src_centroid};
}

RigidTransform coarse_align(const std::array<Eigen::Vector3d, 3>& src3,
                            const std::array<Eigen::Vector3d, 3>& dst3) {
  const auto area = [](const std::array<Eigen::Vector3d, 3>& t) {
    return 0.5 * (t[1] - t[0]).cross(t[2] - t[0]).norm();
  };
  if (area(src3) <= 1e-6 || area(dst3) <= 1e-6) {
    throw CollinearPointsError("picked triplet is collinear (triangle area <= 1e-6 mm^2)");
  }
  return fit_rigid(src3, dst3);
}

namespace {

double rmse_over(const std::vector<Eigen::Vector3d>& src, const std::vector<Eigen::Vector3d>& dst,
                 const RigidTransform& t) {
  double sum = 0.0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    sum += (dst[i] - apply(t, src[i])).squaredNorm();
  }
  return std::sqrt(sum / static_cast<double>(src.size()));
}

}  // namespace

IcpResult icp(const PointCloud& source, const PointCloud& target, const RigidTransform& init,
              const IcpParams& params) {
  validate(source);
  validate(target);
  if (params.max_iterations < 1 || params.convergence_delta < 0 ||
      params.max_correspondence_distance <= 0) {
    throw InvalidParamsError("invalid ICP parameters");
  }

  const KdTree3 tree(target.points);

  IcpResult result;
  result.transform = init;

  std::vector<Eigen::Vector3d> transformed(source.points.size());
  std::vector<Eigen::Vector3d> matched_src;
  std::vector<Eigen::Vector3d> matched_dst;

  for (int iteration = 1; iteration <= params.max_iterations; ++iteration) {
    for (std::size_t i = 0; i < source.points.size(); ++i) {
      transformed[i] = apply(result.transform, source.points[i]);
    }
    const std::vector<int> slots =
        match_correspondences(tree, transformed, params.max_correspondence_distance,
                              params.parallel_matching);

    matched_src.clear();
    matched_dst.clear();
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (slots[i] >= 0) {
        matched_src.push_back(source.points[i]);
        matched_dst.push_back(target.points[slots[i]]);
      }
    }
    if (matched_src.size() < 3) {
      throw NoCorrespondencesError(
          "correspondence set collapsed at iteration " + std::to_string(iteration) +
          " (initial alignment too far from the target?)");
    }

    const double rmse_before = rmse_over(matched_src, matched_dst, result.transform);
    const RigidTransform updated = fit_rigid(matched_src, matched_dst);
    const double rmse_after = rmse_over(matched_src, matched_dst, updated);

    result.transform = updated;
    result.rmse = rmse_after;
    result.iterations = iteration;
    result.correspondence_count = static_cast<int>(matched_src.size());
    result.trace.push_back({rmse_before, rmse_after,
                            static_cast<int>(matched_src.size())});

    if (rmse_before - rmse_after < params.convergence_delta) {
      result.converged = true;
      break;
    }
  }
  return result;
}

RegistrationResult register_dual_stage(const PointCloud& digitized, const PointCloud& ct_model,
                                       const std::array<Eigen::Vector3d, 3>& picked_src,
                                       const std::array<Eigen::Vector3d, 3>& picked_dst,
                                       const IcpParams& params) {
  RegistrationResult result;
  result.coarse = coarse_align(picked_src, picked_dst);
  result.icp = icp(digitized, ct_model, result.coarse, params);
  return result;
}

}  // namespace spinenav
