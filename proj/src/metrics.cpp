#include "spinenav/metrics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace spinenav {

LandmarkError landmark_error(const LandmarkSet& measured, const LandmarkSet& reference) {
  if (measured.points.empty() || reference.points.empty()) {
    throw InvalidParamsError("landmark sets must be non-empty");
  }
  if (measured.frame != reference.frame) {
    throw InvalidParamsError("landmark sets live in different frames");
  }
  if (measured.points.size() != reference.points.size()) {
    throw NameMismatchError("landmark sets have different sizes");
  }

  LandmarkError result;
  std::vector<double> distances;
  distances.reserve(measured.points.size());
  for (const auto& [name, point] : measured.points) {
    auto it = reference.points.find(name);
    if (it == reference.points.end()) {
      throw NameMismatchError("landmark '" + name + "' missing from the reference set");
    }
    const double d = (point - it->second).norm();
    result.per_point[name] = d;
    distances.push_back(d);
  }
  const MeanStd stats = mean_std(distances);
  result.mean = stats.mean;
  result.stddev = stats.stddev;
  return result;
}

CircleFit fit_circle(const std::vector<Eigen::Vector3d>& points) {
  if (points.size() < 3) {
    throw CollinearPointsError("circle fit needs at least 3 points");
  }

  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const auto& p : points) centroid += p;
  centroid /= static_cast<double>(points.size());

  Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
  for (const auto& p : points) {
    const Eigen::Vector3d d = p - centroid;
    scatter += d * d.transpose();
  }

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(scatter);
  const Eigen::Vector3d evals = eig.eigenvalues();  // ascending
  if (evals(1) <= 1e-12 * std::max(evals(2), 1.0)) {
    throw CollinearPointsError("points lie on a line; no circle is defined");
  }
  const Eigen::Vector3d normal = eig.eigenvectors().col(0);
  const Eigen::Vector3d e1 = eig.eigenvectors().col(2);
  const Eigen::Vector3d e2 = eig.eigenvectors().col(1);

  // Kasa: u^2 + v^2 = 2a u + 2b v + c, linear in (a, b, c).
  Eigen::MatrixXd system(points.size(), 3);
  Eigen::VectorXd rhs(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Eigen::Vector3d d = points[i] - centroid;
    const double u = d.dot(e1);
    const double v = d.dot(e2);
    system(static_cast<Eigen::Index>(i), 0) = 2.0 * u;
    system(static_cast<Eigen::Index>(i), 1) = 2.0 * v;
    system(static_cast<Eigen::Index>(i), 2) = 1.0;
    rhs(static_cast<Eigen::Index>(i)) = u * u + v * v;
  }
  const Eigen::Vector3d sol =
      system.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
  const double radius_sq = sol(2) + sol(0) * sol(0) + sol(1) * sol(1);
  if (!(radius_sq > 0) || std::sqrt(radius_sq) > 1e6) {
    throw CollinearPointsError("circle fit degenerated (near-straight samples)");
  }

  CircleFit fit;
  fit.radius = std::sqrt(radius_sq);
  fit.center = centroid + sol(0) * e1 + sol(1) * e2;
  fit.plane_normal = normal;

  double sq_sum = 0.0;
  for (const auto& p : points) {
    const Eigen::Vector3d rel = p - fit.center;
    const double along_normal = rel.dot(normal);
    const Eigen::Vector3d in_plane = rel - along_normal * normal;
    const double ring = in_plane.norm() - fit.radius;
    sq_sum += along_normal * along_normal + ring * ring;
  }
  fit.rms_residual = std::sqrt(sq_sum / static_cast<double>(points.size()));
  return fit;
}

MeanStd mean_std(const std::vector<double>& values) {
  MeanStd out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - out.mean) * (v - out.mean);
    out.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return out;
}

PipelineReport build_report(const std::string& phantom_label, std::uint64_t seed,
                            double ideal_radius, const ExecutionTimeline& timeline,
                            const std::vector<TrialRecord>& trials) {
  PipelineReport report;
  report.phantom_label = phantom_label;
  report.seed = seed;
  report.ideal_radius = ideal_radius;
  report.timeline = timeline;
  report.procedure_time = timeline.total;
  report.trials = trials;
  report.trials_requested = static_cast<int>(trials.size());

  std::vector<double> icp, total, fitted, radius_err, placement;
  for (const TrialRecord& t : trials) {
    if (!t.success) continue;
    ++report.trials_succeeded;
    icp.push_back(t.icp_rmse);
    total.push_back(t.total_calibration_error);
    fitted.push_back(t.fitted_radius);
    radius_err.push_back(t.radius_error);
    placement.push_back(t.placement_error_mean);
  }
  report.icp_error = mean_std(icp);
  report.total_calibration_error = mean_std(total);
  report.fitted_radius = mean_std(fitted);
  report.radius_abs_error = mean_std(radius_err);
  report.placement_error = mean_std(placement);
  return report;
}

}  // namespace spinenav
