#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "spinenav/geometry.hpp"
#include "spinenav/trajectory.hpp"

namespace spinenav {

/// Named points in a common frame (verification stars, entry point, ...).
struct LandmarkSet {
  std::map<std::string, Eigen::Vector3d> points;  // mm
  FrameId frame = FrameId::CT;
};

struct LandmarkError {
  std::map<std::string, double> per_point;  // mm
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (0 for a single point)
};

/// Per-point Euclidean distances between equally named landmarks, plus their
/// mean and sample standard deviation. Throws NameMismatch when the name sets
/// differ and InvalidParams when the frames do.
LandmarkError landmark_error(const LandmarkSet& measured, const LandmarkSet& reference);

struct CircleFit {
  Eigen::Vector3d center;        // mm
  double radius = 0.0;           // mm
  Eigen::Vector3d plane_normal;  // unit
  double rms_residual = 0.0;     // RMS 3D distance of the samples to the circle, mm
};

/// Plane fit by principal components, projection, then the algebraic (Kasa)
/// least-squares circle in-plane. Throws CollinearPoints for < 3 points, for
/// points on a line, and when the fitted radius degenerates past 1e6 mm.
CircleFit fit_circle(const std::vector<Eigen::Vector3d>& points);

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;
};

MeanStd mean_std(const std::vector<double>& values);

/// Everything scored in one simulation trial. Estimator outputs sit next to
/// the ground-truth comparisons the report aggregates.
struct TrialRecord {
  int trial = 0;
  bool success = false;
  std::string error;  // non-empty only for failed trials

  double pivot_residual_rms = 0.0;
  double pivot_tip_error = 0.0;    // |estimated - true tool tip|, mm
  double pivot_point_error = 0.0;  // |estimated - true pivot point|, mm
  double pivot_condition_number = 0.0;

  double handeye_rotation_residual = 0.0;
  double handeye_translation_residual = 0.0;
  double handeye_x_rotation_error = 0.0;  // Frobenius vs ground truth
  double handeye_x_translation_error = 0.0;
  double handeye_z_rotation_error = 0.0;
  double handeye_z_translation_error = 0.0;

  double icp_rmse = 0.0;
  int icp_iterations = 0;
  bool icp_converged = false;
  int icp_correspondences = 0;
  double registration_rotation_error = 0.0;  // estimated vs true CT<->S edge
  double registration_translation_error = 0.0;

  double placement_error_mean = 0.0;  // commanded vs true centerline, mm
  double placement_error_max = 0.0;

  double fitted_radius = 0.0;
  double radius_error = 0.0;  // |fitted - planned|, mm

  double total_calibration_error = 0.0;  // 5-landmark mean chained error, mm
  std::map<std::string, double> landmark_errors;
};

/// Table-1-shaped summary: aggregate errors in mm, durations in s, plus the
/// per-trial detail they were computed from.
struct PipelineReport {
  std::string phantom_label;
  std::uint64_t seed = 0;
  int trials_requested = 0;
  int trials_succeeded = 0;

  MeanStd icp_error;                  // correspondence-set RMSE, mm
  MeanStd total_calibration_error;    // 5-landmark verification, mm
  double ideal_radius = 0.0;          // planned, mm
  MeanStd fitted_radius;              // recovered from readouts, mm
  MeanStd radius_abs_error;           // |fitted - ideal|, mm
  MeanStd placement_error;            // commanded-path deviation, mm

  ExecutionTimeline timeline{};
  double procedure_time = 0.0;  // s, = timeline.total

  std::vector<TrialRecord> trials;
};

/// Aggregates trial records (successful trials only) into the report.
PipelineReport build_report(const std::string& phantom_label, std::uint64_t seed,
                            double ideal_radius, const ExecutionTimeline& timeline,
                            const std::vector<TrialRecord>& trials);

}  // namespace spinenav
