#include "spinenav/trajectory.hpp"

#include <cmath>
#include <numbers>

namespace spinenav {

void validate(const JShapePlan& plan) {
  if (!plan.entry_point.allFinite()) {
    throw InvalidPlanError("entry point has non-finite coordinates");
  }
  if (std::abs(plan.entry_direction.norm() - 1.0) > 1e-9) {
    throw InvalidPlanError("entry direction must be a unit vector");
  }
  if (std::abs(plan.bend_plane_normal.norm() - 1.0) > 1e-9) {
    throw InvalidPlanError("bend plane normal must be a unit vector");
  }
  if (std::abs(plan.entry_direction.dot(plan.bend_plane_normal)) >= 1e-9) {
    throw InvalidPlanError("bend plane normal must be orthogonal to the entry direction");
  }
  if (!(plan.straight_length > 0)) {
    throw InvalidPlanError("straight length must be positive");
  }
  if (!(plan.arc_radius > 0)) {
    throw InvalidPlanError("arc radius must be positive");
  }
  if (plan.arc_length < 0 || plan.arc_length > std::numbers::pi * plan.arc_radius) {
    throw InvalidPlanError("arc length must lie in [0, pi * radius] (at most a half circle)");
  }
  if (!(plan.sample_spacing > 0)) {
    throw InvalidPlanError("sample spacing must be positive");
  }
}

Centerline plan_jshape(const JShapePlan& plan) {
  validate(plan);

  const Eigen::Vector3d dir = plan.entry_direction;
  const Eigen::Vector3d bend = dir.cross(plan.bend_plane_normal);
  const Eigen::Vector3d junction = plan.entry_point + plan.straight_length * dir;

  Centerline line;
  line.straight_length = plan.straight_length;
  line.total_length = plan.straight_length + plan.arc_length;

  const auto straight_steps =
      static_cast<int>(std::ceil(plan.straight_length / plan.sample_spacing));
  for (int i = 0; i <= straight_steps; ++i) {
    const double s = plan.straight_length * static_cast<double>(i) /
                     static_cast<double>(straight_steps);
    line.samples.push_back({plan.entry_point + s * dir, dir, s});
  }

  if (plan.arc_length > 0) {
    const auto arc_steps = static_cast<int>(std::ceil(plan.arc_length / plan.sample_spacing));
    for (int i = 1; i <= arc_steps; ++i) {
      const double s = plan.arc_length * static_cast<double>(i) / static_cast<double>(arc_steps);
      const double theta = s / plan.arc_radius;
      const Eigen::Vector3d position = junction +
                                       plan.arc_radius * std::sin(theta) * dir +
                                       plan.arc_radius * (1.0 - std::cos(theta)) * bend;
      const Eigen::Vector3d tangent = std::cos(theta) * dir + std::sin(theta) * bend;
      line.samples.push_back({position, tangent, plan.straight_length + s});
    }
  }
  return line;
}

void validate(const ExecutionProfile& profile) {
  if (!(profile.straight_speed > 0) || !(profile.curved_speed > 0) ||
      !(profile.drill_speed > 0) || !(profile.retraction_speed > 0)) {
    throw InvalidParamsError("all execution speeds must be positive");
  }
}

ExecutionTimeline execution_timeline(const JShapePlan& plan, const ExecutionProfile& profile) {
  validate(plan);
  validate(profile);
  ExecutionTimeline t;
  t.straight_duration = plan.straight_length / profile.straight_speed;
  t.curved_duration = plan.arc_length / profile.curved_speed;
  t.retraction_duration = (plan.straight_length + plan.arc_length) / profile.retraction_speed;
  t.total = t.straight_duration + t.curved_duration + t.retraction_duration;
  return t;
}

SafetyMargin check_safety(const Centerline& centerline, const Line& canal_axis,
                          double canal_diameter, double tunnel_diameter) {
  if (!(canal_diameter > tunnel_diameter)) {
    throw InvalidParamsError("canal diameter must exceed the tunnel diameter");
  }
  if (centerline.samples.empty()) {
    throw InvalidParamsError("centerline has no samples");
  }
  const Eigen::Vector3d axis = canal_axis.direction.normalized();
  const double wall_clearance = (canal_diameter - tunnel_diameter) / 2.0;

  double min_margin = std::numeric_limits<double>::infinity();
  for (const CenterlineSample& sample : centerline.samples) {
    if (sample.arclength - centerline.straight_length > 1e-9) break;
    const Eigen::Vector3d rel = sample.position - canal_axis.point;
    const double offset = (rel - rel.dot(axis) * axis).norm();
    min_margin = std::min(min_margin, wall_clearance - offset);
  }

  SafetyMargin result;
  result.min_margin = min_margin;
  result.breach = min_margin < 0.0 ? -min_margin : 0.0;
  result.pass = result.breach < kBreachThresholdMm;
  return result;
}

}  // namespace spinenav
