#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spinenav/geometry.hpp"

namespace spinenav {

/// Infinite line: point + unit direction.
struct Line {
  Eigen::Vector3d point = Eigen::Vector3d::Zero();
  Eigen::Vector3d direction = Eigen::Vector3d::UnitZ();
};

/// J-shape drilling plan: a straight pedicle segment followed by a tangent-
/// continuous circular arc. The arc bends within the plane spanned by
/// entry_direction and entry_direction x bend_plane_normal. arc_length == 0
/// degenerates to a straight-only plan; more than a half circle is rejected.
struct JShapePlan {
  Eigen::Vector3d entry_point = Eigen::Vector3d::Zero();  // CT frame, mm
  Eigen::Vector3d entry_direction = Eigen::Vector3d::UnitZ();
  double straight_length = 27.0;  // mm
  double arc_radius = 69.5;       // mm
  double arc_length = 35.0;       // mm
  Eigen::Vector3d bend_plane_normal = Eigen::Vector3d::UnitX();
  double sample_spacing = 0.5;  // mm
};

/// Throws InvalidPlan when any plan invariant is violated.
void validate(const JShapePlan& plan);

struct CenterlineSample {
  Eigen::Vector3d position;  // mm
  Eigen::Vector3d tangent;   // unit
  double arclength;          // mm from the entry point
};

struct Centerline {
  std::vector<CenterlineSample> samples;
  double straight_length = 0.0;  // arclength of the straight/arc junction
  double total_length = 0.0;
};

/// Samples the plan at spacing <= sample_spacing (endpoints and the junction
/// included). Arc samples sit on the exact circle; tangents are continuous
/// across the junction.
Centerline plan_jshape(const JShapePlan& plan);

struct ExecutionProfile {
  double straight_speed = 1.0;    // mm/s
  double curved_speed = 2.5;      // mm/s
  double drill_speed = 8250.0;    // rpm
  double retraction_speed = 5.0;  // mm/s
};

void validate(const ExecutionProfile& profile);

struct ExecutionTimeline {
  double straight_duration;    // s
  double curved_duration;      // s
  double retraction_duration;  // s
  double total;                // s
};

ExecutionTimeline execution_timeline(const JShapePlan& plan, const ExecutionProfile& profile);

/// Clearance of the straight segment inside the pedicle canal.
struct SafetyMargin {
  double min_margin;  // mm; negative when the tunnel wall breaches the canal
  double breach;      // mm of wall violation, 0 when min_margin >= 0
  bool pass;          // breach < 4 mm (surgical consensus threshold)
};

inline constexpr double kBreachThresholdMm = 4.0;

/// min over straight-segment samples of (canal_diameter - tunnel_diameter)/2
/// minus the radial offset from the canal axis. Requires
/// canal_diameter > tunnel_diameter.
SafetyMargin check_safety(const Centerline& centerline, const Line& canal_axis,
                          double canal_diameter, double tunnel_diameter);

}  // namespace spinenav
