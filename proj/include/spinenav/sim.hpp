#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "spinenav/geometry.hpp"
#include "spinenav/handeye.hpp"
#include "spinenav/metrics.hpp"
#include "spinenav/pivot.hpp"
#include "spinenav/registration.hpp"
#include "spinenav/rng.hpp"
#include "spinenav/trajectory.hpp"

namespace spinenav {

/// Parametric surface patch of the synthetic phantom. Points are addressable
/// by (u, v) in [0,1]^2 so the digitizer model can land between grid vertices.
struct SurfacePatch {
  enum class Kind { CylinderSide, Disk, Rect };
  Kind kind = Kind::Rect;
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();
  Eigen::Vector3d axis_a = Eigen::Vector3d::UnitZ();  // cylinder/disk axis, or rect half-extent u
  Eigen::Vector3d axis_b = Eigen::Vector3d::UnitX();  // radial reference, or rect half-extent v
  double r0 = 0.0;  // cylinder radius / disk inner radius
  double r1 = 0.0;  // cylinder height / disk outer radius

  Eigen::Vector3d evaluate(double u, double v) const;
  void metrics(double u, double v, double& mm_per_u, double& mm_per_v) const;
  bool u_periodic() const { return kind != Kind::Rect; }
};

/// Patch coordinates of one surface-cloud vertex.
struct SurfaceParam {
  int patch = 0;
  double u = 0.0;
  double v = 0.0;
};

/// Synthetic vertebra stand-in: parametric body cylinder plus posterior
/// process boxes, sampled into a CT-frame surface cloud. Landmarks hold the
/// 5 verification stars plus the pedicle entry point ("entry"); shape detail
/// is deliberately low — the pipeline only needs surface overlap and landmark
/// placement.
struct Phantom {
  PointCloud surface;      // CT frame
  LandmarkSet landmarks;   // 5 verification points + "entry"
  Line canal_axis;         // pedicle channel: entry point + drilling direction
  double canal_diameter = 13.0;  // mm
  std::string label;

  std::vector<SurfacePatch> patches;        // parametric handles for the digitizer
  std::vector<SurfaceParam> surface_params;  // aligned with surface.points

  /// Names of the 5 verification landmarks (excludes "entry").
  static const std::array<std::string, 5>& verification_names();
};

struct PhantomParams {
  double body_radius = 22.0;
  double body_height = 32.0;
  double canal_gap = 14.0;           // body wall to posterior arch
  double spinous_half_depth = 15.0;  // along +y
  double spinous_half_width = 4.5;
  double spinous_half_height = 5.5;
  double lamina_offset_x = 11.0;
  double lamina_half_x = 7.0;
  double lamina_half_y = 4.0;
  double lamina_half_z = 7.0;
  double transverse_tip_x = 36.5;  // lateral half-span
  double transverse_half_x = 7.5;
  double transverse_half_y = 3.5;
  double transverse_half_z = 3.0;
  double entry_offset_x = 13.0;       // pedicle mouth, lateral
  double entry_offset_y = 7.0;        // above the body wall
  double entry_medial_angle_deg = 15.0;
  double canal_diameter = 13.0;
  double surface_spacing = 1.25;  // grid pitch, mm
};

/// Bundled presets; throws InvalidParams for labels other than "L3"/"T12".
PhantomParams phantom_preset(const std::string& label);

Phantom generate_phantom(const std::string& label);
Phantom generate_phantom(const std::string& label, const PhantomParams& params);

/// Sensor-noise amplitudes. The optical sigmas perturb tracked poses; the
/// digitizer sigma is the stylus measurement error (and scales the tangential
/// placement scatter); the magnetic sigma scales the pulled-through readout's
/// systematic distortion (see README). All mm / rad; seed drives every draw.
struct NoiseModel {
  double optical_translation_sigma = 0.12;  // mm
  double optical_rotation_sigma = 0.001;    // rad, axis-angle magnitude
  double digitizer_sigma = 0.3;             // mm
  double magnetic_sigma = 0.7;              // mm
  std::uint64_t seed = 1;
};

/// Pose corrupted by the optical noise model: translation += isotropic
/// Gaussian, rotation left-composed with a random-axis rotation of Gaussian
/// magnitude. Draws come from `rng` (deterministic under its seed).
RigidTransform simulate_measurement(const RigidTransform& true_pose, const NoiseModel& noise,
                                    Rng& rng);

/// One-shot variant seeding a fresh stream from noise.seed.
RigidTransform simulate_measurement(const RigidTransform& true_pose, const NoiseModel& noise);

/// Pose-synthesis knobs for the simulated data collection. Defaults are tuned
/// so the default NoiseModel lands the report in the paper-scale error bands;
/// they are design choices, not measured hardware values.
struct SimGeometry {
  int pivot_poses = 12;
  double pivot_cone_deg = 25.0;        // wrist sweep half-angle
  Eigen::Vector3d pivot_point{600.0, -150.0, 350.0};  // dimple location, frame S
  int handeye_poses = 10;
  double handeye_rotation_deg = 20.0;  // rotation excitation half-range
  double handeye_translation_range = 250.0;  // mm, cube edge around the workspace center
  Eigen::Vector3d workspace_center{600.0, -100.0, 400.0};  // frame S
  int digitizer_samples = 80;
  double digitizer_scatter_factor = 10.0;  // tangential scatter = factor * digitizer_sigma
  double readout_spacing = 0.5;            // magnetic readout pitch, mm
};

struct SimConfig {
  Phantom phantom;
  JShapePlan plan;
  ExecutionProfile profile;
  NoiseModel noise;
  int trials = 3;
  SimGeometry geometry;
  /// Hidden truth, used only to synthesize measurements and score estimates:
  /// edges (S,OT) = tracker-from-base, (KukaEE,Tool), (KukaEE,Tip), (CT,S).
  FrameGraph ground_truth_frames;
  int threads = 0;  // trial parallelism; 0 = all cores, 1 = serial
};

/// Bundled L3/T12 setups: preset phantom, its J-shape plan (69.5 mm / 35 mm
/// radius), default profile/noise/geometry, fixed ground-truth frames.
SimConfig default_config(const std::string& label);

/// Ground-truth frame set used by the bundled configs.
FrameGraph default_ground_truth();

/// Stylus samples of the phantom surface, CT frame: vertex positions jittered
/// tangentially by scatter_mm along the parametric surface (they stay on the
/// true surface; scatter 0 touches exact vertices). Measurement noise is NOT
/// added here — callers apply it in the frame the sensor reports in.
std::vector<Eigen::Vector3d> digitize_surface(const Phantom& phantom, int count,
                                              double scatter_mm, Rng& rng);

/// Everything one trial measured, with no ground-truth content beyond what a
/// real data collection would hand the estimators.
struct TrialMeasurements {
  PivotDataset pivot;                         // robot poses, frame S
  HandEyeDataset handeye;                     // index-aligned A/B streams
  std::vector<Eigen::Vector3d> digitized_ot;  // stylus points, tracker frame
  std::array<Eigen::Vector3d, 3> picks_ot;    // picked landmarks, tracker frame
  std::array<Eigen::Vector3d, 3> picks_ct;    // matching CT-model coordinates
  std::vector<Eigen::Vector3d> readout_arc;   // magnetic readout of the arc
};

struct TrialEstimates {
  PivotResult pivot;
  HandEyeResult handeye;
  RegistrationResult registration;  // transform maps estimated-world -> CT
  CircleFit arc_fit;
};

/// Synthesizes one trial's measurements from the hidden ground truth.
TrialMeasurements synthesize_trial(const SimConfig& config, const Centerline& centerline,
                                   Rng& trial_rng);

/// Runs all estimators on the measurements plus the pre-operative CT model
/// cloud (scan data is pipeline input, not hidden truth). Never touches
/// ground_truth_frames.
TrialEstimates estimate_trial(const TrialMeasurements& measurements, const PointCloud& ct_model,
                              const IcpParams& icp_params);

/// Full per-trial loop + aggregation into the Table-1-shaped report. Failed
/// trials are recorded, not fatal. Identical configs (same seed) give
/// byte-identical reports regardless of thread count.
PipelineReport run_pipeline(const SimConfig& config);

}  // namespace spinenav
