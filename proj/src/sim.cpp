#include <omp.h>

#include <cmath>
#include <numbers>

#include "spinenav/sim.hpp"

namespace spinenav {

RigidTransform simulate_measurement(const RigidTransform& true_pose, const NoiseModel& noise,
                                    Rng& rng) {
  const Eigen::Vector3d axis = rng.unit_vector();
  const double angle = rng.gaussian(noise.optical_rotation_sigma);
  const Eigen::Vector3d jitter = rng.gaussian_vector(noise.optical_translation_sigma);
  const RigidTransform wobble = RigidTransform::about_axis(axis, angle, jitter);
  return compose(wobble, true_pose);
}

RigidTransform simulate_measurement(const RigidTransform& true_pose, const NoiseModel& noise) {
  Rng rng(noise.seed);
  return simulate_measurement(true_pose, noise, rng);
}

FrameGraph default_ground_truth() {
  FrameGraph graph;
  // Tracker ~1.9 m from the robot base, generic orientation.
  const RigidTransform base_from_tracker = RigidTransform::about_axis(
      {0.3, 1.0, 0.25}, 2.1, {1500.0, 950.0, 620.0});
  graph.insert(FrameId::S, FrameId::OT, invert(base_from_tracker));
  // Tracked rigid body bolted near the CT-SDR mount.
  const RigidTransform ee_from_tool = RigidTransform::about_axis(
      {1.0, -0.4, 0.8}, 0.9, {42.0, -31.0, 55.0});
  graph.insert(FrameId::KukaEE, FrameId::Tool, invert(ee_from_tool));
  // Drill tip sticking out along the mount.
  const Eigen::Vector3d tip_in_ee(12.0, -8.0, 160.0);
  graph.insert(FrameId::KukaEE, FrameId::Tip, RigidTransform::translate(-tip_in_ee));
  // Phantom strapped in the workspace.
  const RigidTransform base_from_ct = RigidTransform::about_axis(
      {0.1, 0.2, 1.0}, 0.7, {640.0, -140.0, 380.0});
  graph.insert(FrameId::CT, FrameId::S, base_from_ct);
  return graph;
}

SimConfig default_config(const std::string& label) {
  SimConfig config;
  config.phantom = generate_phantom(label);
  config.plan.entry_point = config.phantom.canal_axis.point;
  config.plan.entry_direction = config.phantom.canal_axis.direction;
  config.plan.straight_length = 27.0;
  config.plan.arc_radius = (label == "T12") ? 35.0 : 69.5;
  config.plan.arc_length = 35.0;
  config.plan.bend_plane_normal =
      Eigen::Vector3d::UnitZ().cross(config.plan.entry_direction).normalized();
  config.plan.sample_spacing = 0.5;
  config.ground_truth_frames = default_ground_truth();
  return config;
}

namespace {

Eigen::Vector3d tip_offset_in_ee(const FrameGraph& truth) {
  return truth.resolve(FrameId::Tip, FrameId::KukaEE).translation();
}

/// Deterministic tool-down orientation used for pivot sweeps and tip
/// placement commands.
RigidTransform nominal_ee_orientation() {
  return RigidTransform::about_axis({1.0, 0.0, 0.0}, std::numbers::pi, Eigen::Vector3d::Zero());
}

}  // namespace

TrialMeasurements synthesize_trial(const SimConfig& config, const Centerline& centerline,
                                   Rng& rng) {
  const FrameGraph& truth = config.ground_truth_frames;
  const RigidTransform tracker_from_base = truth.resolve(FrameId::S, FrameId::OT);
  const RigidTransform tool_from_ee = truth.resolve(FrameId::KukaEE, FrameId::Tool);
  const RigidTransform base_from_ct = truth.resolve(FrameId::CT, FrameId::S);
  const Eigen::Vector3d tip_ee = tip_offset_in_ee(truth);
  const SimGeometry& geo = config.geometry;
  const NoiseModel& noise = config.noise;

  TrialMeasurements data;

  // Pivot sweep: wrist rotations about the dimple; the reported end-effector
  // positions carry the contact slop, modeled at the optical translation
  // amplitude.
  const RigidTransform rest = nominal_ee_orientation();
  const double cone = geo.pivot_cone_deg * std::numbers::pi / 180.0;
  for (int i = 0; i < geo.pivot_poses; ++i) {
    const RigidTransform sweep =
        RigidTransform::about_axis(rng.unit_vector(), rng.uniform(-cone, cone),
                                   Eigen::Vector3d::Zero());
    const Eigen::Matrix3d orientation = (compose(sweep, rest)).rotation();
    const Eigen::Vector3d position = geo.pivot_point - orientation * tip_ee +
                                     rng.gaussian_vector(noise.optical_translation_sigma);
    data.pivot.poses.emplace_back(orientation, position);
  }

  // Hand-eye pairs: robot poses are exact kinematics; the tracker stream is
  // optically noisy.
  const double rot_range = geo.handeye_rotation_deg * std::numbers::pi / 180.0;
  for (int i = 0; i < geo.handeye_poses; ++i) {
    const Eigen::Vector3d offset{rng.uniform(-0.5, 0.5) * geo.handeye_translation_range,
                                 rng.uniform(-0.5, 0.5) * geo.handeye_translation_range,
                                 rng.uniform(-0.5, 0.5) * geo.handeye_translation_range};
    const RigidTransform ee_in_base =
        RigidTransform::about_axis(rng.unit_vector(), rng.uniform(-rot_range, rot_range),
                                   geo.workspace_center + offset);
    const RigidTransform tool_in_tracker =
        compose(tracker_from_base, compose(ee_in_base, invert(tool_from_ee)));
    data.handeye.a_poses.push_back(invert(simulate_measurement(tool_in_tracker, noise, rng)));
    data.handeye.b_poses.push_back(invert(ee_in_base));
  }

  // Digitization: stylus touches the physical phantom; readings live in the
  // tracker frame.
  const RigidTransform ct_to_ot = compose(tracker_from_base, base_from_ct);
  const std::vector<Eigen::Vector3d> touched =
      digitize_surface(config.phantom, geo.digitizer_samples,
                       geo.digitizer_scatter_factor * noise.digitizer_sigma, rng);
  data.digitized_ot.reserve(touched.size());
  for (const auto& p : touched) {
    data.digitized_ot.push_back(apply(ct_to_ot, p) + rng.gaussian_vector(noise.digitizer_sigma));
  }

  const auto& names = Phantom::verification_names();
  for (int k = 0; k < 3; ++k) {
    const Eigen::Vector3d p_ct = config.phantom.landmarks.points.at(names[k]);
    data.picks_ct[k] = p_ct;
    data.picks_ot[k] = apply(ct_to_ot, p_ct) + rng.gaussian_vector(noise.digitizer_sigma);
  }

  // Magnetic readout of the executed path: the drill follows the plan under
  // the true frames; the pulled-through sensor reports a smoothly distorted
  // copy (rigid offset + orientation-coupled distortion, no white jitter).
  const Eigen::Vector3d readout_shift = rng.gaussian_vector(noise.magnetic_sigma);
  const double path_length = std::max(centerline.total_length, 1.0);
  const RigidTransform readout_tilt = RigidTransform::about_axis(
      rng.unit_vector(), rng.gaussian(noise.magnetic_sigma / path_length),
      Eigen::Vector3d::Zero());
  Eigen::Matrix3d distortion;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      distortion(r, c) = rng.gaussian(noise.magnetic_sigma);
    }
  }

  const Eigen::Matrix3d world_rot = base_from_ct.rotation();
  Eigen::Vector3d path_start;
  Eigen::Vector3d tangent_start;
  bool have_start = false;
  for (const CenterlineSample& sample : centerline.samples) {
    const Eigen::Vector3d world_point = apply(base_from_ct, sample.position);
    const Eigen::Vector3d world_tangent = world_rot * sample.tangent;
    if (!have_start) {
      path_start = world_point;
      tangent_start = world_tangent;
      have_start = true;
    }
    if (sample.arclength - centerline.straight_length <= 1e-9) continue;  // arc only
    const Eigen::Vector3d rigid = apply(readout_tilt, world_point - path_start) + path_start +
                                  readout_shift;
    data.readout_arc.push_back(rigid + distortion * (world_tangent - tangent_start));
  }

  return data;
}

TrialEstimates estimate_trial(const TrialMeasurements& measurements, const PointCloud& ct_model,
                              const IcpParams& icp_params) {
  TrialEstimates est;
  est.pivot = solve_pivot(measurements.pivot);
  est.handeye = solve_handeye(measurements.handeye);

  // Stylus readings move from the tracker frame into the estimated world
  // through the solved hand-eye transform.
  const RigidTransform base_from_tracker = invert(est.handeye.x);
  PointCloud digitized;
  digitized.frame = FrameId::S;
  digitized.points.reserve(measurements.digitized_ot.size());
  for (const auto& p : measurements.digitized_ot) {
    digitized.points.push_back(apply(base_from_tracker, p));
  }
  std::array<Eigen::Vector3d, 3> picks_world;
  for (int k = 0; k < 3; ++k) {
    picks_world[k] = apply(base_from_tracker, measurements.picks_ot[k]);
  }

  est.registration =
      register_dual_stage(digitized, ct_model, picks_world, measurements.picks_ct, icp_params);
  if (measurements.readout_arc.size() >= 3) {
    est.arc_fit = fit_circle(measurements.readout_arc);
  }
  return est;
}

namespace {

TrialRecord score_trial(const SimConfig& config, const Centerline& centerline,
                        const TrialEstimates& est, int trial_index) {
  const FrameGraph& truth = config.ground_truth_frames;
  const RigidTransform tracker_from_base = truth.resolve(FrameId::S, FrameId::OT);
  const RigidTransform tool_from_ee = truth.resolve(FrameId::KukaEE, FrameId::Tool);
  const RigidTransform base_from_ct = truth.resolve(FrameId::CT, FrameId::S);
  const Eigen::Vector3d tip_ee = tip_offset_in_ee(truth);

  TrialRecord rec;
  rec.trial = trial_index;
  rec.success = true;

  rec.pivot_residual_rms = est.pivot.residual_rms;
  rec.pivot_condition_number = est.pivot.condition_number;
  rec.pivot_tip_error = (est.pivot.x_tip - tip_ee).norm();
  rec.pivot_point_error = (est.pivot.x_pivot - config.geometry.pivot_point).norm();

  rec.handeye_rotation_residual = est.handeye.rotation_residual;
  rec.handeye_translation_residual = est.handeye.translation_residual;
  rec.handeye_x_rotation_error =
      (est.handeye.x.rotation() - tracker_from_base.rotation()).norm();
  rec.handeye_x_translation_error =
      (est.handeye.x.translation() - tracker_from_base.translation()).norm();
  rec.handeye_z_rotation_error = (est.handeye.z.rotation() - tool_from_ee.rotation()).norm();
  rec.handeye_z_translation_error =
      (est.handeye.z.translation() - tool_from_ee.translation()).norm();

  rec.icp_rmse = est.registration.icp.rmse;
  rec.icp_iterations = est.registration.icp.iterations;
  rec.icp_converged = est.registration.icp.converged;
  rec.icp_correspondences = est.registration.icp.correspondence_count;

  // Estimated patient pose (CT -> world) against the true one.
  const RigidTransform est_base_from_ct = invert(est.registration.icp.transform);
  rec.registration_rotation_error =
      (est_base_from_ct.rotation() - base_from_ct.rotation()).norm();
  rec.registration_translation_error =
      (est_base_from_ct.translation() - base_from_ct.translation()).norm();

  // Commanded centerline (through the estimated chain) vs the true one.
  double placement_sum = 0.0;
  double placement_max = 0.0;
  for (const CenterlineSample& sample : centerline.samples) {
    const double d = (apply(est_base_from_ct, sample.position) -
                      apply(base_from_ct, sample.position)).norm();
    placement_sum += d;
    placement_max = std::max(placement_max, d);
  }
  rec.placement_error_mean = placement_sum / static_cast<double>(centerline.samples.size());
  rec.placement_error_max = placement_max;

  rec.fitted_radius = est.arc_fit.radius;
  rec.radius_error =
      est.arc_fit.radius > 0 ? std::abs(est.arc_fit.radius - config.plan.arc_radius) : 0.0;

  // Landmark verification: command each star through the estimated chain,
  // place the tip with the estimated offset, compare against the true chain.
  const Eigen::Matrix3d command_orientation = nominal_ee_orientation().rotation();
  const Eigen::Vector3d tip_slip = command_orientation * (tip_ee - est.pivot.x_tip);
  std::vector<double> landmark_errors;
  for (const std::string& name : Phantom::verification_names()) {
    const Eigen::Vector3d p_ct = config.phantom.landmarks.points.at(name);
    const Eigen::Vector3d achieved_tip = apply(est_base_from_ct, p_ct) + tip_slip;
    const Eigen::Vector3d true_landmark = apply(base_from_ct, p_ct);
    const double err = (achieved_tip - true_landmark).norm();
    rec.landmark_errors[name] = err;
    landmark_errors.push_back(err);
  }
  rec.total_calibration_error = mean_std(landmark_errors).mean;
  return rec;
}

}  // namespace

PipelineReport run_pipeline(const SimConfig& config) {
  if (config.trials < 1) {
    throw InvalidParamsError("simulation needs at least one trial");
  }
  validate(config.phantom.surface);
  const Centerline centerline = plan_jshape(config.plan);
  const ExecutionTimeline timeline = execution_timeline(config.plan, config.profile);

  const Rng root(config.noise.seed);
  const IcpParams icp_params;

  std::vector<TrialRecord> records(config.trials);
  const int threads = config.threads > 0 ? config.threads : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic) num_threads(threads) if (threads > 1)
  for (int trial = 0; trial < config.trials; ++trial) {
    Rng trial_rng = root.derive(static_cast<std::uint64_t>(trial));
    TrialRecord& rec = records[trial];
    try {
      const TrialMeasurements measurements = synthesize_trial(config, centerline, trial_rng);
      const TrialEstimates estimates =
          estimate_trial(measurements, config.phantom.surface, icp_params);
      rec = score_trial(config, centerline, estimates, trial);
    } catch (const Error& e) {
      rec = TrialRecord{};
      rec.trial = trial;
      rec.success = false;
      rec.error = e.what();
    }
  }

  return build_report(config.phantom.label, config.noise.seed, config.plan.arc_radius, timeline,
                      records);
}

}  // namespace spinenav
