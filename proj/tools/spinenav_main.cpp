#include <CLI11.hpp>
#include <Eigen/Dense>
#include <filesystem>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "spinenav/io.hpp"
#include "spinenav/sim.hpp"

namespace {

using nlohmann::json;
using namespace spinenav;

Eigen::Vector3d to_vec3(const std::vector<double>& v) { return {v[0], v[1], v[2]}; }

void emit(bool as_json, const json& machine, const std::string& human) {
  if (as_json) {
    std::cout << io::dump_json(machine);
  } else {
    std::cout << human;
  }
}

std::string format_mm(double v) { return io::format_double(v) + " mm"; }

int run_calibrate_pivot(const std::string& poses_path, const std::string& out_path,
                        bool as_json) {
  PivotDataset dataset;
  dataset.poses = io::load_poses_csv(poses_path);
  const PivotResult result = solve_pivot(dataset);
  const json j = io::pivot_result_to_json(result);
  if (!out_path.empty()) io::write_text(out_path, io::dump_json(j));
  emit(as_json, j,
       "pivot calibration over " + std::to_string(dataset.poses.size()) + " poses\n" +
           "  x_tip   = [" + io::format_double(result.x_tip.x()) + ", " +
           io::format_double(result.x_tip.y()) + ", " + io::format_double(result.x_tip.z()) +
           "] mm (end-effector frame)\n" + "  x_pivot = [" +
           io::format_double(result.x_pivot.x()) + ", " + io::format_double(result.x_pivot.y()) +
           ", " + io::format_double(result.x_pivot.z()) + "] mm (base frame)\n" +
           "  residual rms = " + format_mm(result.residual_rms) +
           ", condition number = " + io::format_double(result.condition_number) + "\n");
  return 0;
}

int run_calibrate_handeye(const std::string& a_path, const std::string& b_path,
                          const std::string& out_path, bool as_json) {
  HandEyeDataset dataset;
  dataset.a_poses = io::load_poses_csv(a_path);
  dataset.b_poses = io::load_poses_csv(b_path);
  const HandEyeResult result = solve_handeye(dataset);
  const json j = io::handeye_result_to_json(result);
  if (!out_path.empty()) io::write_text(out_path, io::dump_json(j));
  emit(as_json, j,
       "hand-eye calibration over " + std::to_string(dataset.a_poses.size()) + " pose pairs\n" +
           "  rotation residual    = " + io::format_double(result.rotation_residual) + "\n" +
           "  translation residual = " + format_mm(result.translation_residual) + "\n");
  return 0;
}

int run_register(const std::string& digitized_path, const std::string& model_path,
                 const std::string& picks_path, const std::string& out_path,
                 const IcpParams& params, bool as_json) {
  const PointCloud digitized = io::load_cloud(digitized_path);
  const PointCloud model = io::load_cloud(model_path);
  const io::Picks picks = io::load_picks(picks_path);
  const RegistrationResult result =
      register_dual_stage(digitized, model, picks.src, picks.dst, params);
  const json j = io::registration_result_to_json(result);
  if (!out_path.empty()) io::write_text(out_path, io::dump_json(j));
  emit(as_json, j,
       "dual-stage registration: " + std::to_string(digitized.points.size()) +
           " digitized points onto " + std::to_string(model.points.size()) + " model points\n" +
           "  rmse = " + format_mm(result.icp.rmse) + " over " +
           std::to_string(result.icp.correspondence_count) + " correspondences, " +
           std::to_string(result.icp.iterations) + " iterations" +
           (result.icp.converged ? " (converged)\n" : " (iteration cap)\n"));
  return 0;
}

int run_plan(const JShapePlan& plan, const std::string& out_path, const std::string& plan_out,
             bool as_json) {
  const Centerline line = plan_jshape(plan);
  if (!plan_out.empty()) io::save_plan(plan_out, plan);
  if (!out_path.empty()) {
    io::save_centerline_csv(out_path, line);
  }
  json j;
  j["samples"] = line.samples.size();
  j["straight_length_mm"] = line.straight_length;
  j["total_length_mm"] = line.total_length;
  j["end_point_mm"] = json::array({line.samples.back().position.x(),
                                   line.samples.back().position.y(),
                                   line.samples.back().position.z()});
  emit(as_json, j,
       "J-shape centerline: " + std::to_string(line.samples.size()) + " samples, " +
           format_mm(line.total_length) + " total (" + format_mm(line.straight_length) +
           " straight + " + format_mm(line.total_length - line.straight_length) + " arc)\n");
  if (out_path.empty() && !as_json) {
    std::cout << "note: no --out given; centerline not written\n";
  }
  return 0;
}

int run_simulate(const std::string& config_path, const std::string& out_path,
                 const std::string& dump_dir, std::optional<int> threads, bool as_json) {
  SimConfig config = io::load_sim_config(config_path);
  if (threads) config.threads = *threads;
  const PipelineReport report = run_pipeline(config);
  const json j = io::report_to_json(report);
  if (!out_path.empty()) io::write_text(out_path, io::dump_json(j));

  if (!dump_dir.empty()) {
    std::filesystem::create_directories(dump_dir);
    const std::filesystem::path dir(dump_dir);
    const Centerline planned = plan_jshape(config.plan);
    io::save_centerline_csv(dir / "planned_ct.csv", planned);

    // True executed path in world coordinates.
    const RigidTransform base_from_ct =
        config.ground_truth_frames.resolve(FrameId::CT, FrameId::S);
    Centerline executed = planned;
    for (CenterlineSample& s : executed.samples) {
      s.position = apply(base_from_ct, s.position);
      s.tangent = base_from_ct.rotation() * s.tangent;
    }
    io::save_centerline_csv(dir / "executed_world.csv", executed);

    const Rng root(config.noise.seed);
    for (int trial = 0; trial < config.trials; ++trial) {
      Rng trial_rng = root.derive(static_cast<std::uint64_t>(trial));
      const TrialMeasurements m = synthesize_trial(config, planned, trial_rng);
      PointCloud readout;
      readout.frame = FrameId::S;
      readout.points = m.readout_arc;
      io::save_cloud(dir / ("readout_arc_trial" + std::to_string(trial) + ".csv"), readout);
    }
  }

  std::string human =
      "simulated " + std::to_string(report.trials_succeeded) + "/" +
      std::to_string(report.trials_requested) + " trials on " + report.phantom_label + "\n" +
      "  icp rmse                = " + io::format_double(report.icp_error.mean) + " +/- " +
      io::format_double(report.icp_error.stddev) + " mm\n" +
      "  total calibration error = " + io::format_double(report.total_calibration_error.mean) +
      " +/- " + io::format_double(report.total_calibration_error.stddev) + " mm\n" +
      "  fitted radius           = " + io::format_double(report.fitted_radius.mean) + " +/- " +
      io::format_double(report.fitted_radius.stddev) + " mm (ideal " +
      io::format_double(report.ideal_radius) + ")\n" +
      "  procedure time          = " + io::format_double(report.procedure_time) + " s\n";
  emit(as_json, j, human);
  return 0;
}

int run_report(const std::string& in_path, bool as_json) {
  const PipelineReport report = io::load_report(in_path);
  const json j = io::report_to_json(report);
  std::string human;
  human += "Vertebra | ICP Error       | Total Calibration | Ideal  | Actual            | Time\n";
  human += report.phantom_label + "       | " + io::format_double(report.icp_error.mean) +
           " +/- " + io::format_double(report.icp_error.stddev) + " | " +
           io::format_double(report.total_calibration_error.mean) + " +/- " +
           io::format_double(report.total_calibration_error.stddev) + " | " +
           io::format_double(report.ideal_radius) + " | " +
           io::format_double(report.fitted_radius.mean) + " +/- " +
           io::format_double(report.fitted_radius.stddev) + " | " +
           io::format_double(report.procedure_time) + " s\n";
  human += "(" + std::to_string(report.trials_succeeded) + "/" +
           std::to_string(report.trials_requested) + " trials, all errors mm)\n";
  emit(as_json, j, human);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spinenav: calibration, registration, planning and simulation for a steerable "
               "spinal drilling rig"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "machine-readable JSON on stdout");

  std::string poses_path, a_path, b_path, out_path;
  auto* pivot_cmd =
      app.add_subcommand("calibrate-pivot", "solve the tool-tip/pivot stacked system");
  pivot_cmd->add_option("--poses", poses_path, "end-effector poses CSV")
      ->required()
      ->check(CLI::ExistingFile);
  pivot_cmd->add_option("--out", out_path, "write pivot.json here");

  auto* handeye_cmd = app.add_subcommand("calibrate-handeye", "solve AX=ZB for X and Z");
  handeye_cmd->add_option("--a", a_path, "tool-from-tracker poses CSV")
      ->required()
      ->check(CLI::ExistingFile);
  handeye_cmd->add_option("--b", b_path, "ee-from-base poses CSV")
      ->required()
      ->check(CLI::ExistingFile);
  handeye_cmd->add_option("--out", out_path, "write handeye.json here");

  std::string digitized_path, model_path, picks_path;
  IcpParams icp_params;
  auto* register_cmd =
      app.add_subcommand("register", "dual-stage (3-point + ICP) patient registration");
  register_cmd->add_option("--digitized", digitized_path, "digitized cloud (.ply/.csv)")
      ->required()
      ->check(CLI::ExistingFile);
  register_cmd->add_option("--model", model_path, "CT model cloud (.ply/.csv)")
      ->required()
      ->check(CLI::ExistingFile);
  register_cmd->add_option("--picks", picks_path, "3-point picks JSON")
      ->required()
      ->check(CLI::ExistingFile);
  register_cmd->add_option("--out", out_path, "write reg.json here");
  register_cmd->add_option("--max-iterations", icp_params.max_iterations, "ICP iteration cap");
  register_cmd->add_option("--convergence-delta", icp_params.convergence_delta,
                           "stop when RMSE improves less than this (mm)");
  register_cmd->add_option("--max-distance", icp_params.max_correspondence_distance,
                           "correspondence gate (mm)");

  JShapePlan plan;
  std::vector<double> entry{0.0, 0.0, 0.0};
  std::vector<double> direction{0.0, 0.0, 1.0};
  std::vector<double> bend_normal{1.0, 0.0, 0.0};
  std::string plan_path, plan_out;
  auto* plan_cmd = app.add_subcommand("plan", "sample a J-shape centerline");
  plan_cmd->add_option("--plan", plan_path, "read the plan from JSON instead of flags")
      ->check(CLI::ExistingFile);
  plan_cmd->add_option("--entry", entry, "entry point, mm")->expected(3);
  plan_cmd->add_option("--direction", direction, "entry direction")->expected(3);
  plan_cmd->add_option("--bend-normal", bend_normal, "bend plane normal")->expected(3);
  plan_cmd->add_option("--straight", plan.straight_length, "straight length, mm");
  plan_cmd->add_option("--radius", plan.arc_radius, "arc radius, mm");
  plan_cmd->add_option("--arc-length", plan.arc_length, "arc length, mm");
  plan_cmd->add_option("--spacing", plan.sample_spacing, "sample spacing, mm");
  plan_cmd->add_option("--out", out_path, "write centerline CSV here");
  plan_cmd->add_option("--plan-out", plan_out, "also write the plan JSON here");

  std::string config_path, dump_dir;
  std::optional<int> threads;
  auto* simulate_cmd = app.add_subcommand("simulate", "run the end-to-end pipeline simulation");
  simulate_cmd->add_option("--config", config_path, "sim config JSON")
      ->required()
      ->check(CLI::ExistingFile);
  simulate_cmd->add_option("--out", out_path, "write report JSON here");
  simulate_cmd->add_option("--dump-trajectories", dump_dir,
                           "dump planned/executed/readout paths into this directory");
  simulate_cmd->add_option("--threads", threads, "trial parallelism (1 = serial)");

  std::string report_path;
  auto* report_cmd = app.add_subcommand("report", "render a saved report");
  report_cmd->add_option("--in", report_path, "report JSON")
      ->required()
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  const std::string stage = app.get_subcommands().front()->get_name();
  try {
    if (pivot_cmd->parsed()) {
      return run_calibrate_pivot(poses_path, out_path, as_json);
    }
    if (handeye_cmd->parsed()) {
      return run_calibrate_handeye(a_path, b_path, out_path, as_json);
    }
    if (register_cmd->parsed()) {
      return run_register(digitized_path, model_path, picks_path, out_path, icp_params, as_json);
    }
    if (plan_cmd->parsed()) {
      if (!plan_path.empty()) {
        plan = io::load_plan(plan_path);
      } else {
        plan.entry_point = to_vec3(entry);
        plan.entry_direction = to_vec3(direction);
        plan.bend_plane_normal = to_vec3(bend_normal);
      }
      return run_plan(plan, out_path, plan_out, as_json);
    }
    if (simulate_cmd->parsed()) {
      return run_simulate(config_path, out_path, dump_dir, threads, as_json);
    }
    if (report_cmd->parsed()) {
      return run_report(report_path, as_json);
    }
  } catch (const spinenav::Error& e) {
    std::cerr << "spinenav " << stage << ": " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "spinenav " << stage << ": " << e.what() << "\n";
    return 1;
  }
  return 1;
}
