#include "spinenav/io.hpp"

#include <charconv>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace spinenav::io {

using nlohmann::json;

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) {
    throw IoFailure("failed to format a double");
  }
  return {buf.data(), end};
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoFailure("cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoFailure("cannot open '" + path.string() + "' for writing");
  }
  out << text;
  if (!out) {
    throw IoFailure("short write to '" + path.string() + "'");
  }
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

json parse_json_file(const std::filesystem::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw ParseFailure("'" + path.string() + "': " + e.what());
  }
}

namespace {

double parse_double(const std::string& token, const std::string& where) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseFailure(where + ": bad number '" + token + "'");
  }
  return value;
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> out;
  std::string token;
  std::istringstream in(line);
  while (std::getline(in, token, ',')) {
    // trim spaces and a stray \r
    const auto b = token.find_first_not_of(" \t\r");
    const auto e = token.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string{} : token.substr(b, e - b + 1));
  }
  return out;
}

Eigen::Vector3d vec3_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) {
    throw ParseFailure(where + ": expected an [x, y, z] array");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json vec3_to_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

}  // namespace

std::vector<RigidTransform> load_poses_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseFailure("'" + path.string() + "' is empty");
  }
  const auto header = split_csv_row(line);
  const std::vector<std::string> expected = {"qw", "qx", "qy", "qz", "tx", "ty", "tz"};
  if (std::vector<std::string>(header.begin(), header.end()) != expected) {
    throw ParseFailure("'" + path.string() + "': pose CSV header must be qw,qx,qy,qz,tx,ty,tz");
  }

  std::vector<RigidTransform> poses;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_row(line);
    if (cells.size() != 7) {
      throw ParseFailure("'" + path.string() + "' row " + std::to_string(row) +
                         ": expected 7 fields");
    }
    const std::string where = path.string() + " row " + std::to_string(row);
    std::array<double, 7> v{};
    for (int i = 0; i < 7; ++i) v[i] = parse_double(cells[i], where);
    poses.push_back(RigidTransform::from_quaternion(v[0], v[1], v[2], v[3], {v[4], v[5], v[6]}));
  }
  if (poses.empty()) {
    throw ParseFailure("'" + path.string() + "' contains no poses");
  }
  return poses;
}

void save_poses_csv(const std::filesystem::path& path, std::span<const RigidTransform> poses) {
  std::string out = "qw,qx,qy,qz,tx,ty,tz\n";
  for (const RigidTransform& pose : poses) {
    const Eigen::Vector4d q = pose.quaternion_wxyz();
    const Eigen::Vector3d& t = pose.translation();
    out += format_double(q(0)) + "," + format_double(q(1)) + "," + format_double(q(2)) + "," +
           format_double(q(3)) + "," + format_double(t.x()) + "," + format_double(t.y()) + "," +
           format_double(t.z()) + "\n";
  }
  write_text(path, out);
}

namespace {

PointCloud load_cloud_ply(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line) || (line != "ply" && line != "ply\r")) {
    throw ParseFailure("'" + path.string() + "': not an ASCII PLY file");
  }

  PointCloud cloud;
  std::size_t vertex_count = 0;
  std::vector<std::string> properties;
  bool in_vertex_element = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string keyword;
    ls >> keyword;
    if (keyword == "end_header") break;
    if (keyword == "format") {
      std::string kind;
      ls >> kind;
      if (kind != "ascii") {
        throw ParseFailure("'" + path.string() + "': only ascii PLY is supported");
      }
    } else if (keyword == "comment") {
      std::string tag;
      ls >> tag;
      if (tag == "frame") {
        std::string frame;
        ls >> frame;
        cloud.frame = frame_from_string(frame);
      }
    } else if (keyword == "element") {
      std::string name;
      ls >> name >> vertex_count;
      in_vertex_element = (name == "vertex");
      if (!in_vertex_element) {
        throw ParseFailure("'" + path.string() + "': unsupported element '" + name + "'");
      }
    } else if (keyword == "property" && in_vertex_element) {
      std::string type, name;
      ls >> type >> name;
      if (type != "double" && type != "float") {
        throw ParseFailure("'" + path.string() + "': unsupported property type '" + type + "'");
      }
      properties.push_back(name);
    }
  }
  if (properties != std::vector<std::string>{"x", "y", "z"}) {
    throw ParseFailure("'" + path.string() + "': vertex properties must be x, y, z");
  }

  cloud.points.reserve(vertex_count);
  for (std::size_t i = 0; i < vertex_count; ++i) {
    if (!std::getline(in, line)) {
      throw ParseFailure("'" + path.string() + "': truncated vertex list");
    }
    std::istringstream ls(line);
    Eigen::Vector3d p;
    if (!(ls >> p.x() >> p.y() >> p.z())) {
      throw ParseFailure("'" + path.string() + "': bad vertex row " + std::to_string(i + 1));
    }
    cloud.points.push_back(p);
  }
  validate(cloud);
  return cloud;
}

PointCloud load_cloud_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseFailure("'" + path.string() + "' is empty");
  }
  if (split_csv_row(line) != std::vector<std::string>{"x", "y", "z"}) {
    throw ParseFailure("'" + path.string() + "': cloud CSV header must be x,y,z");
  }
  PointCloud cloud;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_row(line);
    if (cells.size() != 3) {
      throw ParseFailure("'" + path.string() + "' row " + std::to_string(row) +
                         ": expected 3 fields");
    }
    const std::string where = path.string() + " row " + std::to_string(row);
    cloud.points.emplace_back(parse_double(cells[0], where), parse_double(cells[1], where),
                              parse_double(cells[2], where));
  }
  validate(cloud);
  return cloud;
}

}  // namespace

PointCloud load_cloud(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".ply") return load_cloud_ply(path);
  if (ext == ".csv") return load_cloud_csv(path);
  throw InvalidParamsError("cloud files must end in .ply or .csv, got '" + path.string() + "'");
}

void save_cloud(const std::filesystem::path& path, const PointCloud& cloud) {
  validate(cloud);
  const auto ext = path.extension().string();
  std::string out;
  if (ext == ".ply") {
    out = "ply\nformat ascii 1.0\ncomment frame " + std::string(to_string(cloud.frame)) +
          "\nelement vertex " + std::to_string(cloud.points.size()) +
          "\nproperty double x\nproperty double y\nproperty double z\nend_header\n";
    for (const auto& p : cloud.points) {
      out += format_double(p.x()) + " " + format_double(p.y()) + " " + format_double(p.z()) +
             "\n";
    }
  } else if (ext == ".csv") {
    out = "x,y,z\n";
    for (const auto& p : cloud.points) {
      out += format_double(p.x()) + "," + format_double(p.y()) + "," + format_double(p.z()) +
             "\n";
    }
  } else {
    throw InvalidParamsError("cloud files must end in .ply or .csv, got '" + path.string() + "'");
  }
  write_text(path, out);
}

Picks load_picks(const std::filesystem::path& path) {
  const json j = parse_json_file(path);
  Picks picks;
  const auto read_triplet = [&](const char* key, std::array<Eigen::Vector3d, 3>& target) {
    if (!j.contains(key) || !j[key].is_array() || j[key].size() != 3) {
      throw ParseFailure("'" + path.string() + "': '" + std::string(key) +
                         "' must be an array of exactly 3 points");
    }
    for (int i = 0; i < 3; ++i) {
      target[i] = vec3_from_json(j[key][i], path.string());
    }
  };
  read_triplet("src", picks.src);
  read_triplet("dst", picks.dst);
  return picks;
}

void save_picks(const std::filesystem::path& path, const Picks& picks) {
  json j;
  j["src"] = json::array({vec3_to_json(picks.src[0]), vec3_to_json(picks.src[1]),
                          vec3_to_json(picks.src[2])});
  j["dst"] = json::array({vec3_to_json(picks.dst[0]), vec3_to_json(picks.dst[1]),
                          vec3_to_json(picks.dst[2])});
  write_text(path, dump_json(j));
}

json transform_to_json(const RigidTransform& t) {
  const Eigen::Vector4d q = t.quaternion_wxyz();
  json j;
  j["quaternion_wxyz"] = json::array({q(0), q(1), q(2), q(3)});
  j["translation_mm"] = vec3_to_json(t.translation());
  return j;
}

RigidTransform transform_from_json(const json& j) {
  const auto& q = j.at("quaternion_wxyz");
  if (!q.is_array() || q.size() != 4) {
    throw ParseFailure("transform: quaternion_wxyz must hold 4 numbers");
  }
  return RigidTransform::from_quaternion(q[0].get<double>(), q[1].get<double>(),
                                         q[2].get<double>(), q[3].get<double>(),
                                         vec3_from_json(j.at("translation_mm"), "transform"));
}

json plan_to_json(const JShapePlan& plan) {
  json j;
  j["entry_point_mm"] = vec3_to_json(plan.entry_point);
  j["entry_direction"] = vec3_to_json(plan.entry_direction);
  j["straight_length_mm"] = plan.straight_length;
  j["arc_radius_mm"] = plan.arc_radius;
  j["arc_length_mm"] = plan.arc_length;
  j["bend_plane_normal"] = vec3_to_json(plan.bend_plane_normal);
  j["sample_spacing_mm"] = plan.sample_spacing;
  return j;
}

JShapePlan plan_from_json(const json& j) {
  JShapePlan plan;
  plan.entry_point = vec3_from_json(j.at("entry_point_mm"), "plan");
  plan.entry_direction = vec3_from_json(j.at("entry_direction"), "plan");
  plan.straight_length = j.at("straight_length_mm").get<double>();
  plan.arc_radius = j.at("arc_radius_mm").get<double>();
  plan.arc_length = j.at("arc_length_mm").get<double>();
  plan.bend_plane_normal = vec3_from_json(j.at("bend_plane_normal"), "plan");
  if (j.contains("sample_spacing_mm")) {
    plan.sample_spacing = j.at("sample_spacing_mm").get<double>();
  }
  validate(plan);
  return plan;
}

JShapePlan load_plan(const std::filesystem::path& path) {
  return plan_from_json(parse_json_file(path));
}

void save_plan(const std::filesystem::path& path, const JShapePlan& plan) {
  write_text(path, dump_json(plan_to_json(plan)));
}

json pivot_result_to_json(const PivotResult& r) {
  json j;
  j["x_tip_mm"] = vec3_to_json(r.x_tip);
  j["x_pivot_mm"] = vec3_to_json(r.x_pivot);
  j["residual_rms_mm"] = r.residual_rms;
  j["condition_number"] = r.condition_number;
  return j;
}

json handeye_result_to_json(const HandEyeResult& r) {
  json j;
  j["x_tracker_from_base"] = transform_to_json(r.x);
  j["z_tool_from_ee"] = transform_to_json(r.z);
  j["rotation_residual"] = r.rotation_residual;
  j["translation_residual_mm"] = r.translation_residual;
  return j;
}

json registration_result_to_json(const RegistrationResult& r) {
  json j;
  j["coarse_transform"] = transform_to_json(r.coarse);
  j["transform_ct_from_world"] = transform_to_json(r.icp.transform);
  j["transform_world_from_ct"] = transform_to_json(invert(r.icp.transform));
  j["rmse_mm"] = r.icp.rmse;
  j["iterations"] = r.icp.iterations;
  j["converged"] = r.icp.converged;
  j["correspondence_count"] = r.icp.correspondence_count;
  return j;
}

namespace {

json mean_std_to_json(const MeanStd& m) {
  json j;
  j["mean"] = m.mean;
  j["std"] = m.stddev;
  return j;
}

MeanStd mean_std_from_json(const json& j) {
  return {j.at("mean").get<double>(), j.at("std").get<double>()};
}

json trial_to_json(const TrialRecord& t) {
  json j;
  j["trial"] = t.trial;
  j["success"] = t.success;
  j["error"] = t.error;
  j["pivot_residual_rms_mm"] = t.pivot_residual_rms;
  j["pivot_tip_error_mm"] = t.pivot_tip_error;
  j["pivot_point_error_mm"] = t.pivot_point_error;
  j["pivot_condition_number"] = t.pivot_condition_number;
  j["handeye_rotation_residual"] = t.handeye_rotation_residual;
  j["handeye_translation_residual_mm"] = t.handeye_translation_residual;
  j["handeye_x_rotation_error"] = t.handeye_x_rotation_error;
  j["handeye_x_translation_error_mm"] = t.handeye_x_translation_error;
  j["handeye_z_rotation_error"] = t.handeye_z_rotation_error;
  j["handeye_z_translation_error_mm"] = t.handeye_z_translation_error;
  j["icp_rmse_mm"] = t.icp_rmse;
  j["icp_iterations"] = t.icp_iterations;
  j["icp_converged"] = t.icp_converged;
  j["icp_correspondences"] = t.icp_correspondences;
  j["registration_rotation_error"] = t.registration_rotation_error;
  j["registration_translation_error_mm"] = t.registration_translation_error;
  j["placement_error_mean_mm"] = t.placement_error_mean;
  j["placement_error_max_mm"] = t.placement_error_max;
  j["fitted_radius_mm"] = t.fitted_radius;
  j["radius_error_mm"] = t.radius_error;
  j["total_calibration_error_mm"] = t.total_calibration_error;
  j["landmark_errors_mm"] = json::object();
  for (const auto& [name, err] : t.landmark_errors) {
    j["landmark_errors_mm"][name] = err;
  }
  return j;
}

TrialRecord trial_from_json(const json& j) {
  TrialRecord t;
  t.trial = j.at("trial").get<int>();
  t.success = j.at("success").get<bool>();
  t.error = j.at("error").get<std::string>();
  t.pivot_residual_rms = j.at("pivot_residual_rms_mm").get<double>();
  t.pivot_tip_error = j.at("pivot_tip_error_mm").get<double>();
  t.pivot_point_error = j.at("pivot_point_error_mm").get<double>();
  t.pivot_condition_number = j.at("pivot_condition_number").get<double>();
  t.handeye_rotation_residual = j.at("handeye_rotation_residual").get<double>();
  t.handeye_translation_residual = j.at("handeye_translation_residual_mm").get<double>();
  t.handeye_x_rotation_error = j.at("handeye_x_rotation_error").get<double>();
  t.handeye_x_translation_error = j.at("handeye_x_translation_error_mm").get<double>();
  t.handeye_z_rotation_error = j.at("handeye_z_rotation_error").get<double>();
  t.handeye_z_translation_error = j.at("handeye_z_translation_error_mm").get<double>();
  t.icp_rmse = j.at("icp_rmse_mm").get<double>();
  t.icp_iterations = j.at("icp_iterations").get<int>();
  t.icp_converged = j.at("icp_converged").get<bool>();
  t.icp_correspondences = j.at("icp_correspondences").get<int>();
  t.registration_rotation_error = j.at("registration_rotation_error").get<double>();
  t.registration_translation_error = j.at("registration_translation_error_mm").get<double>();
  t.placement_error_mean = j.at("placement_error_mean_mm").get<double>();
  t.placement_error_max = j.at("placement_error_max_mm").get<double>();
  t.fitted_radius = j.at("fitted_radius_mm").get<double>();
  t.radius_error = j.at("radius_error_mm").get<double>();
  t.total_calibration_error = j.at("total_calibration_error_mm").get<double>();
  for (const auto& [name, err] : j.at("landmark_errors_mm").items()) {
    t.landmark_errors[name] = err.get<double>();
  }
  return t;
}

json timeline_to_json(const ExecutionTimeline& t) {
  json j;
  j["straight"] = t.straight_duration;
  j["curved"] = t.curved_duration;
  j["retraction"] = t.retraction_duration;
  j["total"] = t.total;
  return j;
}

ExecutionTimeline timeline_from_json(const json& j) {
  ExecutionTimeline t;
  t.straight_duration = j.at("straight").get<double>();
  t.curved_duration = j.at("curved").get<double>();
  t.retraction_duration = j.at("retraction").get<double>();
  t.total = j.at("total").get<double>();
  return t;
}

}  // namespace

json report_to_json(const PipelineReport& report) {
  json j;
  j["phantom_label"] = report.phantom_label;
  j["seed"] = report.seed;
  j["trials_requested"] = report.trials_requested;
  j["trials_succeeded"] = report.trials_succeeded;
  j["icp_error_mm"] = mean_std_to_json(report.icp_error);
  j["total_calibration_error_mm"] = mean_std_to_json(report.total_calibration_error);
  j["ideal_radius_mm"] = report.ideal_radius;
  j["fitted_radius_mm"] = mean_std_to_json(report.fitted_radius);
  j["radius_abs_error_mm"] = mean_std_to_json(report.radius_abs_error);
  j["placement_error_mm"] = mean_std_to_json(report.placement_error);
  j["timeline_s"] = timeline_to_json(report.timeline);
  j["procedure_time_s"] = report.procedure_time;
  j["trials"] = json::array();
  for (const TrialRecord& t : report.trials) {
    j["trials"].push_back(trial_to_json(t));
  }
  return j;
}

PipelineReport report_from_json(const json& j) {
  PipelineReport report;
  report.phantom_label = j.at("phantom_label").get<std::string>();
  report.seed = j.at("seed").get<std::uint64_t>();
  report.trials_requested = j.at("trials_requested").get<int>();
  report.trials_succeeded = j.at("trials_succeeded").get<int>();
  report.icp_error = mean_std_from_json(j.at("icp_error_mm"));
  report.total_calibration_error = mean_std_from_json(j.at("total_calibration_error_mm"));
  report.ideal_radius = j.at("ideal_radius_mm").get<double>();
  report.fitted_radius = mean_std_from_json(j.at("fitted_radius_mm"));
  report.radius_abs_error = mean_std_from_json(j.at("radius_abs_error_mm"));
  report.placement_error = mean_std_from_json(j.at("placement_error_mm"));
  report.timeline = timeline_from_json(j.at("timeline_s"));
  report.procedure_time = j.at("procedure_time_s").get<double>();
  for (const auto& t : j.at("trials")) {
    report.trials.push_back(trial_from_json(t));
  }
  return report;
}

PipelineReport load_report(const std::filesystem::path& path) {
  return report_from_json(parse_json_file(path));
}

void save_report(const std::filesystem::path& path, const PipelineReport& report) {
  write_text(path, dump_json(report_to_json(report)));
}

json sim_config_to_json(const SimConfig& config) {
  json j;
  j["phantom"]["label"] = config.phantom.label;
  j["plan"] = plan_to_json(config.plan);
  j["profile"]["straight_speed_mm_s"] = config.profile.straight_speed;
  j["profile"]["curved_speed_mm_s"] = config.profile.curved_speed;
  j["profile"]["drill_speed_rpm"] = config.profile.drill_speed;
  j["profile"]["retraction_speed_mm_s"] = config.profile.retraction_speed;
  j["noise"]["optical_translation_sigma_mm"] = config.noise.optical_translation_sigma;
  j["noise"]["optical_rotation_sigma_rad"] = config.noise.optical_rotation_sigma;
  j["noise"]["digitizer_sigma_mm"] = config.noise.digitizer_sigma;
  j["noise"]["magnetic_sigma_mm"] = config.noise.magnetic_sigma;
  j["noise"]["seed"] = config.noise.seed;
  j["trials"] = config.trials;
  j["threads"] = config.threads;
  j["geometry"]["pivot_poses"] = config.geometry.pivot_poses;
  j["geometry"]["pivot_cone_deg"] = config.geometry.pivot_cone_deg;
  j["geometry"]["pivot_point_mm"] = vec3_to_json(config.geometry.pivot_point);
  j["geometry"]["handeye_poses"] = config.geometry.handeye_poses;
  j["geometry"]["handeye_rotation_deg"] = config.geometry.handeye_rotation_deg;
  j["geometry"]["handeye_translation_range_mm"] = config.geometry.handeye_translation_range;
  j["geometry"]["workspace_center_mm"] = vec3_to_json(config.geometry.workspace_center);
  j["geometry"]["digitizer_samples"] = config.geometry.digitizer_samples;
  j["geometry"]["digitizer_scatter_factor"] = config.geometry.digitizer_scatter_factor;
  j["geometry"]["readout_spacing_mm"] = config.geometry.readout_spacing;
  j["ground_truth"]["edges"] = json::array();
  for (const FrameGraph::Edge& e : config.ground_truth_frames.edges()) {
    json edge;
    edge["from"] = to_string(e.from);
    edge["to"] = to_string(e.to);
    edge["transform"] = transform_to_json(e.transform);
    j["ground_truth"]["edges"].push_back(edge);
  }
  return j;
}

SimConfig sim_config_from_json(const json& j) {
  if (!j.contains("phantom") || !j.at("phantom").contains("label")) {
    throw ParseFailure("sim config: phantom.label is required");
  }
  const auto label = j.at("phantom").at("label").get<std::string>();
  SimConfig config = default_config(label);

  if (j.contains("plan")) config.plan = plan_from_json(j.at("plan"));
  if (j.contains("profile")) {
    const json& p = j.at("profile");
    if (p.contains("straight_speed_mm_s"))
      config.profile.straight_speed = p.at("straight_speed_mm_s").get<double>();
    if (p.contains("curved_speed_mm_s"))
      config.profile.curved_speed = p.at("curved_speed_mm_s").get<double>();
    if (p.contains("drill_speed_rpm"))
      config.profile.drill_speed = p.at("drill_speed_rpm").get<double>();
    if (p.contains("retraction_speed_mm_s"))
      config.profile.retraction_speed = p.at("retraction_speed_mm_s").get<double>();
    validate(config.profile);
  }
  if (j.contains("noise")) {
    const json& n = j.at("noise");
    if (n.contains("optical_translation_sigma_mm"))
      config.noise.optical_translation_sigma = n.at("optical_translation_sigma_mm").get<double>();
    if (n.contains("optical_rotation_sigma_rad"))
      config.noise.optical_rotation_sigma = n.at("optical_rotation_sigma_rad").get<double>();
    if (n.contains("digitizer_sigma_mm"))
      config.noise.digitizer_sigma = n.at("digitizer_sigma_mm").get<double>();
    if (n.contains("magnetic_sigma_mm"))
      config.noise.magnetic_sigma = n.at("magnetic_sigma_mm").get<double>();
    if (n.contains("seed")) config.noise.seed = n.at("seed").get<std::uint64_t>();
    if (config.noise.optical_translation_sigma < 0 || config.noise.optical_rotation_sigma < 0 ||
        config.noise.digitizer_sigma < 0 || config.noise.magnetic_sigma < 0) {
      throw InvalidParamsError("noise sigmas must be non-negative");
    }
  }
  if (j.contains("trials")) config.trials = j.at("trials").get<int>();
  if (config.trials < 1) {
    throw InvalidParamsError("trials must be >= 1");
  }
  if (j.contains("threads")) config.threads = j.at("threads").get<int>();
  if (j.contains("geometry")) {
    const json& g = j.at("geometry");
    SimGeometry& geo = config.geometry;
    if (g.contains("pivot_poses")) geo.pivot_poses = g.at("pivot_poses").get<int>();
    if (g.contains("pivot_cone_deg")) geo.pivot_cone_deg = g.at("pivot_cone_deg").get<double>();
    if (g.contains("pivot_point_mm"))
      geo.pivot_point = vec3_from_json(g.at("pivot_point_mm"), "geometry");
    if (g.contains("handeye_poses")) geo.handeye_poses = g.at("handeye_poses").get<int>();
    if (g.contains("handeye_rotation_deg"))
      geo.handeye_rotation_deg = g.at("handeye_rotation_deg").get<double>();
    if (g.contains("handeye_translation_range_mm"))
      geo.handeye_translation_range = g.at("handeye_translation_range_mm").get<double>();
    if (g.contains("workspace_center_mm"))
      geo.workspace_center = vec3_from_json(g.at("workspace_center_mm"), "geometry");
    if (g.contains("digitizer_samples"))
      geo.digitizer_samples = g.at("digitizer_samples").get<int>();
    if (g.contains("digitizer_scatter_factor"))
      geo.digitizer_scatter_factor = g.at("digitizer_scatter_factor").get<double>();
    if (g.contains("readout_spacing_mm"))
      geo.readout_spacing = g.at("readout_spacing_mm").get<double>();
  }
  if (j.contains("ground_truth")) {
    FrameGraph graph;
    for (const auto& edge : j.at("ground_truth").at("edges")) {
      graph.insert(frame_from_string(edge.at("from").get<std::string>()),
                   frame_from_string(edge.at("to").get<std::string>()),
                   transform_from_json(edge.at("transform")));
    }
    config.ground_truth_frames = graph;
  }
  return config;
}

SimConfig load_sim_config(const std::filesystem::path& path) {
  return sim_config_from_json(parse_json_file(path));
}

void save_sim_config(const std::filesystem::path& path, const SimConfig& config) {
  write_text(path, dump_json(sim_config_to_json(config)));
}

void save_centerline_csv(const std::filesystem::path& path, const Centerline& line) {
  std::string out = "s,x,y,z,tx,ty,tz\n";
  for (const CenterlineSample& s : line.samples) {
    out += format_double(s.arclength) + "," + format_double(s.position.x()) + "," +
           format_double(s.position.y()) + "," + format_double(s.position.z()) + "," +
           format_double(s.tangent.x()) + "," + format_double(s.tangent.y()) + "," +
           format_double(s.tangent.z()) + "\n";
  }
  write_text(path, out);
}

}  // namespace spinenav::io
