#pragma once

#include <array>
#include <filesystem>
#include <nlohmann/json_fwd.hpp>
#include <span>
#include <string>
#include <vector>

#include "spinenav/metrics.hpp"
#include "spinenav/registration.hpp"
#include "spinenav/sim.hpp"
#include "spinenav/trajectory.hpp"

namespace spinenav::io {

/// Shortest round-trip decimal form (std::to_chars); every text writer goes
/// through this so write -> read -> write is byte-identical.
std::string format_double(double value);

// ---- poses CSV: header `qw,qx,qy,qz,tx,ty,tz`, one pose per row ----
std::vector<RigidTransform> load_poses_csv(const std::filesystem::path& path);
void save_poses_csv(const std::filesystem::path& path, std::span<const RigidTransform> poses);

// ---- point clouds: ASCII PLY or CSV `x,y,z`, chosen by extension ----
PointCloud load_cloud(const std::filesystem::path& path);
void save_cloud(const std::filesystem::path& path, const PointCloud& cloud);

// ---- picked correspondences: {"src":[[x,y,z]x3],"dst":[[x,y,z]x3]} ----
struct Picks {
  std::array<Eigen::Vector3d, 3> src;
  std::array<Eigen::Vector3d, 3> dst;
};
Picks load_picks(const std::filesystem::path& path);
void save_picks(const std::filesystem::path& path, const Picks& picks);

// ---- JSON forms ----
nlohmann::json transform_to_json(const RigidTransform& t);
RigidTransform transform_from_json(const nlohmann::json& j);

nlohmann::json plan_to_json(const JShapePlan& plan);
JShapePlan plan_from_json(const nlohmann::json& j);
JShapePlan load_plan(const std::filesystem::path& path);
void save_plan(const std::filesystem::path& path, const JShapePlan& plan);

nlohmann::json pivot_result_to_json(const PivotResult& r);
nlohmann::json handeye_result_to_json(const HandEyeResult& r);
nlohmann::json registration_result_to_json(const RegistrationResult& r);

nlohmann::json report_to_json(const PipelineReport& report);
PipelineReport report_from_json(const nlohmann::json& j);
PipelineReport load_report(const std::filesystem::path& path);
void save_report(const std::filesystem::path& path, const PipelineReport& report);

nlohmann::json sim_config_to_json(const SimConfig& config);
SimConfig sim_config_from_json(const nlohmann::json& j);
SimConfig load_sim_config(const std::filesystem::path& path);
void save_sim_config(const std::filesystem::path& path, const SimConfig& config);

// ---- centerline CSV: header `s,x,y,z,tx,ty,tz` ----
void save_centerline_csv(const std::filesystem::path& path, const Centerline& line);

/// Canonical JSON text (2-space indent, trailing newline); parse + re-dump of
/// any file written this way is byte-identical.
std::string dump_json(const nlohmann::json& j);
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);
nlohmann::json parse_json_file(const std::filesystem::path& path);

}  // namespace spinenav::io
