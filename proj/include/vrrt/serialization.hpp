#pragma once

#include <filesystem>
#include <json.hpp>

#include "vrrt/collision.hpp"
#include "vrrt/kinematics.hpp"
#include "vrrt/planner.hpp"
#include "vrrt/renderer.hpp"

namespace vrrt {

using Json = nlohmann::json;

// Schemas (all JSON objects; unknown keys are rejected):
//   robot:  {"link_lengths": [..], "joint_limits": [[lo, hi], ..], "blobs_per_link": n}
//   scene:  {"workspace": {"min": [x, y], "max": [x, y]}, "obstacles": [{"min": .., "max": ..}, ..]}
//   camera: {"width", "height", "scale", "offset_x", "offset_y"}
//   render: {"blob_sigma", "blob_weight"}
//   params: flat object, keys as listed by planner_param_keys()

void to_json(Json& j, const RobotModel& m);
void from_json(const Json& j, RobotModel& m);
void to_json(Json& j, const Box& b);
void from_json(const Json& j, Box& b);
void to_json(Json& j, const Scene& s);
void from_json(const Json& j, Scene& s);
void to_json(Json& j, const Camera& c);
void from_json(const Json& j, Camera& c);
void to_json(Json& j, const RenderParams& r);
void from_json(const Json& j, RenderParams& r);

Json configuration_to_json(const Configuration& q);
Configuration configuration_from_json(const Json& j);

/// Flat parameter object. `apply_planner_params` overlays only the keys
/// present, so a config file can override a subset of the defaults.
Json planner_params_to_json(const PlannerParams& p);
void apply_planner_params(const Json& j, PlannerParams& p);
const std::vector<std::string>& planner_param_keys();

/// Path, trace and metadata. Wall time is written as-is; callers that need
/// reproducible bytes zero it first.
Json plan_result_to_json(const PlanResult& r);
PlanResult plan_result_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace vrrt
