#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "vrrt/baselines.hpp"
#include "vrrt/planner.hpp"
#include "vrrt/serialization.hpp"

namespace vrrt {

/// Success requires mean absolute joint error at or below this (radians).
inline constexpr double kSuccessJointError = 0.05;
/// Floating-point slack on the inclusive success boundary.
inline constexpr double kSuccessSlack = 1e-12;

struct BenchTask {
  std::string id;
  std::size_t scene_id = 0;
  Configuration q_start;
  Configuration q_goal;  ///< ground truth; planners only see it via rrt / rrt-star / noisy hints
  std::string goal_image;  ///< relative to the dataset root
  double bin = 0.0;
  std::uint64_t seed = 0;
};

/// Robot, rendering setup, scenes and tasks of one benchmark dataset.
struct Dataset {
  RobotModel model = RobotModel::desk_arm();
  Camera camera = Camera::desk();
  RenderParams render;
  Configuration q_start;
  std::vector<Scene> scenes;
  std::vector<BenchTask> tasks;
  std::filesystem::path root;  ///< goal image paths resolve against this

  Image load_goal(const BenchTask& task) const;
  VisualObjective objective(const BenchTask& task) const;
};

/// Canonical start: first joint straight up, remaining joints alternating +-0.5 rad.
Configuration canonical_pose(const RobotModel& model);

Json dataset_to_json(const Dataset& d);
Dataset dataset_from_json(const Json& j, const std::filesystem::path& root);
void save_manifest(const Dataset& d, const std::filesystem::path& manifest_path);
Dataset load_manifest(const std::filesystem::path& manifest_path);

/// Self-contained single-task file (robot, camera, render, scene, task).
Json task_file_json(const Dataset& d, const BenchTask& task, const std::string& image_path);
/// Loads a single-task file as a one-task dataset.
Dataset load_task_file(const std::filesystem::path& path);

struct SceneGenOptions {
  std::size_t n_obstacles = 4;
  double size_min = 0.1;
  double size_max = 0.35;
  /// Stage-1 boxes sit this far (at most) from a canonical-pose link.
  double near_gap_max = 0.3;
  std::size_t max_retries = 5000;
};

/// Two-stage placement: half the boxes (rounded up) hug links of the
/// canonical pose without touching them, the rest land uniformly in the
/// workspace. Throws std::runtime_error if placement keeps failing.
Scene generate_scene(std::uint64_t seed, const SceneGenOptions& options, const RobotModel& model,
                     const Configuration& canonical, const Box& workspace = Scene{}.workspace);

/// `count` scenes with obstacle counts uniform in [min_obstacles, max_obstacles].
std::vector<Scene> generate_scenes(std::uint64_t seed, std::size_t count, std::size_t min_obstacles,
                                   std::size_t max_obstacles, const RobotModel& model, const Configuration& canonical,
                                   SceneGenOptions options = {});

struct TaskGenOptions {
  std::vector<double> bins{0.5, 1.0, 1.5, 2.0, 2.5};
  std::size_t per_bin = 50;
  double band = 0.1;
  RrtOptions rrt{0.05, 0.2, 20000, 0, kDefaultEdgeResolution};
  std::size_t max_attempts_per_task = 2000;
  std::uint64_t seed = 0;
  std::size_t workers = 1;  ///< (scene, bin) pairs generated concurrently; output does not depend on it
};

/// Fills dataset.tasks (per_bin tasks per bin per scene) and writes goal
/// images under `out_dir`/images. Dataset root becomes out_dir.
void generate_tasks(Dataset& dataset, const TaskGenOptions& options, const std::filesystem::path& out_dir);

struct TaskCheck {
  bool collision_free = false;
  bool reachable = false;
  bool in_bin = false;
  bool ok() const { return collision_free && reachable && in_bin; }
};
/// Independent re-validation of one task (fresh RRT seed).
TaskCheck validate_task(const Dataset& dataset, const BenchTask& task, double band, const RrtOptions& rrt);

struct Metrics {
  bool success = false;
  bool collision_free = false;
  double joint_error = 0.0;  ///< mean |q_final - q_goal|
  std::vector<double> per_joint_error;
  double path_length = 0.0;
  double time = 0.0;
  double psnr = 0.0;
};

Metrics evaluate(const PlanResult& result, const BenchTask& task, const Scene& scene, const RobotModel& model,
                 const Camera& camera, const RenderParams& render, const Image& goal,
                 double resolution = kDefaultEdgeResolution);

enum class PlannerKind { VRrt, GradientOnly, TwoStage, Rrt, RrtStar };
std::string_view to_string(PlannerKind k);
/// Accepts vrrt | gd | two-stage | rrt | rrt-star.
PlannerKind parse_planner_kind(std::string_view name);

struct PlannerSpec {
  std::string label;
  PlannerKind kind = PlannerKind::VRrt;
  PlannerParams params;
};

/// Runs one planner on one task. The planner seed mixes params.seed with the task seed.
PlanResult run_planner(const PlannerSpec& spec, const Dataset& dataset, const BenchTask& task);

struct TaskLogRow {
  std::string task_id;
  std::string planner;
  double bin = 0.0;
  std::uint64_t seed = 0;  ///< effective planner seed
  bool success = false;
  double joint_error = 0.0;
  double path_length = 0.0;
  double time = 0.0;
  double psnr = 0.0;
};

struct SummaryRow {
  std::string planner;
  double bin = 0.0;
  double success_rate = 0.0;  ///< percent
  double time_mean = 0.0;     ///< over successes only
  double path_length_mean = 0.0;
  std::size_t n_success = 0;
  std::size_t n_total = 0;
};

/// Groups rows by (planner in first-appearance order, bin ascending).
std::vector<SummaryRow> aggregate(const std::vector<TaskLogRow>& log);

struct BenchOptions {
  std::size_t workers = 1;
  bool record_time = true;  ///< false writes zero times so output files are reproducible byte for byte
};

struct BenchReport {
  std::vector<TaskLogRow> log;
  std::vector<SummaryRow> summary;
  std::vector<PlanResult> results;  ///< parallel to log
};

/// Every spec on every task; rows ordered by spec then task regardless of worker count.
BenchReport run_tasks(const Dataset& dataset, const std::vector<PlannerSpec>& specs, const BenchOptions& options);

/// run_tasks plus summary.csv and tasks_log.csv under out_dir.
BenchReport run_benchmark(const Dataset& dataset, const std::vector<PlannerSpec>& specs,
                          const std::filesystem::path& out_dir, const BenchOptions& options);

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
void write_task_log_csv(std::ostream& out, const std::vector<TaskLogRow>& rows);
std::vector<TaskLogRow> read_task_log_csv(std::istream& in);

/// Subset of a dataset's tasks whose bin equals `bin`.
Dataset filter_bin(const Dataset& dataset, double bin);

}  // namespace vrrt
