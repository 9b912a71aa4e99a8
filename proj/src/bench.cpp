#include "vrrt/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "vrrt/image_io.hpp"

namespace vrrt {

namespace {

constexpr std::uint64_t kSceneStream = 21;
constexpr std::uint64_t kTaskStream = 22;
constexpr std::uint64_t kValidateStream = 23;
constexpr std::uint64_t kNoisyGoalStream = 24;

// Runs fn(0..n-1) on up to `workers` threads. Exceptions are rethrown in job order.
template <class Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t job = next++; job < n; job = next++) {
      try {
        fn(job);
      } catch (...) {
        errors[job] = std::current_exception();
      }
    }
  };
  const std::size_t n_workers = std::max<std::size_t>(1, std::min(workers, std::max<std::size_t>(n, 1)));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

Json task_to_json(const BenchTask& t) {
  return Json{{"id", t.id},
              {"scene_id", t.scene_id},
              {"q_start", configuration_to_json(t.q_start)},
              {"q_goal", configuration_to_json(t.q_goal)},
              {"goal_image", t.goal_image},
              {"bin", t.bin},
              {"seed", t.seed}};
}

BenchTask task_from_json(const Json& j) {
  BenchTask t;
  t.id = j.at("id").get<std::string>();
  t.scene_id = j.at("scene_id").get<std::size_t>();
  t.q_start = configuration_from_json(j.at("q_start"));
  t.q_goal = configuration_from_json(j.at("q_goal"));
  t.goal_image = j.at("goal_image").get<std::string>();
  t.bin = j.at("bin").get<double>();
  t.seed = j.at("seed").get<std::uint64_t>();
  return t;
}

std::string format_double(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string bin_tag(double bin) { return format_fixed(bin, 1); }

bool boxes_touch_pose(const Box& box, const RobotModel& model, const Configuration& q) {
  Scene probe;
  probe.workspace = Box{Vec2(-1e9, -1e9), Vec2(1e9, 1e9)};
  probe.obstacles.push_back(box);
  return config_in_collision(probe, model, q);
}

}  // namespace

Image Dataset::load_goal(const BenchTask& task) const { return read_pgm(root / task.goal_image); }

VisualObjective Dataset::objective(const BenchTask& task) const {
  return VisualObjective(model, camera, render, load_goal(task));
}

Configuration canonical_pose(const RobotModel& model) {
  Configuration q(static_cast<Eigen::Index>(model.dof()));
  for (std::size_t i = 0; i < model.dof(); ++i) q[i] = (i == 0) ? std::numbers::pi / 2 : (i % 2 ? -0.5 : 0.5);
  return model.clamp(q);
}

Json dataset_to_json(const Dataset& d) {
  Json tasks = Json::array();
  for (const auto& t : d.tasks) tasks.push_back(task_to_json(t));
  return Json{{"robot", d.model},   {"camera", d.camera}, {"render", d.render},
              {"q_start", configuration_to_json(d.q_start)}, {"scenes", d.scenes}, {"tasks", tasks}};
}

Dataset dataset_from_json(const Json& j, const std::filesystem::path& root) {
  Dataset d;
  d.model = j.at("robot").get<RobotModel>();
  d.camera = j.at("camera").get<Camera>();
  d.render = j.at("render").get<RenderParams>();
  d.q_start = j.contains("q_start") ? configuration_from_json(j.at("q_start")) : canonical_pose(d.model);
  d.scenes = j.at("scenes").get<std::vector<Scene>>();
  for (const Json& t : j.at("tasks")) {
    BenchTask task = task_from_json(t);
    if (task.scene_id >= d.scenes.size()) throw std::invalid_argument("task " + task.id + " references a missing scene");
    d.tasks.push_back(std::move(task));
  }
  d.root = root;
  return d;
}

void save_manifest(const Dataset& d, const std::filesystem::path& manifest_path) {
  write_json_file(manifest_path, dataset_to_json(d));
}

Dataset load_manifest(const std::filesystem::path& manifest_path) {
  return dataset_from_json(read_json_file(manifest_path), manifest_path.parent_path());
}

Json task_file_json(const Dataset& d, const BenchTask& task, const std::string& image_path) {
  BenchTask t = task;
  t.goal_image = image_path;
  t.scene_id = 0;
  return Json{{"robot", d.model},
              {"camera", d.camera},
              {"render", d.render},
              {"scene", d.scenes.at(task.scene_id)},
              {"task", task_to_json(t)}};
}

Dataset load_task_file(const std::filesystem::path& path) {
  const Json j = read_json_file(path);
  for (const auto& [key, _] : j.items()) {
    if (key != "robot" && key != "camera" && key != "render" && key != "scene" && key != "task") {
      throw std::invalid_argument("unknown key '" + key + "' in task file");
    }
  }
  Dataset d;
  d.model = j.at("robot").get<RobotModel>();
  d.camera = j.at("camera").get<Camera>();
  d.render = j.at("render").get<RenderParams>();
  d.scenes.push_back(j.at("scene").get<Scene>());
  d.tasks.push_back(task_from_json(j.at("task")));
  d.tasks.back().scene_id = 0;
  d.q_start = d.tasks.back().q_start;
  d.root = path.parent_path();
  return d;
}

Scene generate_scene(std::uint64_t seed, const SceneGenOptions& options, const RobotModel& model,
                     const Configuration& canonical, const Box& workspace) {
  Scene scene;
  scene.workspace = workspace;
  if (options.n_obstacles == 0) return scene;
  if (!(options.size_min > 0.0 && options.size_min <= options.size_max)) {
    throw std::invalid_argument("obstacle size range must satisfy 0 < min <= max");
  }
  Rng rng(seed);
  const std::vector<Vec2> joints = joint_positions(model, canonical);
  const std::size_t near_count = (options.n_obstacles + 1) / 2;

  for (std::size_t placed = 0; placed < options.n_obstacles; ++placed) {
    const bool near_link = placed < near_count;
    bool ok = false;
    for (std::size_t attempt = 0; attempt < options.max_retries && !ok; ++attempt) {
      const Vec2 half(0.5 * rng.uniform(options.size_min, options.size_max),
                      0.5 * rng.uniform(options.size_min, options.size_max));
      Vec2 center;
      if (near_link) {
        const std::size_t link = rng.index(model.dof());
        const Vec2 a = joints[link];
        const Vec2 b = joints[link + 1];
        const Vec2 along = a + rng.uniform(0.2, 0.8) * (b - a);
        Vec2 normal(-(b - a).y(), (b - a).x());
        normal.normalize();
        if (rng.bernoulli(0.5)) normal = -normal;
        // Far enough that the box clears the link, close enough to crowd it.
        const double reach = half.norm() + rng.uniform(0.02, options.near_gap_max);
        center = along + reach * normal;
      } else {
        center = Vec2(rng.uniform(workspace.min.x(), workspace.max.x()), rng.uniform(workspace.min.y(), workspace.max.y()));
      }
      const Box box{center - half, center + half};
      if (!workspace.contains(box.min) || !workspace.contains(box.max)) continue;
      if (boxes_touch_pose(box, model, canonical)) continue;
      scene.obstacles.push_back(box);
      ok = true;
    }
    if (!ok) {
      throw std::runtime_error("obstacle placement failed after " + std::to_string(options.max_retries) +
                               " retries (obstacle " + std::to_string(placed) + ")");
    }
  }
  return scene;
}

std::vector<Scene> generate_scenes(std::uint64_t seed, std::size_t count, std::size_t min_obstacles,
                                   std::size_t max_obstacles, const RobotModel& model, const Configuration& canonical,
                                   SceneGenOptions options) {
  if (min_obstacles > max_obstacles) throw std::invalid_argument("min_obstacles > max_obstacles");
  std::vector<Scene> scenes;
  for (std::size_t s = 0; s < count; ++s) {
    Rng rng(mix_seed(seed, kSceneStream + 1000 * s));
    options.n_obstacles = min_obstacles + rng.index(max_obstacles - min_obstacles + 1);
    scenes.push_back(generate_scene(rng.next_u64(), options, model, canonical));
  }
  return scenes;
}

void generate_tasks(Dataset& dataset, const TaskGenOptions& options, const std::filesystem::path& out_dir) {
  if (options.bins.empty()) throw std::invalid_argument("at least one distance bin is required");
  const RobotModel& model = dataset.model;
  if (dataset.q_start.size() == 0) dataset.q_start = canonical_pose(model);
  const Configuration& q_start = dataset.q_start;
  std::filesystem::create_directories(out_dir / "images");
  dataset.root = out_dir;
  dataset.tasks.clear();
  for (std::size_t s = 0; s < dataset.scenes.size(); ++s) {
    if (!config_valid(dataset.scenes[s], model, q_start)) {
      throw std::runtime_error("start configuration collides in scene " + std::to_string(s));
    }
  }

  // Every (scene, bin) pair has its own stream, so pairs can run in any order.
  const std::size_t n_bins = options.bins.size();
  std::vector<std::vector<BenchTask>> per_pair(dataset.scenes.size() * n_bins);
  parallel_for(per_pair.size(), options.workers, [&](std::size_t job) {
    const std::size_t s = job / n_bins;
    const std::size_t b = job % n_bins;
    const Scene& scene = dataset.scenes[s];
    const double bin = options.bins[b];
    Rng rng(mix_seed(options.seed, kTaskStream + 1000 * s + b));
    std::size_t accepted = 0;
    std::size_t attempts = 0;
    std::size_t rejected_limits = 0, rejected_collision = 0, rejected_rrt = 0;
    const std::size_t budget = options.max_attempts_per_task * std::max<std::size_t>(options.per_bin, 1);
    while (accepted < options.per_bin) {
      if (++attempts > budget) {
        throw std::runtime_error("scene " + std::to_string(s) + " bin " + bin_tag(bin) + ": only " +
                                 std::to_string(accepted) + "/" + std::to_string(options.per_bin) +
                                 " goals after " + std::to_string(budget) + " attempts (joint limits " +
                                 std::to_string(rejected_limits) + ", collision " +
                                 std::to_string(rejected_collision) + ", rrt " + std::to_string(rejected_rrt) + ")");
      }
      const double dist = rng.uniform(std::max(0.0, bin - options.band), bin + options.band);
      const Eigen::VectorXd dir = sample_ball_offset(model.dof(), 1.0, rng).normalized();
      const Configuration q_goal = q_start + dist * dir;
      const std::uint64_t task_seed = rng.next_u64();
      if (!model.within_limits(q_goal)) {
        ++rejected_limits;
        continue;
      }
      if (config_in_collision(scene, model, q_goal)) {
        ++rejected_collision;
        continue;
      }
      RrtOptions rrt = options.rrt;
      rrt.seed = task_seed;
      if (!rrt_plan(scene, model, q_start, q_goal, rrt).reached) {
        ++rejected_rrt;
        continue;
      }
      BenchTask task;
      task.id = "s" + std::to_string(s) + "_b" + bin_tag(bin) + "_" + std::to_string(accepted);
      task.scene_id = s;
      task.q_start = q_start;
      task.q_goal = q_goal;
      task.goal_image = "images/" + task.id + ".pgm";
      task.bin = bin;
      task.seed = task_seed;
      write_pgm(out_dir / task.goal_image, render(model, q_goal, dataset.camera, dataset.render));
      per_pair[job].push_back(std::move(task));
      ++accepted;
    }
  });
  for (auto& tasks : per_pair) {
    for (auto& t : tasks) dataset.tasks.push_back(std::move(t));
  }
}

TaskCheck validate_task(const Dataset& dataset, const BenchTask& task, double band, const RrtOptions& rrt) {
  TaskCheck check;
  const Scene& scene = dataset.scenes.at(task.scene_id);
  check.collision_free = config_valid(scene, dataset.model, task.q_goal);
  check.in_bin = std::abs(config_distance(task.q_start, task.q_goal) - task.bin) <= band + 1e-12;
  if (check.collision_free && config_valid(scene, dataset.model, task.q_start)) {
    RrtOptions opts = rrt;
    opts.seed = mix_seed(task.seed, kValidateStream);
    const PlanResult r = rrt_plan(scene, dataset.model, task.q_start, task.q_goal, opts);
    check.reachable = r.reached && path_collision_free(r.path, scene, dataset.model, opts.edge_resolution) &&
                      r.path.front() == task.q_start && r.path.back() == task.q_goal;
  }
  return check;
}

Metrics evaluate(const PlanResult& result, const BenchTask& task, const Scene& scene, const RobotModel& model,
                 const Camera& camera, const RenderParams& render_params, const Image& goal, double resolution) {
  Metrics m;
  const Configuration& q_final = result.path.empty() ? result.best_config : result.path.back();
  const Eigen::VectorXd diff = (q_final - task.q_goal).cwiseAbs();
  m.per_joint_error.assign(diff.data(), diff.data() + diff.size());
  m.joint_error = diff.size() ? diff.mean() : 0.0;
  m.path_length = path_length(result.path);
  m.time = result.wall_time;
  m.psnr = psnr(render(model, q_final, camera, render_params), goal);
  m.collision_free = result.feasible && !result.path.empty() && result.path.front() == task.q_start &&
                     path_collision_free(result.path, scene, model, resolution);
  m.success = m.collision_free && result.reached && m.joint_error <= kSuccessJointError + kSuccessSlack;
  return m;
}

std::string_view to_string(PlannerKind k) {
  switch (k) {
    case PlannerKind::VRrt: return "vrrt";
    case PlannerKind::GradientOnly: return "gd";
    case PlannerKind::TwoStage: return "two-stage";
    case PlannerKind::Rrt: return "rrt";
    case PlannerKind::RrtStar: return "rrt-star";
  }
  return "vrrt";
}

PlannerKind parse_planner_kind(std::string_view name) {
  for (auto k : {PlannerKind::VRrt, PlannerKind::GradientOnly, PlannerKind::TwoStage, PlannerKind::Rrt,
                 PlannerKind::RrtStar}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown planner '" + std::string(name) + "' (expected vrrt|gd|two-stage|rrt|rrt-star)");
}

PlanResult run_planner(const PlannerSpec& spec, const Dataset& dataset, const BenchTask& task) {
  const VisualObjective objective = dataset.objective(task);
  const Scene& scene = dataset.scenes.at(task.scene_id);
  PlannerParams params = spec.params;
  params.seed = mix_seed(spec.params.seed, task.seed);

  PlanResult result;
  switch (spec.kind) {
    case PlannerKind::VRrt: {
      std::optional<Configuration> noisy;
      if (params.noisy_sigma > 0.0) {
        Rng rng(mix_seed(task.seed, kNoisyGoalStream));
        Configuration q = task.q_goal;
        for (Eigen::Index j = 0; j < q.size(); ++j) q[j] += params.noisy_sigma * rng.normal();
        noisy = q;
      }
      result = plan_vrrt(scene, objective, task.q_start, params, noisy);
      break;
    }
    case PlannerKind::GradientOnly: result = gradient_only_plan(scene, objective, task.q_start, params); break;
    case PlannerKind::TwoStage: result = two_stage_plan(scene, objective, task.q_start, params); break;
    case PlannerKind::Rrt: {
      RrtOptions opts{params.rrt_goal_bias, params.rrt_step, params.rrt_budget, params.seed, params.edge_resolution};
      result = rrt_plan(scene, dataset.model, task.q_start, task.q_goal, opts);
      result.best_loss = objective.loss(result.path.back());
      break;
    }
    case PlannerKind::RrtStar:
      result = rrt_star_plan(scene, dataset.model, task.q_start, task.q_goal, params);
      result.best_loss = objective.loss(result.path.back());
      break;
  }
  return result;
}

std::vector<SummaryRow> aggregate(const std::vector<TaskLogRow>& log) {
  std::vector<std::string> planners;
  std::map<std::pair<std::string, double>, SummaryRow> groups;
  for (const TaskLogRow& r : log) {
    if (std::find(planners.begin(), planners.end(), r.planner) == planners.end()) planners.push_back(r.planner);
    SummaryRow& g = groups[{r.planner, r.bin}];
    g.planner = r.planner;
    g.bin = r.bin;
    ++g.n_total;
    if (r.success) {
      ++g.n_success;
      g.time_mean += r.time;
      g.path_length_mean += r.path_length;
    }
  }
  std::vector<SummaryRow> out;
  for (const std::string& p : planners) {
    for (auto& [key, g] : groups) {
      if (key.first != p) continue;
      if (g.n_success > 0) {
        g.time_mean /= static_cast<double>(g.n_success);
        g.path_length_mean /= static_cast<double>(g.n_success);
      }
      g.success_rate = 100.0 * static_cast<double>(g.n_success) / static_cast<double>(g.n_total);
      out.push_back(g);
    }
  }
  return out;
}

BenchReport run_tasks(const Dataset& dataset, const std::vector<PlannerSpec>& specs, const BenchOptions& options) {
  const std::size_t n_tasks = dataset.tasks.size();
  const std::size_t n_jobs = specs.size() * n_tasks;
  BenchReport report;
  report.log.resize(n_jobs);
  report.results.resize(n_jobs);
  parallel_for(n_jobs, options.workers, [&](std::size_t job) {
    const PlannerSpec& spec = specs[job / n_tasks];
    const BenchTask& task = dataset.tasks[job % n_tasks];
    PlanResult result = run_planner(spec, dataset, task);
    if (!options.record_time) result.wall_time = 0.0;
    const Metrics m = evaluate(result, task, dataset.scenes.at(task.scene_id), dataset.model, dataset.camera,
                               dataset.render, dataset.load_goal(task), spec.params.edge_resolution);
    report.log[job] = TaskLogRow{task.id, spec.label, task.bin, mix_seed(spec.params.seed, task.seed), m.success,
                                 m.joint_error, m.path_length, m.time, m.psnr};
    report.results[job] = std::move(result);
  });
  report.summary = aggregate(report.log);
  return report;
}

BenchReport run_benchmark(const Dataset& dataset, const std::vector<PlannerSpec>& specs,
                          const std::filesystem::path& out_dir, const BenchOptions& options) {
  for (const BenchTask& t : dataset.tasks) {
    if (!std::filesystem::exists(dataset.root / t.goal_image)) {
      throw std::runtime_error("missing goal image for task " + t.id + ": " + (dataset.root / t.goal_image).string());
    }
  }
  BenchReport report = run_tasks(dataset, specs, options);
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream out(out_dir / "summary.csv");
    write_summary_csv(out, report.summary);
  }
  {
    std::ofstream out(out_dir / "tasks_log.csv");
    write_task_log_csv(out, report.log);
  }
  return report;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "planner,bin,SR,time_mean,pl_mean,n_success,n_total\n";
  for (const SummaryRow& r : rows) {
    out << r.planner << "," << bin_tag(r.bin) << "," << format_fixed(r.success_rate, 2) << ","
        << format_fixed(r.time_mean, 4) << "," << format_fixed(r.path_length_mean, 4) << "," << r.n_success << ","
        << r.n_total << "\n";
  }
}

void write_task_log_csv(std::ostream& out, const std::vector<TaskLogRow>& rows) {
  out << "task_id,planner,seed,bin,success,joint_error,pl,time,psnr\n";
  for (const TaskLogRow& r : rows) {
    out << r.task_id << "," << r.planner << "," << r.seed << "," << format_double(r.bin, 17) << ","
        << (r.success ? 1 : 0) << "," << format_double(r.joint_error, 17) << "," << format_double(r.path_length, 17)
        << "," << format_double(r.time, 17) << "," << format_double(r.psnr, 17) << "\n";
  }
}

std::vector<TaskLogRow> read_task_log_csv(std::istream& in) {
  std::vector<TaskLogRow> rows;
  std::string line;
  if (!std::getline(in, line)) return rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 9) throw std::runtime_error("malformed task log row: " + line);
    TaskLogRow r;
    r.task_id = f[0];
    r.planner = f[1];
    r.seed = std::stoull(f[2]);
    r.bin = std::stod(f[3]);
    r.success = f[4] == "1";
    r.joint_error = std::stod(f[5]);
    r.path_length = std::stod(f[6]);
    r.time = std::stod(f[7]);
    r.psnr = std::stod(f[8]);
    rows.push_back(std::move(r));
  }
  return rows;
}

Dataset filter_bin(const Dataset& dataset, double bin) {
  Dataset out = dataset;
  out.tasks.clear();
  for (const BenchTask& t : dataset.tasks) {
    if (std::abs(t.bin - bin) < 1e-9) out.tasks.push_back(t);
  }
  return out;
}

}  // namespace vrrt
