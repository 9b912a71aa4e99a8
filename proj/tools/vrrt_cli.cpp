// vrrt: dataset generation, planning, benchmarking and diagnostics.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "vrrt/bench.hpp"
#include "vrrt/gradcheck.hpp"
#include "vrrt/image_io.hpp"
#include "vrrt/visualize.hpp"

namespace fs = std::filesystem;
using namespace vrrt;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitFailure = 1;

// Config file: flat JSON object keyed by long flag name (underscores and
// dashes are interchangeable). Values fill options not given on the command line.
void apply_config(CLI::App* sub, const std::string& path) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw CLI::FileError::Missing(path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw CLI::FileError(path + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw CLI::FileError(path + " must hold a JSON object");
  for (const auto& [key, value] : j.items()) {
    std::string name = key;
    std::replace(name.begin(), name.end(), '_', '-');
    CLI::Option* opt = name == "config" || name == "help" ? nullptr : sub->get_option_no_throw("--" + name);
    if (!opt) throw CLI::FileError("unknown key '" + key + "' in " + path);
    if (opt->count() > 0) continue;
    auto text = [&](const Json& v) {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_boolean()) return std::string(v.get<bool>() ? "true" : "false");
      if (v.is_number()) return v.dump();
      throw CLI::FileError("key '" + key + "' in " + path + " must be a number, string, boolean or array");
    };
    std::vector<std::string> inputs;
    if (value.is_array()) {
      for (const Json& v : value) inputs.push_back(text(v));
    } else {
      inputs.push_back(text(value));
    }
    opt->clear();
    try {
      for (const std::string& v : inputs) opt->add_result(v);
      opt->run_callback();
    } catch (const CLI::ParseError& e) {
      throw CLI::FileError("bad value for '" + key + "' in " + path + ": " + e.what());
    }
  }
}

fs::path default_out_dir() {
  const char* env = std::getenv("VRRT_OUT_DIR");
  return env && *env ? fs::path(env) : fs::path("vrrt_out");
}

void add_config(CLI::App* sub) {
  auto path = std::make_shared<std::string>();
  sub->add_option("--config", *path, "JSON file keyed by long flag names; flags override it");
  sub->parse_complete_callback([sub, path] { apply_config(sub, *path); });
}

struct PlannerFlags {
  PlannerParams params;
  std::string optimizer = "adam";
  std::string frontier_policy = "geometric";
};

void add_planner_flags(CLI::App* sub, PlannerFlags& f) {
  PlannerParams& p = f.params;
  const char* g = "Planner";
  sub->add_option("--epsilon", p.step_size, "random steering step")->group(g);
  sub->add_option("--alpha", p.optimizer.alpha, "gradient step size")->group(g);
  sub->add_option("--beta1", p.optimizer.beta1, "first-moment decay")->group(g);
  sub->add_option("--beta2", p.optimizer.beta2, "second-moment decay")->group(g);
  sub->add_option("--delta", p.optimizer.delta, "optimizer stabilizer")->group(g);
  sub->add_option("--momentum", p.optimizer.momentum, "momentum coefficient (momentum strategy)")->group(g);
  sub->add_option("--optimizer", f.optimizer, "inherited optimizer state")
      ->check(CLI::IsMember({"adam", "naive", "momentum", "adagrad", "rmsprop", "lion"}))
      ->group(g);
  sub->add_option("--kappa", p.frontier.kappa, "truncated geometric parameter")->group(g);
  sub->add_option("--frontier-size", p.frontier.capacity, "frontier capacity M")->group(g);
  sub->add_option("--frontier-policy", f.frontier_policy, "frontier rank sampling")
      ->check(CLI::IsMember({"geometric", "uniform", "topk"}))
      ->group(g);
  sub->add_option("--top-k", p.frontier.top_k, "K for the topk policy")->group(g);
  sub->add_option("--rho", p.ball_radius, "exploration ball radius")->group(g);
  sub->add_option("--explore-ratio", p.explore_ratio, "exploration ratio r")->group(g);
  sub->add_option("--frontier-ratio", p.frontier_ratio, "frontier sampling ratio eta")->group(g);
  sub->add_option("--batch", p.batch, "expansion attempts per iteration")->group(g);
  sub->add_option("--plateau-eps", p.plateau_eps, "plateau loss-change threshold")->group(g);
  sub->add_option("--plateau-iters", p.plateau_iters, "plateau window (iterations)")->group(g);
  sub->add_option("--max-iters", p.max_iters, "iteration cap")->group(g);
  sub->add_option("--rewire", p.rewire, "RRT* rewiring of new nodes")->group(g);
  sub->add_option("--rewire-radius", p.rewire_radius, "rewiring radius")->group(g);
  sub->add_option("--edge-resolution", p.edge_resolution, "edge collision resolution (rad)")->group(g);
  sub->add_option("--shortcut-attempts", p.shortcut_attempts, "path shortcut attempts")->group(g);
  sub->add_option("--noisy-fraction", p.noisy_fraction, "share of exploit steps toward the noisy goal")->group(g);
  sub->add_option("--noisy-sigma", p.noisy_sigma, "noisy goal hint std-dev (0 = visual only)")->group(g);
  sub->add_option("--rrt-step", p.rrt_step, "RRT / RRT* step")->group(g);
  sub->add_option("--rrt-goal-bias", p.rrt_goal_bias, "RRT / RRT* goal bias")->group(g);
  sub->add_option("--rrt-budget", p.rrt_budget, "RRT / RRT* iteration budget")->group(g);
  sub->add_option("--rrt-rewire-radius", p.rrt_rewire_radius, "RRT* rewiring radius")->group(g);
}

PlannerParams finish_params(const PlannerFlags& f, std::uint64_t seed) {
  PlannerParams p = f.params;
  p.optimizer.strategy = parse_strategy(f.optimizer);
  p.frontier.policy = parse_frontier_policy(f.frontier_policy);
  p.seed = seed;
  p.validate();
  return p;
}

RobotModel load_robot(const std::string& spec) {
  if (spec == "desk") return RobotModel::desk_arm();
  return read_json_file(spec).get<RobotModel>();
}

// Either a self-contained task file or a manifest plus task id.
struct TaskSource {
  std::string task_file;
  std::string manifest;
  std::string task_id;
};

void add_task_source(CLI::App* sub, TaskSource& src) {
  auto* file = sub->add_option("--task", src.task_file, "single-task JSON file");
  auto* man = sub->add_option("--manifest", src.manifest, "dataset manifest (with --task-id)");
  sub->add_option("--task-id", src.task_id, "task id inside the manifest")->needs(man);
  file->excludes(man);
}

std::pair<Dataset, std::size_t> resolve_task(const TaskSource& src) {
  if (!src.task_file.empty()) return {load_task_file(src.task_file), 0};
  if (src.manifest.empty()) throw std::invalid_argument("give --task FILE or --manifest FILE --task-id ID");
  Dataset d = load_manifest(src.manifest);
  for (std::size_t i = 0; i < d.tasks.size(); ++i) {
    if (d.tasks[i].id == src.task_id) return {std::move(d), i};
  }
  throw std::invalid_argument("task '" + src.task_id + "' not found in " + src.manifest);
}

Json metrics_json(const Metrics& m) {
  return Json{{"success", m.success},
              {"collision_free", m.collision_free},
              {"joint_error", m.joint_error},
              {"per_joint_error", m.per_joint_error},
              {"path_length", m.path_length},
              {"time", m.time},
              {"psnr", m.psnr}};
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Visual-goal RRT planning for planar arms"};
  app.name("vrrt");
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  {
    std::string defaults = "Planner defaults (plan, bench, viz):";
    const Json params = planner_params_to_json(PlannerParams{});
    for (const auto& [key, value] : params.items()) {
      defaults += " " + key + "=" + (value.is_string() ? value.get<std::string>() : value.dump());
    }
    app.footer(defaults + "\nDefault output directory: $VRRT_OUT_DIR, else ./vrrt_out");
  }

  std::uint64_t seed = 0;
  fs::path out;
  bool timing = false;
  int status = 0;

  // gen-scenes
  auto* gen_scenes = app.add_subcommand("gen-scenes", "generate cluttered scenes into a fresh manifest");
  std::size_t n_scenes = 6, min_obs = 3, max_obs = 5;
  gen_scenes->add_option("--count", n_scenes, "number of scenes");
  gen_scenes->add_option("--min-obstacles", min_obs, "fewest boxes per scene");
  gen_scenes->add_option("--max-obstacles", max_obs, "most boxes per scene");
  gen_scenes->add_option("--seed", seed, "random seed");
  gen_scenes->add_option("--out", out, "output directory (manifest.json)");
  add_config(gen_scenes);
  gen_scenes->callback([&] {
    if (out.empty()) out = default_out_dir();
    Dataset d;
    d.q_start = canonical_pose(d.model);
    d.scenes = generate_scenes(seed, n_scenes, min_obs, max_obs, d.model, d.q_start);
    fs::create_directories(out);
    save_manifest(d, out / "manifest.json");
    std::cout << "wrote " << n_scenes << " scenes to " << (out / "manifest.json").string() << "\n";
  });

  // gen-tasks
  auto* gen_tasks = app.add_subcommand("gen-tasks", "sample, validate and render goal tasks for every scene");
  std::string manifest_in;
  TaskGenOptions tg;
  bool check = false;
  gen_tasks->add_option("--manifest", manifest_in, "manifest with scenes (default: <out>/manifest.json)");
  gen_tasks->add_option("--bins", tg.bins, "C-space distance bins (rad)")->delimiter(',');
  gen_tasks->add_option("--per-bin", tg.per_bin, "tasks per bin per scene");
  gen_tasks->add_option("--band", tg.band, "half-width of each bin (rad)");
  gen_tasks->add_option("--validate-step", tg.rrt.step, "step of the RRT reachability check");
  gen_tasks->add_option("--validate-budget", tg.rrt.budget, "iteration cap of the RRT reachability check");
  gen_tasks->add_option("--max-attempts", tg.max_attempts_per_task, "goal samples allowed per accepted task");
  gen_tasks->add_option("--seed", seed, "random seed");
  gen_tasks->add_option("--workers", tg.workers, "(scene, bin) pairs generated concurrently")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1024}));
  gen_tasks->add_option("--out", out, "output directory");
  gen_tasks->add_flag("--check", check, "re-validate every task with an independent RRT run");
  add_config(gen_tasks);
  gen_tasks->callback([&] {
    if (out.empty()) out = default_out_dir();
    const fs::path src = manifest_in.empty() ? out / "manifest.json" : fs::path(manifest_in);
    Dataset d = load_manifest(src);
    tg.seed = seed;
    generate_tasks(d, tg, out);
    save_manifest(d, out / "manifest.json");
    fs::create_directories(out / "tasks");
    for (const BenchTask& t : d.tasks) {
      write_json_file(out / "tasks" / (t.id + ".json"), task_file_json(d, t, "../" + t.goal_image));
    }
    std::cout << "wrote " << d.tasks.size() << " tasks to " << out.string() << "\n";
    if (check) {
      std::size_t bad = 0;
      for (const BenchTask& t : d.tasks) {
        if (!validate_task(d, t, tg.band, tg.rrt).ok()) {
          std::cerr << "task " << t.id << " failed re-validation\n";
          ++bad;
        }
      }
      std::cout << "re-validated " << d.tasks.size() - bad << "/" << d.tasks.size() << "\n";
      if (bad) status = kExitFailure;
    }
  });

  // plan
  auto* plan = app.add_subcommand("plan", "run one planner on one task");
  TaskSource plan_src;
  std::string planner_name = "vrrt";
  std::string result_file, tree_file;
  PlannerFlags plan_flags;
  add_task_source(plan, plan_src);
  plan->add_option("--planner", planner_name, "vrrt | gd | two-stage | rrt | rrt-star")
      ->check(CLI::IsMember({"vrrt", "gd", "two-stage", "rrt", "rrt-star"}));
  plan->add_option("--seed", seed, "planner seed (mixed with the task seed)");
  plan->add_option("--result", result_file, "result JSON (default: <out>/<task>_<planner>.json)");
  plan->add_option("--out", out, "output directory");
  plan->add_flag("--timing", timing, "record wall-clock time (makes the result file non-reproducible)");
  add_planner_flags(plan, plan_flags);
  add_config(plan);
  plan->callback([&] {
    if (out.empty()) out = default_out_dir();
    auto [d, idx] = resolve_task(plan_src);
    const BenchTask& task = d.tasks[idx];
    const PlannerSpec spec{planner_name, parse_planner_kind(planner_name), finish_params(plan_flags, seed)};
    PlanResult r = run_planner(spec, d, task);
    if (!timing) r.wall_time = 0.0;
    const Metrics m = evaluate(r, task, d.scenes.at(task.scene_id), d.model, d.camera, d.render, d.load_goal(task),
                               spec.params.edge_resolution);
    const fs::path path = result_file.empty() ? out / (task.id + "_" + planner_name + ".json") : fs::path(result_file);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_json_file(path, Json{{"task", task.id},
                               {"planner", planner_name},
                               {"seed", seed},
                               {"params", planner_params_to_json(spec.params)},
                               {"metrics", metrics_json(m)},
                               {"result", plan_result_to_json(r)}});
    std::cout << task.id << " " << planner_name << " success=" << (m.success ? 1 : 0)
              << " joint_error=" << fmt("%.4f", m.joint_error) << " pl=" << fmt("%.4f", m.path_length)
              << " psnr=" << fmt("%.2f", m.psnr) << " iterations=" << r.iterations << " -> " << path.string() << "\n";
  });

  // bench
  auto* bench = app.add_subcommand("bench", "run planners over a dataset and write summary.csv and tasks_log.csv");
  std::string bench_manifest;
  std::vector<std::string> planners{"vrrt", "gd"};
  double only_bin = 0.0;
  std::size_t workers = 1;
  PlannerFlags bench_flags;
  bench->add_option("--manifest", bench_manifest, "dataset manifest (default: <out>/manifest.json)");
  bench->add_option("--planners", planners, "planners to compare")
      ->delimiter(',')
      ->check(CLI::IsMember({"vrrt", "gd", "two-stage", "rrt", "rrt-star"}));
  bench->add_option("--bin", only_bin, "restrict to one distance bin (0 = all)");
  bench->add_option("--workers", workers, "concurrent tasks")->check(CLI::Range(std::size_t{1}, std::size_t{1024}));
  bench->add_option("--seed", seed, "planner seed (mixed with each task seed)");
  bench->add_option("--out", out, "output directory");
  bench->add_flag("--timing", timing, "record wall-clock times (makes output non-reproducible)");
  add_planner_flags(bench, bench_flags);
  add_config(bench);
  bench->callback([&] {
    if (out.empty()) out = default_out_dir();
    Dataset d = load_manifest(bench_manifest.empty() ? out / "manifest.json" : fs::path(bench_manifest));
    if (only_bin > 0.0) d = filter_bin(d, only_bin);
    const PlannerParams params = finish_params(bench_flags, seed);
    std::vector<PlannerSpec> specs;
    for (const std::string& name : planners) specs.push_back({name, parse_planner_kind(name), params});
    const BenchReport report = run_benchmark(d, specs, out, BenchOptions{workers, timing});
    write_summary_csv(std::cout, report.summary);
  });

  // render
  auto* render_cmd = app.add_subcommand("render", "render a configuration to a PGM image");
  std::string robot_spec = "desk";
  std::vector<double> q_values;
  std::string image_file;
  RenderParams render_params;
  bool ascii = false;
  render_cmd->add_option("--robot", robot_spec, "'desk' or a robot JSON file");
  render_cmd->add_option("--q", q_values, "joint angles, comma separated")->delimiter(',')->required();
  render_cmd->add_option("--blob-sigma", render_params.blob_sigma, "splat std-dev (pixels)");
  render_cmd->add_option("--blob-weight", render_params.blob_weight, "splat peak intensity");
  render_cmd->add_option("--image", image_file, "output PGM (default: <out>/render.pgm)");
  render_cmd->add_option("--out", out, "output directory");
  render_cmd->add_flag("--ascii", ascii, "write plain P2 instead of binary P5");
  add_config(render_cmd);
  render_cmd->callback([&] {
    if (out.empty()) out = default_out_dir();
    const RobotModel model = load_robot(robot_spec);
    if (q_values.size() != model.dof()) {
      throw std::invalid_argument("--q has " + std::to_string(q_values.size()) + " values, robot has " +
                                  std::to_string(model.dof()) + " joints");
    }
    render_params.validate();
    const Configuration q = Eigen::Map<const Eigen::VectorXd>(q_values.data(), static_cast<Eigen::Index>(q_values.size()));
    const fs::path path = image_file.empty() ? out / "render.pgm" : fs::path(image_file);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_pgm(path, render(model, q, Camera::desk(), render_params), ascii ? PgmFormat::Ascii : PgmFormat::Binary);
    std::cout << "wrote " << path.string() << "\n";
  });

  // gradcheck
  auto* gradcheck = app.add_subcommand("gradcheck", "compare analytic render-loss gradients to finite differences");
  GradCheckOptions gc;
  double tolerance = 1e-4;
  gradcheck->add_option("--cases", gc.cases, "random (arm, q, goal) cases");
  gradcheck->add_option("--step", gc.step, "central-difference step");
  gradcheck->add_option("--tolerance", tolerance, "maximum accepted relative error");
  gradcheck->add_option("--seed", seed, "random seed");
  add_config(gradcheck);
  gradcheck->callback([&] {
    gc.seed = seed;
    const GradCheckReport rep = gradient_check(gc);
    std::cout << "cases " << rep.cases << " max_rel_error " << fmt("%.3e", rep.max_rel_error) << " (case "
              << rep.worst_case << ", joint " << rep.worst_joint << ") "
              << (rep.max_rel_error <= tolerance ? "PASS" : "FAIL") << "\n";
    if (rep.max_rel_error > tolerance) status = kExitFailure;
  });

  // viz
  auto* viz = app.add_subcommand("viz", "plan with vrrt and export the tree or path as SVG");
  TaskSource viz_src;
  std::string mode = "pca", coloring = "frontier", svg_file;
  PlannerFlags viz_flags;
  add_task_source(viz, viz_src);
  viz->add_option("--mode", mode, "pca (tree in principal plane) | workspace (arm along the path)")
      ->check(CLI::IsMember({"pca", "workspace"}));
  viz->add_option("--color", coloring, "node coloring in pca mode")->check(CLI::IsMember({"frontier", "step"}));
  viz->add_option("--svg", svg_file, "output SVG (default: <out>/<task>_<mode>.svg)");
  viz->add_option("--seed", seed, "planner seed (mixed with the task seed)");
  viz->add_option("--out", out, "output directory");
  add_planner_flags(viz, viz_flags);
  add_config(viz);
  viz->callback([&] {
    if (out.empty()) out = default_out_dir();
    auto [d, idx] = resolve_task(viz_src);
    const BenchTask& task = d.tasks[idx];
    PlannerParams params = finish_params(viz_flags, seed);
    params.seed = mix_seed(params.seed, task.seed);
    VisualRrt planner(d.scenes.at(task.scene_id), d.objective(task), params);
    const PlanResult r = planner.plan(task.q_start);
    TreePlotOptions opts;
    opts.mode = mode == "pca" ? TreePlotMode::Pca : TreePlotMode::Workspace;
    opts.coloring = coloring == "frontier" ? NodeColoring::Frontier : NodeColoring::OptStep;
    opts.frontier = planner.frontier().ranked();
    std::string warning;
    const std::string svg = export_tree_svg(planner.tree(), {r.path}, d.scenes.at(task.scene_id), d.model, opts,
                                            &warning);
    if (!warning.empty()) std::cerr << "warning: " << warning << "\n";
    const fs::path path = svg_file.empty() ? out / (task.id + "_" + mode + ".svg") : fs::path(svg_file);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream(path) << svg;
    std::cout << "wrote " << path.string() << " (" << planner.tree().size() << " nodes)\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::FileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n"
              << "usage: vrrt {gen-scenes|gen-tasks|plan|bench|render|gradcheck|viz} [OPTIONS]  (--help for details)\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return status;
}
