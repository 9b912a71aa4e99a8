#include "vrrt/baselines.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vrrt {

namespace {

constexpr std::uint64_t kRrtStarStream = 11;
constexpr std::uint64_t kRrtStarShortcutStream = 12;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void require_feasible(const Scene& scene, const RobotModel& model, const Configuration& q, const char* what) {
  if (!config_valid(scene, model, q)) {
    throw std::invalid_argument(std::string(what) + " configuration is in collision or outside the joint limits");
  }
}

}  // namespace

PlanResult gradient_only_plan(const Scene& scene, const VisualObjective& objective, const Configuration& q_start,
                              const PlannerParams& params) {
  const auto t0 = std::chrono::steady_clock::now();
  params.validate();
  const RobotModel& model = objective.model();

  PlanResult result;
  result.planner = "gd";
  result.termination = Termination::MaxIters;
  Configuration q = q_start;
  OptState state = fresh_state(params.optimizer.strategy, model.dof());
  result.path.push_back(q);
  LossGradient current = objective.loss_grad(q);

  std::size_t stalled = 0;
  for (std::size_t it = 0; it < params.max_iters; ++it) {
    if ((current.grad.array() == 0.0).all()) {
      result.termination = Termination::Plateau;
      break;
    }
    OptimizerStep step = optimizer_step(model, q, current.grad, state, params.optimizer);
    state = std::move(step.state);
    if (step.q != q) {
      q = std::move(step.q);
      result.path.push_back(q);
    }
    LossGradient next = objective.loss_grad(q);
    ++result.iterations;
    result.loss_trace.push_back(next.loss);
    stalled = (std::abs(next.loss - current.loss) < params.plateau_eps) ? stalled + 1 : 0;
    current = std::move(next);
    if (stalled >= params.plateau_iters) {
      result.termination = Termination::Plateau;
      break;
    }
  }

  result.best_loss = current.loss;
  result.best_config = q;
  result.node_count = result.path.size();
  result.raw_path_length = path_length(result.path);
  result.feasible = path_collision_free(result.path, scene, model, params.edge_resolution);
  result.reached = true;
  result.wall_time = seconds_since(t0);
  return result;
}

PlanResult rrt_plan(const Scene& scene, const RobotModel& model, const Configuration& q_start,
                    const Configuration& q_goal, const RrtOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  require_feasible(scene, model, q_start, "start");
  require_feasible(scene, model, q_goal, "goal");

  PlanResult result;
  result.planner = "rrt";
  result.best_config = q_start;
  auto finish = [&](std::vector<Configuration> path, bool reached, Termination why) {
    result.path = std::move(path);
    result.raw_path_length = path_length(result.path);
    result.reached = reached;
    result.termination = why;
    result.best_config = result.path.back();
    result.wall_time = seconds_since(t0);
    return result;
  };

  if (q_start == q_goal) return finish({q_start}, true, Termination::GoalReached);
  if (config_distance(q_start, q_goal) <= options.step &&
      edge_collision_free(scene, model, q_start, q_goal, options.edge_resolution)) {
    result.node_count = 1;
    return finish({q_start, q_goal}, true, Termination::GoalReached);
  }

  Rng rng(options.seed);
  SearchTree tree(model.dof());
  tree.insert(q_start, kNoParent, 0.0, fresh_state(OptimizerStrategy::Adam, model.dof()));
  const OptState zero = fresh_state(OptimizerStrategy::Adam, model.dof());
  for (std::size_t it = 0; it < options.budget; ++it) {
    ++result.iterations;
    const Configuration target = rng.bernoulli(options.goal_bias) ? q_goal : sample_uniform(model, rng);
    const NodeId near = tree.nearest(target);
    Configuration q_new = random_steer(model, tree.node(near).q, target, options.step);
    if (q_new == tree.node(near).q) continue;
    if (!config_valid(scene, model, q_new)) continue;
    if (!edge_collision_free(scene, model, tree.node(near).q, q_new, options.edge_resolution)) continue;
    const NodeId id = tree.insert(std::move(q_new), near, 0.0, zero);
    const Configuration& q = tree.node(id).q;
    if (config_distance(q, q_goal) <= options.step &&
        edge_collision_free(scene, model, q, q_goal, options.edge_resolution)) {
      std::vector<Configuration> path = tree.path_to_root(id);
      if (path.back() != q_goal) path.push_back(q_goal);
      result.node_count = tree.size();
      return finish(std::move(path), true, Termination::GoalReached);
    }
  }
  result.node_count = tree.size();
  return finish({q_start}, false, Termination::Budget);
}

PlanResult rrt_star_plan(const Scene& scene, const RobotModel& model, const Configuration& q_start,
                         const Configuration& q_goal, const PlannerParams& params) {
  const auto t0 = std::chrono::steady_clock::now();
  params.validate();
  require_feasible(scene, model, q_start, "start");
  require_feasible(scene, model, q_goal, "goal");

  PlanResult result;
  result.planner = "rrt-star";
  if (q_start == q_goal) {
    result.path = {q_start};
    result.best_config = q_start;
    result.termination = Termination::GoalReached;
    result.node_count = 1;
    result.wall_time = seconds_since(t0);
    return result;
  }

  Rng rng(mix_seed(params.seed, kRrtStarStream));
  SearchTree tree(model.dof());
  const OptState zero = fresh_state(OptimizerStrategy::Adam, model.dof());
  tree.insert(q_start, kNoParent, 0.0, zero);
  std::vector<NodeId> goal_parents;

  auto best_goal_parent = [&]() {
    NodeId best = kNoParent;
    double best_cost = std::numeric_limits<double>::infinity();
    for (NodeId id : goal_parents) {
      const double c = tree.node(id).cost + config_distance(tree.node(id).q, q_goal);
      if (c < best_cost) {
        best_cost = c;
        best = id;
      }
    }
    return std::pair{best, best_cost};
  };

  auto try_goal = [&](NodeId id) {
    const Configuration& q = tree.node(id).q;
    if (config_distance(q, q_goal) <= params.rrt_step &&
        edge_collision_free(scene, model, q, q_goal, params.edge_resolution)) {
      goal_parents.push_back(id);
    }
  };
  try_goal(0);

  for (std::size_t it = 0; it < params.rrt_budget; ++it) {
    ++result.iterations;
    const Configuration target = rng.bernoulli(params.rrt_goal_bias) ? q_goal : sample_uniform(model, rng);
    const NodeId near = tree.nearest(target);
    Configuration q_new = random_steer(model, tree.node(near).q, target, params.rrt_step);
    if (q_new != tree.node(near).q && config_valid(scene, model, q_new) &&
        edge_collision_free(scene, model, tree.node(near).q, q_new, params.edge_resolution)) {
      const NodeId id = tree.insert(std::move(q_new), near, 0.0, zero);
      const std::vector<NodeId> nb = tree.near_radius(tree.node(id).q, params.rrt_rewire_radius);
      rrt_star_rewire(tree, id, nb, scene, model, params.edge_resolution);
      try_goal(id);
    }
    result.loss_trace.push_back(best_goal_parent().second);
  }

  result.node_count = tree.size();
  const auto [best, best_cost] = best_goal_parent();
  if (best == kNoParent) {
    result.path = {q_start};
    result.best_config = q_start;
    result.reached = false;
    result.termination = Termination::Budget;
  } else {
    std::vector<Configuration> path = tree.path_to_root(best);
    if (path.back() != q_goal) path.push_back(q_goal);
    result.raw_path_length = path_length(path);
    Rng shortcut_rng(mix_seed(params.seed, kRrtStarShortcutStream));
    result.path = shortcut_path(std::move(path), scene, model, params.edge_resolution,
                                std::max<std::size_t>(params.shortcut_attempts, 200), shortcut_rng);
    result.best_config = q_goal;
    result.reached = true;
    result.termination = Termination::GoalReached;
  }
  result.feasible = path_collision_free(result.path, scene, model, params.edge_resolution);
  result.wall_time = seconds_since(t0);
  return result;
}

PlanResult two_stage_plan(const Scene& scene, const VisualObjective& objective, const Configuration& q_start,
                          const PlannerParams& params) {
  const auto t0 = std::chrono::steady_clock::now();
  const RobotModel& model = objective.model();

  // Stage 1 is collision-unaware: no obstacles, unbounded workspace.
  Scene free_space;
  free_space.workspace = Box{Vec2(-1e9, -1e9), Vec2(1e9, 1e9)};
  const PlanResult estimate = gradient_only_plan(free_space, objective, q_start, params);
  const Configuration& q_hat = estimate.best_config;

  PlanResult result;
  if (config_valid(scene, model, q_hat)) {
    result = rrt_star_plan(scene, model, q_start, q_hat, params);
  } else {
    result.path = {q_start};
    result.best_config = q_start;
    result.reached = false;
    result.termination = Termination::Budget;
    result.feasible = config_valid(scene, model, q_start);
  }
  result.planner = "two-stage";
  result.iterations += estimate.iterations;
  result.best_config = result.path.back();
  result.best_loss = objective.loss(result.best_config);
  result.wall_time = seconds_since(t0);
  return result;
}

}  // namespace vrrt
