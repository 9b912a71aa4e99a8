#include "vrrt/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace vrrt {

namespace {

constexpr std::uint64_t kExpandStream = 1;
constexpr std::uint64_t kShortcutStream = 2;
constexpr NodeId kUntried = kNoParent;
constexpr NodeId kRejected = kNoParent - 1;

bool taken(const std::vector<NodeId>& moves, NodeId id) { return id < moves.size() && moves[id] != kUntried; }

}  // namespace

void PlannerParams::validate() const {
  if (!(step_size > 0.0)) throw std::invalid_argument("step_size (epsilon) must be positive");
  if (!(ball_radius > 0.0)) throw std::invalid_argument("ball_radius (rho) must be positive");
  if (!(explore_ratio >= 0.0 && explore_ratio <= 1.0)) throw std::invalid_argument("explore_ratio must lie in [0, 1]");
  if (!(frontier_ratio >= 0.0 && frontier_ratio <= 1.0)) throw std::invalid_argument("frontier_ratio must lie in [0, 1]");
  if (batch < 1) throw std::invalid_argument("batch must be >= 1");
  if (!(plateau_eps > 0.0)) throw std::invalid_argument("plateau_eps must be positive");
  if (plateau_iters < 1) throw std::invalid_argument("plateau_iters must be >= 1");
  if (!(rewire_radius >= 0.0)) throw std::invalid_argument("rewire_radius must be non-negative");
  if (!(edge_resolution > 0.0)) throw std::invalid_argument("edge_resolution must be positive");
  if (!(noisy_fraction >= 0.0 && noisy_fraction <= 1.0)) throw std::invalid_argument("noisy_fraction must lie in [0, 1]");
  if (!(noisy_sigma >= 0.0)) throw std::invalid_argument("noisy_sigma must be non-negative");
  if (!(rrt_step > 0.0)) throw std::invalid_argument("rrt_step must be positive");
  if (!(rrt_goal_bias >= 0.0 && rrt_goal_bias <= 1.0)) throw std::invalid_argument("rrt_goal_bias must lie in [0, 1]");
  if (!(rrt_rewire_radius >= 0.0)) throw std::invalid_argument("rrt_rewire_radius must be non-negative");
  optimizer.validate();
  frontier.validate();
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Plateau: return "plateau";
    case Termination::MaxIters: return "max_iters";
    case Termination::GoalReached: return "goal_reached";
    case Termination::Budget: return "budget";
  }
  return "max_iters";
}

Termination parse_termination(std::string_view name) {
  for (auto t : {Termination::Plateau, Termination::MaxIters, Termination::GoalReached, Termination::Budget}) {
    if (to_string(t) == name) return t;
  }
  throw std::invalid_argument("unknown termination reason '" + std::string(name) + "'");
}

Configuration random_steer(const RobotModel& model, const Configuration& q_parent, const Configuration& q_target,
                           double step) {
  const Configuration dir = q_target - q_parent;
  const double dist = dir.norm();
  if (dist == 0.0) return q_parent;
  if (dist <= step) return model.clamp(q_target);
  return model.clamp(q_parent + (step / dist) * dir);
}

double path_length(const std::vector<Configuration>& path) {
  double len = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) len += config_distance(path[i - 1], path[i]);
  return len;
}

bool path_collision_free(const std::vector<Configuration>& path, const Scene& scene, const RobotModel& model,
                         double resolution) {
  if (path.empty()) return false;
  if (!config_valid(scene, model, path.front())) return false;
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (!edge_collision_free(scene, model, path[i - 1], path[i], resolution)) return false;
  }
  return true;
}

std::vector<Configuration> shortcut_path(std::vector<Configuration> path, const Scene& scene, const RobotModel& model,
                                         double resolution, std::size_t attempts, Rng& rng) {
  for (std::size_t a = 0; a < attempts && path.size() > 2; ++a) {
    std::size_t i = rng.index(path.size());
    std::size_t j = rng.index(path.size());
    if (i > j) std::swap(i, j);
    if (j - i < 2) continue;
    if (edge_collision_free(scene, model, path[i], path[j], resolution)) {
      path.erase(path.begin() + static_cast<std::ptrdiff_t>(i + 1), path.begin() + static_cast<std::ptrdiff_t>(j));
    }
  }
  return path;
}

VisualRrt::VisualRrt(Scene scene, VisualObjective objective, PlannerParams params,
                     std::optional<Configuration> noisy_goal)
    : scene_(std::move(scene)),
      objective_(std::move(objective)),
      params_(params),
      noisy_goal_(std::move(noisy_goal)),
      rng_(mix_seed(params.seed, kExpandStream)),
      tree_(objective_.model().dof()),
      frontier_(params.frontier) {
  params_.validate();
  if (noisy_goal_) *noisy_goal_ = objective_.model().clamp(*noisy_goal_);
}

void VisualRrt::reset(const Configuration& q_start) {
  const RobotModel& model = objective_.model();
  if (!config_valid(scene_, model, q_start)) {
    throw std::invalid_argument("start configuration is in collision or outside the joint limits");
  }
  rng_ = Rng(mix_seed(params_.seed, kExpandStream));
  tree_ = SearchTree(model.dof());
  frontier_ = FrontierSet(params_.frontier);
  grad_cache_.clear();
  gradient_child_.clear();
  hint_child_.clear();
  tree_.insert(q_start, kNoParent, objective_.loss(q_start), fresh_state(params_.optimizer.strategy, model.dof()));
  frontier_.update(tree_);
}

const Eigen::VectorXd& VisualRrt::gradient_at(NodeId id) {
  auto it = grad_cache_.find(id);
  if (it == grad_cache_.end()) {
    it = grad_cache_.emplace(id, objective_.loss_grad(tree_.node(id).q).grad).first;
  }
  return it->second;
}

NodeId VisualRrt::chain_tip(NodeId id) const {
  while (taken(gradient_child_, id) && gradient_child_[id] != kRejected) id = gradient_child_[id];
  return id;
}

std::vector<NodeId> VisualRrt::expand_iteration() {
  if (tree_.empty()) throw std::logic_error("expand_iteration() before reset()");
  const RobotModel& model = objective_.model();
  const std::size_t dof = model.dof();

  // Candidates are generated against the tree as it stood at the start of
  // the iteration, then applied in attempt order.
  std::vector<Candidate> candidates;
  candidates.reserve(params_.batch);
  std::unordered_set<NodeId> claimed_gradient, claimed_hint;
  for (std::size_t a = 0; a < params_.batch; ++a) {
    const bool explore = rng_.bernoulli(params_.explore_ratio);
    const bool from_frontier = rng_.bernoulli(params_.frontier_ratio);
    if (explore) {
      const Configuration target = from_frontier
                                       ? sample_ball(model, tree_.node(frontier_.sample(rng_)).q, params_.ball_radius, rng_)
                                       : sample_uniform(model, rng_);
      const NodeId parent = tree_.nearest(target);
      Configuration child = random_steer(model, tree_.node(parent).q, target, params_.step_size);
      candidates.push_back({parent, std::move(child), fresh_state(params_.optimizer.strategy, dof), Move::Explore});
      continue;
    }
    const NodeId anchor = from_frontier ? frontier_.sample(rng_) : tree_.nearest(sample_uniform(model, rng_));
    if (noisy_goal_ && rng_.bernoulli(params_.noisy_fraction)) {
      if (taken(hint_child_, anchor) || !claimed_hint.insert(anchor).second) continue;
      Configuration child = random_steer(model, tree_.node(anchor).q, *noisy_goal_, params_.step_size);
      candidates.push_back({anchor, std::move(child), fresh_state(params_.optimizer.strategy, dof), Move::GoalHint});
      continue;
    }
    // A node whose gradient step already exists continues its chain instead.
    const NodeId tip = chain_tip(anchor);
    if (taken(gradient_child_, tip) || !claimed_gradient.insert(tip).second) continue;
    const TreeNode& parent = tree_.node(tip);
    OptimizerStep step = optimizer_step(model, parent.q, gradient_at(tip), parent.opt, params_.optimizer);
    candidates.push_back({tip, std::move(step.q), std::move(step.state), Move::Gradient});
  }

  std::vector<NodeId> inserted;
  for (Candidate& c : candidates) {
    gradient_child_.resize(tree_.size(), kUntried);
    hint_child_.resize(tree_.size(), kUntried);
    NodeId* record = c.move == Move::Gradient   ? &gradient_child_[c.parent]
                     : c.move == Move::GoalHint ? &hint_child_[c.parent]
                                                : nullptr;
    if (record) *record = kRejected;
    const Configuration& q_parent = tree_.node(c.parent).q;
    if (c.q == q_parent) continue;
    if (!config_valid(scene_, model, c.q)) continue;
    if (!edge_collision_free(scene_, model, q_parent, c.q, params_.edge_resolution)) continue;
    const double loss = objective_.loss(c.q);
    const NodeId id = tree_.insert(std::move(c.q), c.parent, loss, std::move(c.opt));
    if (record) *record = id;
    if (params_.rewire) {
      const std::vector<NodeId> nb = tree_.near_radius(tree_.node(id).q, params_.rewire_radius);
      rrt_star_rewire(tree_, id, nb, scene_, model, params_.edge_resolution);
    }
    inserted.push_back(id);
  }
  frontier_.update(tree_);
  return inserted;
}

PlanResult VisualRrt::plan(const Configuration& q_start) {
  const auto t0 = std::chrono::steady_clock::now();
  reset(q_start);

  PlanResult result;
  result.planner = "vrrt";
  double best = tree_.node(best_node()).loss;
  std::size_t stalled = 0;
  result.termination = Termination::MaxIters;
  for (std::size_t it = 0; it < params_.max_iters; ++it) {
    expand_iteration();
    ++result.iterations;
    const double now = tree_.node(best_node()).loss;
    result.loss_trace.push_back(now);
    stalled = (best - now < params_.plateau_eps) ? stalled + 1 : 0;
    best = now;
    if (stalled >= params_.plateau_iters) {
      result.termination = Termination::Plateau;
      break;
    }
  }

  const NodeId goal_node = best_node();
  Rng shortcut_rng(mix_seed(params_.seed, kShortcutStream));
  std::vector<Configuration> raw = tree_.path_to_root(goal_node);
  result.raw_path_length = path_length(raw);
  result.path = shortcut_path(std::move(raw), scene_, objective_.model(), params_.edge_resolution,
                              params_.shortcut_attempts, shortcut_rng);
  result.best_loss = tree_.node(goal_node).loss;
  result.best_config = tree_.node(goal_node).q;
  result.node_count = tree_.size();
  result.feasible = true;  // every inserted edge was checked; shortcuts are checked too
  result.reached = true;
  result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

PlanResult plan_vrrt(const Scene& scene, const VisualObjective& objective, const Configuration& q_start,
                     const PlannerParams& params, const std::optional<Configuration>& noisy_goal) {
  VisualRrt planner(scene, objective, params, noisy_goal);
  return planner.plan(q_start);
}

}  // namespace vrrt
