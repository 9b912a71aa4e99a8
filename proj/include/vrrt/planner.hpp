#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vrrt/collision.hpp"
#include "vrrt/frontier.hpp"
#include "vrrt/optimizer.hpp"
#include "vrrt/renderer.hpp"
#include "vrrt/rng.hpp"
#include "vrrt/search_tree.hpp"

namespace vrrt {

/// Every knob of the visual planner and the baselines that share its
/// primitives. Defaults are the desk-scale reproduction settings.
struct PlannerParams {
  double step_size = 0.04;  ///< random steering step epsilon
  OptimizerParams optimizer;
  FrontierConfig frontier;
  double ball_radius = 0.7;     ///< rho
  double explore_ratio = 0.3;   ///< r
  double frontier_ratio = 0.7;  ///< eta
  std::size_t batch = 32;
  double plateau_eps = 1e-4;
  std::size_t plateau_iters = 100;
  std::size_t max_iters = 600;
  bool rewire = true;
  double rewire_radius = 0.12;  ///< 3 epsilon
  double edge_resolution = kDefaultEdgeResolution;
  std::size_t shortcut_attempts = 100;
  std::uint64_t seed = 0;
  /// Share of exploit attempts that steer toward the noisy goal configuration, when one is given.
  double noisy_fraction = 0.25;
  /// Std-dev of the synthetic noisy goal hint built from a task's ground truth; 0 disables it.
  double noisy_sigma = 0.0;
  // Configuration-goal baselines (rrt, rrt-star, second stage of two-stage).
  double rrt_step = 0.1;
  double rrt_goal_bias = 0.05;
  std::size_t rrt_budget = 4000;
  double rrt_rewire_radius = 0.3;

  void validate() const;
};

struct GoalSpec {
  Image image;
  std::optional<Configuration> noisy_config;
};

enum class Termination { Plateau, MaxIters, GoalReached, Budget };
std::string_view to_string(Termination t);
Termination parse_termination(std::string_view name);

struct PlanResult {
  std::string planner;
  std::vector<Configuration> path;  ///< root first
  /// Length of the path before shortcutting (equal to the final length for planners that do not shortcut).
  double raw_path_length = 0.0;
  double best_loss = std::numeric_limits<double>::quiet_NaN();
  Configuration best_config;
  std::size_t iterations = 0;
  std::size_t node_count = 0;
  double wall_time = 0.0;  ///< seconds
  std::vector<double> loss_trace;
  Termination termination = Termination::MaxIters;
  /// Every path configuration and edge is collision-free.
  bool feasible = true;
  /// Configuration-goal planners: whether the goal was connected.
  bool reached = true;
};

/// Fixed-length step from q_parent toward q_target, capped at the target, clamped to limits.
Configuration random_steer(const RobotModel& model, const Configuration& q_parent, const Configuration& q_target,
                           double step);

/// Sum of C-space segment lengths.
double path_length(const std::vector<Configuration>& path);

/// Random-pair shortcutting; never lengthens the path and keeps both endpoints.
std::vector<Configuration> shortcut_path(std::vector<Configuration> path, const Scene& scene, const RobotModel& model,
                                         double resolution, std::size_t attempts, Rng& rng);

/// True if every configuration and every consecutive edge is valid.
bool path_collision_free(const std::vector<Configuration>& path, const Scene& scene, const RobotModel& model,
                         double resolution);

/// Visual-goal RRT: frontier-biased exploration plus gradient exploitation
/// with per-branch optimizer state inheritance.
class VisualRrt {
 public:
  VisualRrt(Scene scene, VisualObjective objective, PlannerParams params,
            std::optional<Configuration> noisy_goal = std::nullopt);

  /// Clears the tree and seeds it with q_start. Throws if q_start is infeasible.
  void reset(const Configuration& q_start);

  /// One batch of expansion attempts. Returns the ids inserted this round.
  std::vector<NodeId> expand_iteration();

  /// Runs to plateau or max_iters from q_start.
  PlanResult plan(const Configuration& q_start);

  const SearchTree& tree() const { return tree_; }
  const FrontierSet& frontier() const { return frontier_; }
  const PlannerParams& params() const { return params_; }
  /// Lowest-loss node (lowest id on ties).
  NodeId best_node() const { return frontier_.ranked().front(); }

 private:
  enum class Move { Explore, Gradient, GoalHint };
  struct Candidate {
    NodeId parent;
    Configuration q;
    OptState opt;
    Move move;
  };

  const Eigen::VectorXd& gradient_at(NodeId id);
  /// Last node of the gradient chain that starts at `id`.
  NodeId chain_tip(NodeId id) const;

  Scene scene_;
  VisualObjective objective_;
  PlannerParams params_;
  std::optional<Configuration> noisy_goal_;
  Rng rng_;
  SearchTree tree_;
  FrontierSet frontier_;
  std::unordered_map<NodeId, Eigen::VectorXd> grad_cache_;
  // Gradient and goal-hint steps are deterministic given the parent, so each
  // node takes them at most once. Indexed by node id; kUntried / kRejected or a child id.
  std::vector<NodeId> gradient_child_;
  std::vector<NodeId> hint_child_;
};

PlanResult plan_vrrt(const Scene& scene, const VisualObjective& objective, const Configuration& q_start,
                     const PlannerParams& params, const std::optional<Configuration>& noisy_goal = std::nullopt);

}  // namespace vrrt
