#pragma once

#include <vector>

#include "vrrt/planner.hpp"

namespace vrrt {

/// Single-trajectory descent on the rendering loss from q_start, ignoring
/// obstacles while optimizing. The result is marked infeasible if any
/// iterate or connecting edge collides. Uses params.optimizer, the plateau
/// rule and max_iters.
PlanResult gradient_only_plan(const Scene& scene, const VisualObjective& objective, const Configuration& q_start,
                              const PlannerParams& params);

/// Classic RRT with goal biasing toward a known goal configuration.
/// Succeeds when a node within `step` of the goal connects to it.
struct RrtOptions {
  double goal_bias = 0.05;
  double step = 0.1;
  std::size_t budget = 20000;
  std::uint64_t seed = 0;
  double edge_resolution = kDefaultEdgeResolution;
};
PlanResult rrt_plan(const Scene& scene, const RobotModel& model, const Configuration& q_start,
                    const Configuration& q_goal, const RrtOptions& options);

/// RRT* with rewiring toward a known goal, run for the full rrt_budget, then
/// shortcut. loss_trace holds the best goal-path cost after every iteration
/// (infinity until the goal is first connected).
PlanResult rrt_star_plan(const Scene& scene, const RobotModel& model, const Configuration& q_start,
                         const Configuration& q_goal, const PlannerParams& params);

/// Stage 1: collision-unaware gradient descent estimates the goal.
/// Stage 2: RRT* from q_start to that estimate.
PlanResult two_stage_plan(const Scene& scene, const VisualObjective& objective, const Configuration& q_start,
                          const PlannerParams& params);

}  // namespace vrrt
