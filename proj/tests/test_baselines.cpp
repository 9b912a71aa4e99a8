#include <doctest.h>

#include "support.hpp"
#include "vrrt/baselines.hpp"

using namespace vrrt;
using vrrt::test::vec;

namespace {

const Configuration kStart = vec({M_PI / 2, 0.5, -0.5, 0.5, -0.5});

VisualObjective objective_for(const RobotModel& m, const Configuration& goal) {
  return VisualObjective(m, Camera::desk(), RenderParams{}, render(m, goal, Camera::desk(), RenderParams{}));
}

double mean_error(const Configuration& a, const Configuration& b) { return (a - b).cwiseAbs().mean(); }

}  // namespace

TEST_CASE("gd: single-blob toy converges to the global minimum") {
  const RobotModel m = RobotModel::uniform_arm(1, 1.0, M_PI, 1);
  PlannerParams p;
  p.optimizer.strategy = OptimizerStrategy::Naive;
  p.optimizer.alpha = 0.01;
  p.max_iters = 2000;
  p.plateau_eps = 1e-12;
  p.plateau_iters = 50;
  const PlanResult r = gradient_only_plan(Scene{}, objective_for(m, vec({1.0})), vec({1.3}), p);
  CHECK(r.best_loss < 1e-6);
  CHECK(r.best_config[0] == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("gd: goal at start needs no steps") {
  const RobotModel m = RobotModel::desk_arm();
  const PlanResult r = gradient_only_plan(Scene{}, objective_for(m, kStart), kStart, PlannerParams{});
  CHECK(r.path == std::vector<Configuration>{kStart});
  CHECK(path_length(r.path) == 0.0);
  CHECK(r.best_loss == 0.0);
  CHECK(r.feasible);
}

TEST_CASE("gd: iterates match the greedy vRRT reduction") {
  const RobotModel m = RobotModel::desk_arm();
  const VisualObjective obj = objective_for(m, kStart + vec({0.5, -0.4, 0.3, 0.2, -0.3}));
  PlannerParams p;
  p.max_iters = 80;
  const PlanResult gd = gradient_only_plan(Scene{}, obj, kStart, p);

  PlannerParams red = p;
  red.explore_ratio = 0.0;
  red.frontier_ratio = 1.0;
  red.frontier.kappa = 0.0;
  red.batch = 1;
  red.rewire = false;
  Scene open;
  open.workspace = Box{Vec2(-5, -5), Vec2(5, 5)};
  VisualRrt planner(open, obj, red);
  planner.reset(kStart);
  REQUIRE(gd.path.size() > 50);
  double worst = 0.0;
  for (std::size_t i = 1; i < gd.path.size(); ++i) {
    const auto ids = planner.expand_iteration();
    REQUIRE(ids.size() == 1);
    worst = std::max(worst, (planner.tree().node(ids[0]).q - gd.path[i]).cwiseAbs().maxCoeff());
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("gd: obstacle on the descent path is flagged") {
  const RobotModel m = RobotModel::desk_arm();
  const VisualObjective obj = objective_for(m, kStart + vec({-0.8, 0.5, 0.4, -0.3, 0.3}));
  const PlanResult free_run = gradient_only_plan(Scene{}, obj, kStart, PlannerParams{});
  REQUIRE(free_run.feasible);
  REQUIRE(free_run.path.size() > 10);
  const Vec2 tip = joint_positions(m, free_run.path[free_run.path.size() / 2]).back();
  Scene blocked;
  blocked.obstacles = {Box{tip - Vec2(0.02, 0.02), tip + Vec2(0.02, 0.02)}};
  REQUIRE_FALSE(config_in_collision(blocked, m, kStart));
  const PlanResult r = gradient_only_plan(blocked, obj, kStart, PlannerParams{});
  CHECK_FALSE(r.feasible);
}

TEST_CASE("two-stage: trivial, accurate and wrong estimates") {
  const RobotModel m = RobotModel::desk_arm();
  PlannerParams p;

  const PlanResult same = two_stage_plan(Scene{}, objective_for(m, kStart), kStart, p);
  CHECK(same.path.front() == kStart);
  CHECK(path_length(same.path) == 0.0);

  const Configuration goal = kStart + vec({0.3, -0.2, 0.2, 0.1, -0.1});
  const PlanResult good = two_stage_plan(Scene{}, objective_for(m, goal), kStart, p);
  REQUIRE(good.reached);
  CHECK(mean_error(good.best_config, goal) <= 0.05);
  CHECK(path_length(good.path) <= 1.05 * config_distance(kStart, good.best_config));
  CHECK(path_collision_free(good.path, Scene{}, m, 0.01));

  // base joint swung 2 rad: descent from the start stalls in a local minimum
  const Configuration far = kStart + vec({2.0, 0.0, 0.0, 0.0, 0.0});
  const VisualObjective obj = objective_for(m, far);
  REQUIRE(mean_error(gradient_only_plan(Scene{}, obj, kStart, p).best_config, far) > 0.05);
  const PlanResult wrong = two_stage_plan(Scene{}, obj, kStart, p);
  CHECK(mean_error(wrong.best_config, far) > 0.05);
}

TEST_CASE("rrt: trivial, open scene, walled-off goal") {
  const RobotModel m = RobotModel::desk_arm();
  RrtOptions o;
  CHECK(rrt_plan(Scene{}, m, kStart, kStart, o).path == std::vector<Configuration>{kStart});

  int ok = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed + 500);
    Eigen::VectorXd dir = sample_ball_offset(5, 1.0, rng);
    const Configuration goal = kStart + dir / dir.norm();
    RrtOptions os;
    os.seed = seed;
    os.budget = 10000;
    const PlanResult r = rrt_plan(Scene{}, m, kStart, goal, os);
    if (r.reached && r.path.front() == kStart && r.path.back() == goal && path_collision_free(r.path, Scene{}, m, 0.01))
      ++ok;
  }
  CHECK(ok >= 99);

  // one link, no wrap-around: a box at 45 degrees separates 0 from pi/2
  const RobotModel one = RobotModel::uniform_arm(1, 1.0, M_PI, 1);
  Scene wall;
  wall.obstacles = {Box{Vec2(0.5, 0.5), Vec2(0.6, 0.6)}};
  RrtOptions ow;
  ow.budget = 2000;
  const PlanResult r = rrt_plan(wall, one, vec({0.0}), vec({M_PI / 2}), ow);
  CHECK_FALSE(r.reached);
  CHECK(r.termination == Termination::Budget);
  CHECK(r.iterations == 2000);
}

TEST_CASE("rrt-star: near-straight paths and anytime costs") {
  const RobotModel m = RobotModel::desk_arm();
  PlannerParams p;
  p.rrt_budget = 2000;
  CHECK(rrt_star_plan(Scene{}, m, kStart, kStart, p).path.size() == 1);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    p.seed = seed;
    const Configuration goal = kStart + vec({0.4, -0.5, 0.3, 0.4, -0.2});
    const PlanResult r = rrt_star_plan(Scene{}, m, kStart, goal, p);
    REQUIRE(r.reached);
    CHECK(r.path.front() == kStart);
    CHECK(r.path.back() == goal);
    CHECK(path_length(r.path) <= 1.05 * config_distance(kStart, goal));
    for (std::size_t i = 1; i < r.loss_trace.size(); ++i) CHECK(r.loss_trace[i] <= r.loss_trace[i - 1]);
  }
}

TEST_CASE("baselines reject infeasible endpoints") {
  const RobotModel one = RobotModel::uniform_arm(1, 1.0, M_PI, 1);
  Scene s;
  s.obstacles = {Box{Vec2(0.4, -0.1), Vec2(0.6, 0.1)}};
  CHECK_THROWS_AS(rrt_plan(s, one, vec({0.0}), vec({1.0}), RrtOptions{}), std::invalid_argument);
  CHECK_THROWS_AS(rrt_star_plan(s, one, vec({1.0}), vec({0.0}), PlannerParams{}), std::invalid_argument);
}
