#include <doctest.h>

#include <filesystem>

#include "support.hpp"
#include "vrrt/serialization.hpp"

using namespace vrrt;

TEST_CASE("robot, scene, camera, render round trip") {
  const RobotModel m = test::arm({0.3, 0.5, 0.25}, 2.0, 5);
  const RobotModel m2 = Json(m).get<RobotModel>();
  CHECK(m2.link_lengths == m.link_lengths);
  CHECK(m2.joint_lower == m.joint_lower);
  CHECK(m2.joint_upper == m.joint_upper);
  CHECK(m2.blobs_per_link == 5);

  Scene s;
  s.obstacles = {Box{Vec2(0.1, 0.2), Vec2(0.3, 0.4)}};
  const Scene s2 = Json(s).get<Scene>();
  CHECK(s2.workspace.min == s.workspace.min);
  CHECK(s2.obstacles.at(0).max == s.obstacles[0].max);

  const Camera c = Camera::desk();
  const Camera c2 = Json(c).get<Camera>();
  CHECK(c2.scale == c.scale);
  CHECK(c2.offset_y == c.offset_y);
  CHECK(Json(RenderParams{0.9, 0.5}).get<RenderParams>().blob_sigma == 0.9);
}

TEST_CASE("unknown and malformed keys are rejected") {
  Json j = RobotModel::desk_arm();
  j["colour"] = "red";
  CHECK_THROWS_AS(j.get<RobotModel>(), std::invalid_argument);
  CHECK_THROWS(Json::parse(R"({"min": [0, 0, 0], "max": [1, 1]})").get<Box>());
  PlannerParams p;
  CHECK_THROWS_AS(apply_planner_params(Json{{"not_a_param", 1}}, p), std::invalid_argument);
}

TEST_CASE("planner params: full round trip and partial overlay") {
  PlannerParams p;
  p.step_size = 0.05;
  p.optimizer.strategy = OptimizerStrategy::Lion;
  p.frontier.policy = FrontierPolicy::TopK;
  p.batch = 7;
  p.seed = 99;
  const Json j = planner_params_to_json(p);
  CHECK(j.size() == planner_param_keys().size());
  PlannerParams q;
  apply_planner_params(j, q);
  CHECK(planner_params_to_json(q) == j);

  PlannerParams r;
  apply_planner_params(Json{{"batch", 3}}, r);
  CHECK(r.batch == 3);
  CHECK(r.step_size == PlannerParams{}.step_size);
}

TEST_CASE("plan result round trip") {
  PlanResult r;
  r.planner = "vrrt";
  r.path = {test::vec({0.1, 0.2}), test::vec({0.3, 0.4})};
  r.best_loss = 0.125;
  r.best_config = r.path.back();
  r.iterations = 12;
  r.node_count = 300;
  r.loss_trace = {1.0, 0.5, 0.125};
  r.termination = Termination::Plateau;
  r.feasible = true;
  const PlanResult b = plan_result_from_json(plan_result_to_json(r));
  CHECK(b.path == r.path);
  CHECK(b.best_loss == r.best_loss);
  CHECK(b.loss_trace == r.loss_trace);
  CHECK(b.termination == r.termination);
  CHECK(b.node_count == r.node_count);
  CHECK(plan_result_to_json(b) == plan_result_to_json(r));
}

TEST_CASE("json files") {
  const auto path = std::filesystem::temp_directory_path() / "vrrt_test_file.json";
  write_json_file(path, Json{{"a", 1}});
  CHECK(read_json_file(path)["a"] == 1);
  CHECK_THROWS_AS(read_json_file(path.string() + ".missing"), std::runtime_error);
}
