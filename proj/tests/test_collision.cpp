#include <doctest.h>

#include "support.hpp"
#include "vrrt/collision.hpp"
#include "vrrt/rng.hpp"

using namespace vrrt;
using vrrt::test::arm;
using vrrt::test::vec;

namespace {

Box box(double x0, double y0, double x1, double y1) { return Box{Vec2(x0, y0), Vec2(x1, y1)}; }

Scene random_scene(Rng& rng, int n) {
  Scene s;
  for (int i = 0; i < n; ++i) {
    const double x = rng.uniform(-2.0, 1.8), y = rng.uniform(-0.4, 1.8);
    s.obstacles.push_back(box(x, y, x + rng.uniform(0.05, 0.3), y + rng.uniform(0.05, 0.3)));
  }
  return s;
}

}  // namespace

TEST_CASE("segment vs box") {
  const Box b = box(0.0, 0.0, 1.0, 1.0);
  CHECK(segment_intersects_box(Vec2(-1, 0.5), Vec2(2, 0.5), b));
  CHECK(segment_intersects_box(Vec2(0.2, 0.2), Vec2(0.3, 0.3), b));  // fully inside
  CHECK(segment_intersects_box(Vec2(-1, 1), Vec2(2, 1), b));          // grazes the top edge
  CHECK(segment_intersects_box(Vec2(1, 1), Vec2(2, 2), b));           // touches a corner
  CHECK_FALSE(segment_intersects_box(Vec2(-1, 1.01), Vec2(2, 1.01), b));
  CHECK_FALSE(segment_intersects_box(Vec2(1.5, -1), Vec2(3, 1), b));
  CHECK_FALSE(segment_intersects_box(Vec2(-0.5, 0.5), Vec2(-0.1, 0.5), b));  // stops short
  CHECK(segment_intersects_box(Vec2(0.5, 2), Vec2(0.5, 2), box(0.0, 1.5, 1.0, 2.5)));  // degenerate point
}

TEST_CASE("config: empty scene never collides inside the workspace") {
  const Scene s;
  const RobotModel m = RobotModel::desk_arm();
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    Configuration q = sample_uniform(m, rng);
    q[0] = rng.uniform(0.3, M_PI - 0.3);  // keep the arm off the floor
    q.tail(4).setZero();
    CHECK_FALSE(config_in_collision(s, m, q));
  }
}

TEST_CASE("config: one link through a box") {
  const RobotModel m = arm({1.0});
  Scene s;
  s.obstacles = {box(0.4, -0.1, 0.6, 0.1)};
  CHECK(config_in_collision(s, m, vec({0.0})));
  s.obstacles = {box(0.4, 0.5, 0.6, 0.7)};
  CHECK_FALSE(config_in_collision(s, m, vec({0.0})));
}

TEST_CASE("config: leaving the workspace counts as collision") {
  const Scene s;  // floor at y = -0.5
  CHECK(config_in_collision(s, arm({1.0}), vec({-M_PI / 2})));
  CHECK_FALSE(config_in_collision(s, arm({0.4}), vec({-M_PI / 2})));
}

TEST_CASE("edge: constructed crossing") {
  const RobotModel m = arm({1.0});
  Scene s;
  s.obstacles = {box(0.45, 0.45, 0.6, 0.6)};
  CHECK(edge_collision_free(s, m, vec({0.0}), vec({0.0})));
  REQUIRE_FALSE(config_in_collision(s, m, vec({0.0})));
  REQUIRE_FALSE(config_in_collision(s, m, vec({M_PI / 2})));
  CHECK_FALSE(edge_collision_free(s, m, vec({0.0}), vec({M_PI / 2}), 0.01));
  CHECK(edge_collision_free(Scene{}, m, vec({0.0}), vec({M_PI / 2}), 0.01));
}

TEST_CASE("edge: joint limits are enforced along the segment") {
  const RobotModel m = arm({0.3}, 1.0);
  CHECK_FALSE(edge_collision_free(Scene{}, m, vec({0.0}), vec({1.5})));
}

TEST_CASE("properties: monotonicity, symmetry, resolution halving") {
  const RobotModel m = RobotModel::desk_arm();
  Rng rng(21);
  int checked_false = 0;
  for (int t = 0; t < 300; ++t) {
    Scene s = random_scene(rng, 3);
    const Configuration q1 = sample_uniform(m, rng);
    const Configuration q2 = q1 + sample_ball_offset(5, 0.5, rng);

    const bool before = config_in_collision(s, m, q1);
    Scene more = s;
    more.obstacles.push_back(random_scene(rng, 1).obstacles[0]);
    if (before) CHECK(config_in_collision(more, m, q1));

    const bool fwd = edge_collision_free(s, m, q1, q2, 0.02);
    CHECK(fwd == edge_collision_free(s, m, q2, q1, 0.02));
    if (!fwd) {
      ++checked_false;
      CHECK_FALSE(edge_collision_free(s, m, q1, q2, 0.01));
      CHECK_FALSE(edge_collision_free(s, m, q1, q2, 0.005));
    }
  }
  CHECK(checked_false > 20);
}

TEST_CASE("scene validation") {
  Scene s;
  s.obstacles = {box(0.5, 0.5, 0.4, 0.6)};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.obstacles = {box(0.0, 0.0, 3.0, 0.5)};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.obstacles = {box(0.0, 0.0, 0.3, 0.5)};
  CHECK_NOTHROW(s.validate());
}
