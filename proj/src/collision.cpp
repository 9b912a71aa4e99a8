#include "vrrt/collision.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vrrt {

bool segment_intersects_box(const Vec2& a, const Vec2& b, const Box& box) {
  double t0 = 0.0;
  double t1 = 1.0;
  const Vec2 d = b - a;
  for (int axis = 0; axis < 2; ++axis) {
    if (d[axis] == 0.0) {
      if (a[axis] < box.min[axis] || a[axis] > box.max[axis]) return false;
      continue;
    }
    double lo = (box.min[axis] - a[axis]) / d[axis];
    double hi = (box.max[axis] - a[axis]) / d[axis];
    if (lo > hi) std::swap(lo, hi);
    t0 = std::max(t0, lo);
    t1 = std::min(t1, hi);
    if (t0 > t1) return false;
  }
  return true;
}

void Scene::validate() const {
  auto check = [](const Box& b, const char* what) {
    if (!(b.min.x() < b.max.x()) || !(b.min.y() < b.max.y())) {
      throw std::invalid_argument(std::string(what) + " box needs min < max on both axes");
    }
  };
  check(workspace, "workspace");
  for (const Box& b : obstacles) {
    check(b, "obstacle");
    if (!workspace.contains(b.min) || !workspace.contains(b.max)) {
      throw std::invalid_argument("obstacle lies outside the workspace bounds");
    }
  }
}

bool config_in_collision(const Scene& scene, const RobotModel& model, const Configuration& q) {
  const std::vector<Vec2> joints = joint_positions(model, q);
  // Links are convex, so joint frames inside the box keep whole links inside.
  for (const Vec2& p : joints) {
    if (!scene.workspace.contains(p)) return true;
  }
  for (std::size_t i = 0; i + 1 < joints.size(); ++i) {
    for (const Box& box : scene.obstacles) {
      if (segment_intersects_box(joints[i], joints[i + 1], box)) return true;
    }
  }
  return false;
}

bool edge_collision_free(const Scene& scene, const RobotModel& model, const Configuration& q1,
                         const Configuration& q2, double resolution) {
  if (!(resolution > 0.0)) throw std::invalid_argument("edge resolution must be positive");
  // Fixed orientation so (q1, q2) and (q2, q1) evaluate identical samples.
  const bool swap = std::lexicographical_compare(q2.begin(), q2.end(), q1.begin(), q1.end());
  const Configuration& from = swap ? q2 : q1;
  const Configuration& to = swap ? q1 : q2;
  const Configuration delta = to - from;
  const double length = delta.norm();

  std::size_t segments = 1;
  while (static_cast<double>(segments) * resolution < length) segments *= 2;

  for (std::size_t i = 0; i <= segments; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(segments);
    const Configuration q = (i == segments) ? to : Configuration(from + t * delta);
    if (!config_valid(scene, model, q)) return false;
  }
  return true;
}

}  // namespace vrrt
