#pragma once

#include <vector>

#include "vrrt/kinematics.hpp"

namespace vrrt {

struct Box {
  Vec2 min = Vec2::Zero();
  Vec2 max = Vec2::Zero();

  bool contains(const Vec2& p) const {
    return p.x() >= min.x() && p.x() <= max.x() && p.y() >= min.y() && p.y() <= max.y();
  }
  bool overlaps(const Box& o) const {
    return min.x() <= o.max.x() && o.min.x() <= max.x() && min.y() <= o.max.y() && o.min.y() <= max.y();
  }
};

/// Closed segment vs closed box (slab test).
bool segment_intersects_box(const Vec2& a, const Vec2& b, const Box& box);

struct Scene {
  Box workspace{Vec2(-2.1, -0.5), Vec2(2.1, 2.1)};
  std::vector<Box> obstacles;

  void validate() const;
};

inline constexpr double kDefaultEdgeResolution = 0.01;

/// True if any link touches an obstacle or any joint frame leaves the workspace.
bool config_in_collision(const Scene& scene, const RobotModel& model, const Configuration& q);

/// Checks the straight C-space segment q1 -> q2 at 2^k + 1 evenly spaced
/// configurations with spacing <= resolution. Symmetric in (q1, q2), and
/// halving the resolution only ever adds samples.
bool edge_collision_free(const Scene& scene, const RobotModel& model, const Configuration& q1,
                         const Configuration& q2, double resolution = kDefaultEdgeResolution);

/// Both the config and the joint limits.
inline bool config_valid(const Scene& scene, const RobotModel& model, const Configuration& q) {
  return model.within_limits(q) && !config_in_collision(scene, model, q);
}

}  // namespace vrrt
