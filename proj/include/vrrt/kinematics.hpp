#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <vector>

#include "vrrt/rng.hpp"

namespace vrrt {

/// Joint angles of a planar arm, radians.
using Configuration = Eigen::VectorXd;
using Vec2 = Eigen::Vector2d;
/// 2 x d block of partial derivatives of one skeleton point.
using PointJacobian = Eigen::Matrix<double, 2, Eigen::Dynamic>;

/// Planar serial arm with revolute joints and a fixed base at the origin.
struct RobotModel {
  std::vector<double> link_lengths;
  std::vector<double> joint_lower;
  std::vector<double> joint_upper;
  int blobs_per_link = 8;

  std::size_t dof() const { return link_lengths.size(); }

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
  bool within_limits(const Configuration& q) const;
  Configuration clamp(const Configuration& q) const;

  /// Five links of length 0.4, limits +-pi, eight blobs per link.
  static RobotModel desk_arm();
  static RobotModel uniform_arm(std::size_t links, double length, double limit, int blobs_per_link);
};

/// Joint frames followed by blob centers.
///
/// points[0..d] are the joint frames (points[0] is the base, points[d] the
/// tip). Blob centers follow, blobs_per_link per link, spaced uniformly and
/// excluding the link start but including its end.
struct SkeletonPoints {
  std::vector<Vec2> points;
  std::size_t dof = 0;
  int blobs_per_link = 0;

  const Vec2& joint(std::size_t i) const { return points[i]; }
  const Vec2& blob(std::size_t k) const { return points[dof + 1 + k]; }
  std::size_t blob_count() const { return dof * static_cast<std::size_t>(blobs_per_link); }
  /// Index of the link a point is rigidly attached to; joint frame i rides on link i-1.
  /// Returns -1 for the base.
  long attached_link(std::size_t point_index) const;
};

SkeletonPoints forward_kinematics(const RobotModel& model, const Configuration& q);

/// Only the d+1 joint frames; cheaper than the full skeleton for collision checks.
std::vector<Vec2> joint_positions(const RobotModel& model, const Configuration& q);

/// One 2 x d block per skeleton point, same ordering as SkeletonPoints::points.
std::vector<PointJacobian> fk_jacobian(const RobotModel& model, const Configuration& q);

Configuration sample_uniform(const RobotModel& model, Rng& rng);

/// Offset uniformly distributed in the d-ball of the given radius.
Eigen::VectorXd sample_ball_offset(std::size_t dim, double radius, Rng& rng);

/// center + uniform ball offset, clamped to the joint limits.
Configuration sample_ball(const RobotModel& model, const Configuration& center, double radius, Rng& rng);

/// Euclidean C-space distance; joints are treated as a box, no wrap-around.
inline double config_distance(const Configuration& a, const Configuration& b) { return (a - b).norm(); }

}  // namespace vrrt
