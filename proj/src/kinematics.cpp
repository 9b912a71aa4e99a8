#include "vrrt/kinematics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace vrrt {

namespace {

void check_dims(const RobotModel& model, const Configuration& q) {
  if (static_cast<std::size_t>(q.size()) != model.dof()) {
    throw std::invalid_argument("configuration has " + std::to_string(q.size()) +
                                " entries, robot has " + std::to_string(model.dof()) + " joints");
  }
}

}  // namespace

void RobotModel::validate() const {
  if (link_lengths.empty()) throw std::invalid_argument("robot needs at least one link");
  if (joint_lower.size() != link_lengths.size() || joint_upper.size() != link_lengths.size()) {
    throw std::invalid_argument("joint limit count does not match link count");
  }
  for (std::size_t i = 0; i < link_lengths.size(); ++i) {
    if (!(link_lengths[i] > 0.0) || !std::isfinite(link_lengths[i])) {
      throw std::invalid_argument("link length " + std::to_string(i) + " must be positive");
    }
    if (!(joint_lower[i] < joint_upper[i])) {
      throw std::invalid_argument("joint " + std::to_string(i) + " needs lower < upper");
    }
  }
  if (blobs_per_link < 1) throw std::invalid_argument("blobs_per_link must be >= 1");
}

bool RobotModel::within_limits(const Configuration& q) const {
  if (static_cast<std::size_t>(q.size()) != dof()) return false;
  for (std::size_t i = 0; i < dof(); ++i) {
    if (q[i] < joint_lower[i] || q[i] > joint_upper[i]) return false;
  }
  return true;
}

Configuration RobotModel::clamp(const Configuration& q) const {
  check_dims(*this, q);
  Configuration out = q;
  for (std::size_t i = 0; i < dof(); ++i) out[i] = std::min(std::max(q[i], joint_lower[i]), joint_upper[i]);
  return out;
}

RobotModel RobotModel::desk_arm() { return uniform_arm(5, 0.4, std::numbers::pi, 8); }

RobotModel RobotModel::uniform_arm(std::size_t links, double length, double limit, int blobs_per_link) {
  RobotModel m;
  m.link_lengths.assign(links, length);
  m.joint_lower.assign(links, -limit);
  m.joint_upper.assign(links, limit);
  m.blobs_per_link = blobs_per_link;
  return m;
}

long SkeletonPoints::attached_link(std::size_t point_index) const {
  if (point_index <= dof) return static_cast<long>(point_index) - 1;
  return static_cast<long>((point_index - dof - 1) / static_cast<std::size_t>(blobs_per_link));
}

std::vector<Vec2> joint_positions(const RobotModel& model, const Configuration& q) {
  check_dims(model, q);
  std::vector<Vec2> joints(model.dof() + 1);
  joints[0] = Vec2::Zero();
  double theta = 0.0;
  for (std::size_t i = 0; i < model.dof(); ++i) {
    theta += q[i];
    joints[i + 1] = joints[i] + model.link_lengths[i] * Vec2(std::cos(theta), std::sin(theta));
  }
  return joints;
}

SkeletonPoints forward_kinematics(const RobotModel& model, const Configuration& q) {
  SkeletonPoints sk;
  sk.dof = model.dof();
  sk.blobs_per_link = model.blobs_per_link;
  sk.points = joint_positions(model, q);
  sk.points.reserve(sk.dof + 1 + sk.blob_count());
  const int n = model.blobs_per_link;
  for (std::size_t i = 0; i < sk.dof; ++i) {
    const Vec2 a = sk.points[i];
    const Vec2 b = sk.points[i + 1];
    for (int k = 1; k <= n; ++k) {
      const double t = static_cast<double>(k) / n;
      sk.points.push_back(a + t * (b - a));
    }
  }
  return sk;
}

std::vector<PointJacobian> fk_jacobian(const RobotModel& model, const Configuration& q) {
  const SkeletonPoints sk = forward_kinematics(model, q);
  const std::size_t d = model.dof();
  std::vector<PointJacobian> jac(sk.points.size(), PointJacobian::Zero(2, static_cast<Eigen::Index>(d)));
  for (std::size_t p = 0; p < sk.points.size(); ++p) {
    const long link = sk.attached_link(p);
    const Vec2& pt = sk.points[p];
    // Joint j rotates everything on links j..d-1 about joint frame j.
    for (long j = 0; j <= link; ++j) {
      const Vec2& pivot = sk.points[static_cast<std::size_t>(j)];
      jac[p](0, j) = -(pt.y() - pivot.y());
      jac[p](1, j) = pt.x() - pivot.x();
    }
  }
  return jac;
}

Configuration sample_uniform(const RobotModel& model, Rng& rng) {
  Configuration q(static_cast<Eigen::Index>(model.dof()));
  for (std::size_t i = 0; i < model.dof(); ++i) q[i] = rng.uniform(model.joint_lower[i], model.joint_upper[i]);
  return q;
}

Eigen::VectorXd sample_ball_offset(std::size_t dim, double radius, Rng& rng) {
  Eigen::VectorXd u(static_cast<Eigen::Index>(dim));
  if (dim == 0) return u;
  double norm = 0.0;
  do {
    for (std::size_t i = 0; i < dim; ++i) u[i] = rng.normal();
    norm = u.norm();
  } while (norm == 0.0);
  const double r = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(dim));
  return u * (r / norm);
}

Configuration sample_ball(const RobotModel& model, const Configuration& center, double radius, Rng& rng) {
  check_dims(model, center);
  return model.clamp(center + sample_ball_offset(model.dof(), radius, rng));
}

}  // namespace vrrt
