#pragma once

#include <Eigen/Core>
#include <cmath>
#include <vector>

#include "vrrt/kinematics.hpp"
#include "vrrt/renderer.hpp"

namespace vrrt::test {

inline RobotModel arm(std::vector<double> lengths, double limit = M_PI, int blobs = 8) {
  RobotModel m;
  m.link_lengths = std::move(lengths);
  m.joint_lower.assign(m.link_lengths.size(), -limit);
  m.joint_upper.assign(m.link_lengths.size(), limit);
  m.blobs_per_link = blobs;
  return m;
}

inline Configuration vec(std::initializer_list<double> v) {
  Configuration q(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) q[i++] = x;
  return q;
}

// Brute-force Kolmogorov distance of sorted samples against a CDF.
template <typename Cdf>
double kolmogorov_distance(std::vector<double> xs, Cdf cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - f)});
  }
  return d;
}

}  // namespace vrrt::test
