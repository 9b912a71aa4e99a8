#include <doctest.h>

#include <algorithm>

#include "support.hpp"
#include "vrrt/rng.hpp"

using namespace vrrt;
using vrrt::test::arm;
using vrrt::test::vec;

TEST_CASE("fk: single link at zero angle") {
  const auto sk = forward_kinematics(arm({1.0}), vec({0.0}));
  CHECK(sk.joint(0).isZero());
  CHECK(sk.joint(1).isApprox(Vec2(1.0, 0.0)));
}

TEST_CASE("fk: two links, cumulative angles") {
  const auto sk = forward_kinematics(arm({1.0, 1.0}), vec({M_PI / 2, 0.0}));
  CHECK(std::abs(sk.joint(1).x()) < 1e-15);
  CHECK(sk.joint(1).y() == doctest::Approx(1.0));
  CHECK(std::abs(sk.joint(2).x()) < 1e-15);
  CHECK(sk.joint(2).y() == doctest::Approx(2.0));
}

TEST_CASE("fk: zero configuration lies on the +x axis") {
  const RobotModel m = RobotModel::desk_arm();
  const auto sk = forward_kinematics(m, Configuration::Zero(5));
  REQUIRE(sk.points.size() == 6 + 5 * 8);
  for (const Vec2& p : sk.points) {
    CHECK(p.y() == 0.0);
    CHECK(p.x() >= 0.0);
  }
  // blobs exclude the link start and include its end
  CHECK(sk.blob(0).x() == doctest::Approx(0.05));
  CHECK(sk.blob(7).x() == doctest::Approx(0.4));
}

TEST_CASE("fk: dimension mismatch throws") {
  CHECK_THROWS_AS(forward_kinematics(arm({1.0, 1.0}), vec({0.0})), std::invalid_argument);
}

TEST_CASE("jacobian: hand values") {
  const auto jac = fk_jacobian(arm({1.0}), vec({0.0}));
  CHECK(jac[0].isZero());
  CHECK(jac[1](0, 0) == doctest::Approx(0.0));
  CHECK(jac[1](1, 0) == doctest::Approx(1.0));
}

TEST_CASE("jacobian: central differences on random configurations") {
  Rng rng(11);
  const double h = 1e-6;
  double worst = 0.0;
  for (int c = 0; c < 100; ++c) {
    const std::size_t d = 2 + rng.index(5);
    std::vector<double> lengths;
    for (std::size_t i = 0; i < d; ++i) lengths.push_back(rng.uniform(0.2, 0.6));
    const RobotModel m = arm(lengths, M_PI, 1 + static_cast<int>(rng.index(6)));
    const Configuration q = sample_uniform(m, rng);
    const auto jac = fk_jacobian(m, q);
    for (std::size_t j = 0; j < d; ++j) {
      Configuration qp = q, qm = q;
      qp[j] += h;
      qm[j] -= h;
      const auto sp = forward_kinematics(m, qp);
      const auto sm = forward_kinematics(m, qm);
      for (std::size_t k = 0; k < sp.points.size(); ++k) {
        const Vec2 fd = (sp.points[k] - sm.points[k]) / (2 * h);
        const Vec2 an = jac[k].col(static_cast<Eigen::Index>(j));
        const double scale = std::max({fd.norm(), an.norm(), 1e-3});
        worst = std::max(worst, (fd - an).norm() / scale);
      }
    }
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("sample_uniform: degenerate limits give zeros") {
  RobotModel m = arm({1.0, 1.0, 1.0});
  m.joint_lower.assign(3, 0.0);
  m.joint_upper.assign(3, 0.0);
  Rng rng(3);
  for (int i = 0; i < 10; ++i) CHECK(sample_uniform(m, rng).isZero());
}

TEST_CASE("sample_uniform: per-joint means and determinism") {
  RobotModel m = arm({1.0, 1.0});
  m.joint_lower = {-1.0, 0.5};
  m.joint_upper = {2.0, 0.7};
  Rng rng(5);
  const int n = 100000;
  Eigen::Vector2d sum = Eigen::Vector2d::Zero();
  for (int i = 0; i < n; ++i) {
    const Configuration q = sample_uniform(m, rng);
    CHECK_FALSE((q[0] < -1.0 || q[0] > 2.0 || q[1] < 0.5 || q[1] > 0.7));
    sum += q;
  }
  const Eigen::Vector2d mean = sum / n;
  // uniform std-dev is width / sqrt(12)
  CHECK(std::abs(mean[0] - 0.5) <= 3 * 3.0 / std::sqrt(12.0 * n));
  CHECK(std::abs(mean[1] - 0.6) <= 3 * 0.2 / std::sqrt(12.0 * n));

  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(sample_uniform(m, a) == sample_uniform(m, b));
}

TEST_CASE("sample_ball: zero radius returns the center") {
  const RobotModel m = arm({1.0, 1.0, 1.0});
  Rng rng(1);
  const Configuration c = vec({0.1, -0.2, 0.3});
  CHECK(sample_ball(m, c, 0.0, rng) == c);
}

TEST_CASE("sample_ball: inner disc holds a quarter of the mass in 2-D") {
  Rng rng(9);
  const int n = 100000;
  const double rho = 0.7;
  int inner = 0;
  for (int i = 0; i < n; ++i) {
    const double r = sample_ball_offset(2, rho, rng).norm();
    CHECK_FALSE(r > rho);
    if (r <= rho / 2) ++inner;
  }
  const double sd = std::sqrt(0.25 * 0.75 / n);
  CHECK(std::abs(inner / static_cast<double>(n) - 0.25) <= 3 * sd);
}

TEST_CASE("sample_ball: radial CDF is r^d") {
  for (std::size_t d : {2u, 5u}) {
    Rng rng(100 + d);
    std::vector<double> radii;
    for (int i = 0; i < 100000; ++i) radii.push_back(sample_ball_offset(d, 1.0, rng).norm());
    CHECK(*std::max_element(radii.begin(), radii.end()) <= 1.0);
    const double ks = vrrt::test::kolmogorov_distance(radii, [d](double r) { return std::pow(r, double(d)); });
    CHECK(ks <= 0.01);
  }
}

TEST_CASE("sample_ball: result is clamped to the limits") {
  const RobotModel m = arm({1.0, 1.0}, 0.1);
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) CHECK(m.within_limits(sample_ball(m, vec({0.09, -0.09}), 0.7, rng)));
}

TEST_CASE("rng: identical seeds give identical streams") {
  Rng a(123), b(123);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.uniform() == b.uniform());
    CHECK(a.normal() == b.normal());
    CHECK(a.index(17) == b.index(17));
  }
  CHECK(mix_seed(1, 2) != mix_seed(2, 1));
}

TEST_CASE("model validation") {
  CHECK_NOTHROW(RobotModel::desk_arm().validate());
  CHECK_THROWS_AS(arm({}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(arm({1.0, -1.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(arm({1.0}, M_PI, 0).validate(), std::invalid_argument);
}
