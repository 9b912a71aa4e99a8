#include <doctest.h>

#include <sstream>

#include "support.hpp"
#include "vrrt/gradcheck.hpp"
#include "vrrt/image_io.hpp"
#include "vrrt/rng.hpp"

using namespace vrrt;
using vrrt::test::arm;
using vrrt::test::vec;

namespace {

Camera square_camera(int size, double scale, double ox, double oy) {
  Camera c;
  c.width = c.height = size;
  c.scale = scale;
  c.offset_x = ox;
  c.offset_y = oy;
  return c;
}

Image filled(int w, int h, double value) {
  Image img(w, h);
  std::fill(img.pixels.begin(), img.pixels.end(), value);
  return img;
}

}  // namespace

TEST_CASE("kernel: Gaussian core, smooth taper, compact support") {
  CHECK(splat_kernel(0.0) == 1.0);
  CHECK(splat_kernel(2.0) == doctest::Approx(std::exp(-2.0)));
  CHECK(splat_kernel(3.0) == doctest::Approx(std::exp(-4.5)));
  CHECK(splat_kernel(3.0 + 1e-9) == doctest::Approx(std::exp(-4.5)));
  CHECK(splat_kernel(4.0) == 0.0);
  CHECK(splat_kernel(10.0) == 0.0);
  CHECK(splat_kernel(3.999) < 1e-8);
  for (double s = 3.0; s < 4.0; s += 0.01) CHECK(splat_kernel(s) <= std::exp(-0.5 * s * s));
}

TEST_CASE("render: zero links give a blank image") {
  RobotModel empty;
  const Image img = render(empty, Configuration(0), Camera::desk(), RenderParams{});
  CHECK(std::all_of(img.pixels.begin(), img.pixels.end(), [](double p) { return p == 0.0; }));
}

TEST_CASE("render: single blob on a pixel center peaks at the weight") {
  const RobotModel m = arm({1.0}, M_PI, 1);
  const Camera cam = square_camera(16, 10.0, 3.0, 8.0);  // tip (1, 0) lands on pixel (13, 8)
  const Image img = render(m, vec({0.0}), cam, RenderParams{1.2, 1.0});
  CHECK(std::abs(img.at(13, 8) - 1.0) < 1e-6);
  CHECK(*std::max_element(img.pixels.begin(), img.pixels.end()) == img.at(13, 8));
  CHECK(img.at(14, 8) == doctest::Approx(std::exp(-0.5 / (1.2 * 1.2))));
}

TEST_CASE("render: mirrored configuration gives a vertically mirrored image") {
  const RobotModel m = RobotModel::desk_arm();
  const Camera cam = square_camera(64, 14.0, 31.5, 31.5);
  Rng rng(8);
  for (int t = 0; t < 5; ++t) {
    const Configuration q = sample_uniform(m, rng);
    const Image a = render(m, q, cam, RenderParams{});
    const Image b = render(m, -q, cam, RenderParams{});
    double worst = 0.0;
    for (int y = 0; y < 64; ++y)
      for (int x = 0; x < 64; ++x) worst = std::max(worst, std::abs(a.at(x, y) - b.at(x, 63 - y)));
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("render: deterministic") {
  const RobotModel m = RobotModel::desk_arm();
  const Configuration q = vec({0.3, -0.2, 0.5, 1.0, -0.7});
  CHECK(render(m, q, Camera::desk(), {}).pixels == render(m, q, Camera::desk(), {}).pixels);
}

TEST_CASE("loss: direct evaluation on 2x2 images") {
  Image a(2, 2), b(2, 2);
  a.at(0, 0) = 1.0;
  CHECK(image_l2_squared(a, b) == 1.0);
  CHECK(image_l2_squared(b, b) == 0.0);
  CHECK_THROWS_AS(image_l2_squared(a, Image(3, 2)), std::invalid_argument);
}

TEST_CASE("loss: zero at the goal, non-negative elsewhere, dimension checked") {
  const RobotModel m = RobotModel::desk_arm();
  const Camera cam = Camera::desk();
  Rng rng(2);
  const Configuration qg = sample_uniform(m, rng);
  const Image goal = render(m, qg, cam, {});
  CHECK(render_loss(m, qg, goal, cam, {}) == 0.0);
  for (int i = 0; i < 20; ++i) CHECK(render_loss(m, sample_uniform(m, rng), goal, cam, {}) >= 0.0);
  CHECK_THROWS_AS(render_loss(m, qg, Image(32, 32), cam, {}), std::invalid_argument);
}

TEST_CASE("gradient: exactly zero at the global minimum") {
  const RobotModel m = RobotModel::desk_arm();
  const Configuration q = vec({0.3, -0.2, 0.5, 1.0, -0.7});
  const Image goal = render(m, q, Camera::desk(), {});
  const LossGradient lg = render_loss_grad(m, q, goal, Camera::desk(), {});
  CHECK(lg.loss == 0.0);
  CHECK(lg.grad.isZero(0.0));
}

TEST_CASE("gradient: loss value agrees with render_loss") {
  const RobotModel m = RobotModel::desk_arm();
  const Image goal = render(m, vec({0.1, 0.2, 0.3, 0.4, 0.5}), Camera::desk(), {});
  const Configuration q = vec({0.0, 0.3, 0.1, 0.6, 0.2});
  CHECK(render_loss_grad(m, q, goal, Camera::desk(), {}).loss ==
        doctest::Approx(render_loss(m, q, goal, Camera::desk(), {})).epsilon(1e-12));
}

TEST_CASE("gradient: joint that only moves off-frame blobs has zero gradient") {
  const RobotModel m = arm({0.2, 5.0});
  const Camera cam = square_camera(16, 25.0, 8.0, 8.0);
  const RenderParams rp{};
  const Configuration q = vec({0.3, 0.2});
  // precondition: every blob on the second link is beyond the kernel support of the frame
  const auto sk = forward_kinematics(m, q);
  for (std::size_t k = 8; k < 16; ++k) {
    const Vec2 p = cam.to_pixel(sk.blob(k));
    const bool far = p.x() > 15 + 4 * rp.blob_sigma || p.x() < -4 * rp.blob_sigma ||
                     p.y() > 15 + 4 * rp.blob_sigma || p.y() < -4 * rp.blob_sigma;
    REQUIRE(far);
  }
  const Image goal = render(m, vec({-0.2, 0.0}), cam, rp);
  const LossGradient lg = render_loss_grad(m, q, goal, cam, rp);
  CHECK(lg.grad[0] != 0.0);
  CHECK(lg.grad[1] == 0.0);
}

TEST_CASE("gradient: central differences on random arms") {
  GradCheckOptions opt;
  opt.cases = 20;
  opt.seed = 77;
  CHECK(gradient_check(opt).max_rel_error <= 1e-4);
}

TEST_CASE("loss is continuous in q") {
  const RobotModel m = RobotModel::desk_arm();
  Rng rng(13);
  for (int t = 0; t < 20; ++t) {
    const Configuration q = sample_uniform(m, rng);
    const Image goal = render(m, sample_uniform(m, rng), Camera::desk(), {});
    Eigen::VectorXd dq = sample_ball_offset(5, 1.0, rng);
    dq *= 1e-6 / dq.norm();
    const double l0 = render_loss(m, q, goal, Camera::desk(), {});
    const double l1 = render_loss(m, q + dq, goal, Camera::desk(), {});
    CHECK(std::abs(l1 - l0) <= 1e-3);
  }
}

TEST_CASE("psnr: closed forms") {
  const Image zero(8, 8);
  CHECK(psnr(zero, zero) == kPsnrCap);
  CHECK(psnr(zero, filled(8, 8, 0.1)) == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(psnr(zero, filled(8, 8, 1.0)) == 0.0);
  CHECK(psnr(filled(8, 8, 0.3), filled(8, 8, 0.31)) == doctest::Approx(40.0).epsilon(1e-9));
  CHECK_THROWS_AS(psnr(zero, Image(4, 4)), std::invalid_argument);
}

TEST_CASE("pgm: binary round trip is bit-exact") {
  Image img(7, 5);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) img.pixels[i] = static_cast<double>((i * 37) % 256) / 255.0;
  for (PgmFormat f : {PgmFormat::Binary, PgmFormat::Ascii}) {
    std::stringstream ss;
    write_pgm(ss, img, f);
    const Image back = read_pgm(ss);
    CHECK(back.width == 7);
    CHECK(back.height == 5);
    CHECK(back.pixels == img.pixels);
  }
}

TEST_CASE("pgm: clamps on write and rejects garbage") {
  Image img(2, 1);
  img.pixels = {-0.5, 3.0};
  std::stringstream ss;
  write_pgm(ss, img, PgmFormat::Ascii);
  const Image back = read_pgm(ss);
  CHECK(back.pixels == std::vector<double>{0.0, 1.0});
  std::stringstream bad("P7\n1 1\n255\n0\n");
  CHECK_THROWS(read_pgm(bad));
}
