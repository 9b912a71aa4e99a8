#include "vrrt/renderer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace vrrt {

namespace {

constexpr double kTaperStart = 3.0;
constexpr double kCutoff = 4.0;

struct KernelEval {
  double value;
  // (T - T'/s) * exp(-s^2/2); multiply by (p - c) / sigma^2 for d(kernel)/d(center).
  double center_factor;
};

// g = exp(-s^2/2) supplied by the caller, kTaperStart < s < kCutoff.
KernelEval apply_taper(double s, double g) {
  const double t = s - kTaperStart;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double taper = 1.0 - t3 * (10.0 - 15.0 * t + 6.0 * t2);
  const double taper_ds = -30.0 * t2 * (1.0 - t) * (1.0 - t);
  return {g * taper, g * (taper - taper_ds / s)};
}

KernelEval kernel_with_derivative(double s) {
  if (s >= kCutoff) return {0.0, 0.0};
  const double g = std::exp(-0.5 * s * s);
  if (s <= kTaperStart) return {g, g};
  return apply_taper(s, g);
}

void check_goal(const Image& goal, const Camera& camera) {
  if (goal.width != camera.width || goal.height != camera.height) {
    throw std::invalid_argument("goal image is " + std::to_string(goal.width) + "x" + std::to_string(goal.height) +
                                ", camera is " + std::to_string(camera.width) + "x" + std::to_string(camera.height));
  }
}

struct PixelWindow {
  int x0, x1, y0, y1;
};

PixelWindow window_for(const Vec2& c, double radius, const Camera& camera) {
  return {std::max(0, static_cast<int>(std::ceil(c.x() - radius))),
          std::min(camera.width - 1, static_cast<int>(std::floor(c.x() + radius))),
          std::max(0, static_cast<int>(std::ceil(c.y() - radius))),
          std::min(camera.height - 1, static_cast<int>(std::floor(c.y() + radius)))};
}

// Calls fn(x, y, dx, dy, kernel) for every pixel inside a blob's support.
// The Gaussian factors per row and column, so exp runs once per row/column.
template <typename Fn>
void for_each_blob_pixel(const Vec2& c, double sigma, const Camera& camera, Fn&& fn) {
  const PixelWindow win = window_for(c, kCutoff * sigma, camera);
  if (win.x0 > win.x1 || win.y0 > win.y1) return;
  const double inv_sigma2 = 1.0 / (sigma * sigma);
  double ex[64];
  const bool small = win.x1 - win.x0 < 64;
  if (small) {
    for (int x = win.x0; x <= win.x1; ++x) {
      const double dx = x - c.x();
      ex[x - win.x0] = std::exp(-0.5 * dx * dx * inv_sigma2);
    }
  }
  for (int y = win.y0; y <= win.y1; ++y) {
    const double dy = y - c.y();
    const double ey = std::exp(-0.5 * dy * dy * inv_sigma2);
    for (int x = win.x0; x <= win.x1; ++x) {
      const double dx = x - c.x();
      const double s2 = (dx * dx + dy * dy) * inv_sigma2;
      if (s2 >= kCutoff * kCutoff) continue;
      const double g = (small ? ex[x - win.x0] : std::exp(-0.5 * dx * dx * inv_sigma2)) * ey;
      fn(x, y, dx, dy, s2 <= kTaperStart * kTaperStart ? KernelEval{g, g} : apply_taper(std::sqrt(s2), g));
    }
  }
}

}  // namespace

void Camera::validate() const {
  if (width < 8 || height < 8) throw std::invalid_argument("camera must be at least 8x8 pixels");
  if (!(scale > 0.0)) throw std::invalid_argument("camera scale must be positive");
}

Camera Camera::framing(int width, int height, const Vec2& world_lo, const Vec2& world_hi) {
  Camera c;
  c.width = width;
  c.height = height;
  c.scale = std::min(width / (world_hi.x() - world_lo.x()), height / (world_hi.y() - world_lo.y()));
  c.offset_x = -world_lo.x() * c.scale - 0.5;
  c.offset_y = world_hi.y() * c.scale - 0.5;
  return c;
}

Camera Camera::desk() { return framing(64, 64, Vec2(-2.1, -1.3), Vec2(2.1, 2.9)); }

void RenderParams::validate() const {
  if (!(blob_sigma > 0.0)) throw std::invalid_argument("blob_sigma must be positive");
  if (!(blob_weight > 0.0)) throw std::invalid_argument("blob_weight must be positive");
}

double splat_kernel(double s) { return kernel_with_derivative(s).value; }

Image render(const RobotModel& model, const Configuration& q, const Camera& camera, const RenderParams& params) {
  Image img(camera.width, camera.height);
  const SkeletonPoints sk = forward_kinematics(model, q);
  for (std::size_t k = 0; k < sk.blob_count(); ++k) {
    for_each_blob_pixel(camera.to_pixel(sk.blob(k)), params.blob_sigma, camera,
                        [&](int x, int y, double, double, const KernelEval& kv) {
                          img.at(x, y) += params.blob_weight * kv.value;
                        });
  }
  return img;
}

double image_l2_squared(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("image dimensions differ");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    const double d = a.pixels[i] - b.pixels[i];
    sum += d * d;
  }
  return sum;
}

double render_loss(const RobotModel& model, const Configuration& q, const Image& goal, const Camera& camera,
                   const RenderParams& params) {
  check_goal(goal, camera);
  return image_l2_squared(render(model, q, camera, params), goal);
}

LossGradient render_loss_grad(const RobotModel& model, const Configuration& q, const Image& goal,
                              const Camera& camera, const RenderParams& params) {
  check_goal(goal, camera);
  const SkeletonPoints sk = forward_kinematics(model, q);
  const Image img = render(model, q, camera, params);

  LossGradient out;
  out.loss = image_l2_squared(img, goal);
  out.grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.dof()));

  const double sigma = params.blob_sigma;
  const double inv_sigma2 = 1.0 / (sigma * sigma);
  for (std::size_t k = 0; k < sk.blob_count(); ++k) {
    double gx = 0.0;
    double gy = 0.0;
    for_each_blob_pixel(camera.to_pixel(sk.blob(k)), sigma, camera,
                        [&](int x, int y, double dx, double dy, const KernelEval& kv) {
                          const double residual = img.at(x, y) - goal.at(x, y);
                          const double f = 2.0 * residual * params.blob_weight * kv.center_factor * inv_sigma2;
                          gx += f * dx;
                          gy += f * dy;
                        });
    if (gx == 0.0 && gy == 0.0) continue;
    // Pixel gradient -> world gradient (y axis is flipped).
    const double wx = camera.scale * gx;
    const double wy = -camera.scale * gy;
    // Chain through the lever-arm Jacobian of this blob.
    const Vec2& pt = sk.blob(k);
    const long link = sk.attached_link(sk.dof + 1 + k);
    for (long j = 0; j <= link; ++j) {
      const Vec2& pivot = sk.joint(static_cast<std::size_t>(j));
      out.grad[j] += wx * -(pt.y() - pivot.y()) + wy * (pt.x() - pivot.x());
    }
  }
  if (!std::isfinite(out.loss) || !out.grad.allFinite()) {
    throw std::runtime_error("non-finite value in render loss gradient");
  }
  return out;
}

double psnr(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("image dimensions differ");
  if (a.pixels.empty()) return kPsnrCap;
  const double mse = image_l2_squared(a, b) / static_cast<double>(a.pixels.size());
  if (mse == 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(1.0 / mse));
}

VisualObjective::VisualObjective(RobotModel model, Camera camera, RenderParams params, Image goal)
    : model_(std::move(model)), camera_(camera), params_(params), goal_(std::move(goal)) {
  check_goal(goal_, camera_);
}

}  // namespace vrrt
