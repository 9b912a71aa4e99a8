#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <vector>

#include "vrrt/kinematics.hpp"

namespace vrrt {

/// Axis-aligned world-to-pixel mapping. Pixel centers sit at integer
/// coordinates; image rows grow downward, world y grows upward.
struct Camera {
  int width = 64;
  int height = 64;
  double scale = 1.0;
  double offset_x = 0.0;
  double offset_y = 0.0;

  Vec2 to_pixel(const Vec2& w) const { return {scale * w.x() + offset_x, offset_y - scale * w.y()}; }
  void validate() const;

  /// Square framing of the world box [lo, hi] onto a width x height image.
  static Camera framing(int width, int height, const Vec2& world_lo, const Vec2& world_hi);
  /// 64x64 view of the desk workspace.
  static Camera desk();
};

/// Grayscale image, row-major, non-negative intensities.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;

  Image() = default;
  Image(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0.0) {}

  double& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  bool same_shape(const Image& o) const { return width == o.width && height == o.height; }
};

struct RenderParams {
  double blob_sigma = 1.2;   ///< pixels
  double blob_weight = 0.25;
  void validate() const;
};

/// Gaussian kernel with a smooth tail taper: exact Gaussian out to 3 sigma,
/// quintic fade to zero at 4 sigma, zero beyond. Argument is distance / sigma.
double splat_kernel(double s);

Image render(const RobotModel& model, const Configuration& q, const Camera& camera, const RenderParams& params);

/// Sum over pixels of squared differences.
double image_l2_squared(const Image& a, const Image& b);

double render_loss(const RobotModel& model, const Configuration& q, const Image& goal, const Camera& camera,
                   const RenderParams& params);

struct LossGradient {
  double loss = 0.0;
  Eigen::VectorXd grad;
};

/// Loss and its analytic gradient with respect to the joint angles.
LossGradient render_loss_grad(const RobotModel& model, const Configuration& q, const Image& goal, const Camera& camera,
                              const RenderParams& params);

inline constexpr double kPsnrCap = 100.0;

/// Peak signal-to-noise ratio with MAX = 1; identical images return kPsnrCap.
double psnr(const Image& a, const Image& b);

/// Goal image plus the rendering setup it was produced with.
class VisualObjective {
 public:
  VisualObjective(RobotModel model, Camera camera, RenderParams params, Image goal);

  double loss(const Configuration& q) const { return render_loss(model_, q, goal_, camera_, params_); }
  LossGradient loss_grad(const Configuration& q) const { return render_loss_grad(model_, q, goal_, camera_, params_); }
  Image render(const Configuration& q) const { return vrrt::render(model_, q, camera_, params_); }

  const RobotModel& model() const { return model_; }
  const Camera& camera() const { return camera_; }
  const RenderParams& render_params() const { return params_; }
  const Image& goal() const { return goal_; }

 private:
  RobotModel model_;
  Camera camera_;
  RenderParams params_;
  Image goal_;
};

}  // namespace vrrt
