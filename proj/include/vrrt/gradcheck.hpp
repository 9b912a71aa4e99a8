#pragma once

#include <cstdint>

#include "vrrt/renderer.hpp"

namespace vrrt {

struct GradCheckOptions {
  std::size_t cases = 100;
  std::uint64_t seed = 0;
  double step = 1e-5;  ///< central-difference step, radians
  /// Denominator floor of the relative error, so components that are zero
  /// up to round-off do not blow it up.
  double floor = 1e-6;
  Camera camera = Camera::desk();
  RenderParams render;
};

struct GradCheckReport {
  std::size_t cases = 0;
  double max_rel_error = 0.0;
  std::size_t worst_case = 0;
  std::size_t worst_joint = 0;
};

/// Random arms (2 to 6 links), configurations and nearby goal images;
/// compares render_loss_grad against central differences of render_loss.
GradCheckReport gradient_check(const GradCheckOptions& options);

}  // namespace vrrt
