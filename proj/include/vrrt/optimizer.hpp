#pragma once

#include <Eigen/Core>
#include <string>
#include <string_view>

#include "vrrt/kinematics.hpp"

namespace vrrt {

enum class OptimizerStrategy { Adam, Naive, Momentum, AdaGrad, RMSProp, Lion };

std::string_view to_string(OptimizerStrategy s);
/// Accepts adam | naive | momentum | adagrad | rmsprop | lion.
OptimizerStrategy parse_strategy(std::string_view name);

/// Per-node optimizer history. For Momentum the velocity lives in `m`;
/// for Lion `m` is its single moment.
struct OptState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  int step = 0;
  OptimizerStrategy strategy = OptimizerStrategy::Adam;

  bool operator==(const OptState& o) const {
    return step == o.step && strategy == o.strategy && m == o.m && v == o.v;
  }
};

struct OptimizerParams {
  double alpha = 0.04;
  double beta1 = 0.9;
  double beta2 = 0.9;
  double delta = 1e-8;
  double momentum = 0.9;
  OptimizerStrategy strategy = OptimizerStrategy::Adam;

  void validate() const;
};

OptState fresh_state(OptimizerStrategy strategy, std::size_t dof);

struct OptimizerStep {
  Configuration q;
  OptState state;
};

/// One descent step from q_parent with the parent's inherited state.
/// Output configuration is clamped to the joint limits.
OptimizerStep optimizer_step(const RobotModel& model, const Configuration& q_parent, const Eigen::VectorXd& grad,
                             const OptState& state, const OptimizerParams& params);

/// Same update without the joint-limit clamp.
OptimizerStep optimizer_step_unclamped(const Configuration& q_parent, const Eigen::VectorXd& grad,
                                       const OptState& state, const OptimizerParams& params);

}  // namespace vrrt
