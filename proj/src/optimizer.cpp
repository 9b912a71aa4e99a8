#include "vrrt/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace vrrt {

std::string_view to_string(OptimizerStrategy s) {
  switch (s) {
    case OptimizerStrategy::Adam: return "adam";
    case OptimizerStrategy::Naive: return "naive";
    case OptimizerStrategy::Momentum: return "momentum";
    case OptimizerStrategy::AdaGrad: return "adagrad";
    case OptimizerStrategy::RMSProp: return "rmsprop";
    case OptimizerStrategy::Lion: return "lion";
  }
  return "adam";
}

OptimizerStrategy parse_strategy(std::string_view name) {
  for (auto s : {OptimizerStrategy::Adam, OptimizerStrategy::Naive, OptimizerStrategy::Momentum,
                 OptimizerStrategy::AdaGrad, OptimizerStrategy::RMSProp, OptimizerStrategy::Lion}) {
    if (to_string(s) == name) return s;
  }
  throw std::invalid_argument("unknown optimizer '" + std::string(name) +
                              "' (expected adam|naive|momentum|adagrad|rmsprop|lion)");
}

void OptimizerParams::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  for (double b : {beta1, beta2, momentum}) {
    if (!(b >= 0.0 && b < 1.0)) throw std::invalid_argument("decay rates must lie in [0, 1)");
  }
}

OptState fresh_state(OptimizerStrategy strategy, std::size_t dof) {
  const auto n = static_cast<Eigen::Index>(dof);
  return {Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n), 0, strategy};
}

OptimizerStep optimizer_step_unclamped(const Configuration& q_parent, const Eigen::VectorXd& g,
                                       const OptState& state, const OptimizerParams& p) {
  if (g.size() != q_parent.size() || state.m.size() != q_parent.size() || state.v.size() != q_parent.size()) {
    throw std::invalid_argument("optimizer state dimension mismatch");
  }
  if (!g.allFinite() || !q_parent.allFinite()) throw std::invalid_argument("non-finite optimizer input");

  OptimizerStep out{q_parent, state};
  OptState& s = out.state;
  s.strategy = p.strategy;
  s.step = state.step + 1;

  switch (p.strategy) {
    case OptimizerStrategy::Adam: {
      s.m = p.beta1 * state.m + (1.0 - p.beta1) * g;
      s.v = p.beta2 * state.v + (1.0 - p.beta2) * g.cwiseProduct(g);
      const double c1 = 1.0 - std::pow(p.beta1, s.step);
      const double c2 = 1.0 - std::pow(p.beta2, s.step);
      for (Eigen::Index j = 0; j < g.size(); ++j) {
        const double m_hat = s.m[j] / c1;
        const double v_hat = s.v[j] / c2;
        out.q[j] = q_parent[j] - p.alpha * m_hat / (std::sqrt(v_hat) + p.delta);
      }
      break;
    }
    case OptimizerStrategy::Naive:
      out.q = q_parent - p.alpha * g;
      break;
    case OptimizerStrategy::Momentum:
      s.m = p.momentum * state.m + (1.0 - p.momentum) * g;
      out.q = q_parent - p.alpha * s.m;
      break;
    case OptimizerStrategy::AdaGrad:
      s.v = state.v + g.cwiseProduct(g);
      for (Eigen::Index j = 0; j < g.size(); ++j) out.q[j] = q_parent[j] - p.alpha * g[j] / (std::sqrt(s.v[j]) + p.delta);
      break;
    case OptimizerStrategy::RMSProp:
      s.v = p.beta2 * state.v + (1.0 - p.beta2) * g.cwiseProduct(g);
      for (Eigen::Index j = 0; j < g.size(); ++j) out.q[j] = q_parent[j] - p.alpha * g[j] / (std::sqrt(s.v[j]) + p.delta);
      break;
    case OptimizerStrategy::Lion:
      for (Eigen::Index j = 0; j < g.size(); ++j) {
        const double c = p.beta1 * state.m[j] + (1.0 - p.beta1) * g[j];
        const double sign = (c > 0.0) - (c < 0.0);
        out.q[j] = q_parent[j] - p.alpha * sign;
      }
      s.m = p.beta2 * state.m + (1.0 - p.beta2) * g;
      break;
  }
  if (!out.q.allFinite()) throw std::runtime_error("optimizer produced a non-finite configuration");
  return out;
}

OptimizerStep optimizer_step(const RobotModel& model, const Configuration& q_parent, const Eigen::VectorXd& grad,
                             const OptState& state, const OptimizerParams& params) {
  OptimizerStep out = optimizer_step_unclamped(q_parent, grad, state, params);
  out.q = model.clamp(out.q);
  return out;
}

}  // namespace vrrt
