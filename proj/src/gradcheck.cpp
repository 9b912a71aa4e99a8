#include "vrrt/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vrrt/rng.hpp"

namespace vrrt {

GradCheckReport gradient_check(const GradCheckOptions& options) {
  GradCheckReport report;
  Rng rng(options.seed);
  for (std::size_t c = 0; c < options.cases; ++c) {
    const std::size_t dof = 2 + rng.index(5);
    RobotModel model = RobotModel::uniform_arm(dof, 0.0, std::numbers::pi, 2 + static_cast<int>(rng.index(9)));
    // Total reach stays inside the desk framing.
    double reach = 0.0;
    for (double& l : model.link_lengths) reach += (l = rng.uniform(0.2, 0.6));
    for (double& l : model.link_lengths) l *= std::min(1.0, 1.9 / reach);

    const Configuration q = sample_uniform(model, rng);
    Configuration q_goal = q;
    for (Eigen::Index j = 0; j < q_goal.size(); ++j) q_goal[j] += 0.3 * rng.normal();
    const Image goal = render(model, q_goal, options.camera, options.render);

    const LossGradient lg = render_loss_grad(model, q, goal, options.camera, options.render);
    for (std::size_t j = 0; j < dof; ++j) {
      Configuration qp = q, qm = q;
      qp[static_cast<Eigen::Index>(j)] += options.step;
      qm[static_cast<Eigen::Index>(j)] -= options.step;
      const double fd = (render_loss(model, qp, goal, options.camera, options.render) -
                         render_loss(model, qm, goal, options.camera, options.render)) /
                        (2.0 * options.step);
      const double an = lg.grad[static_cast<Eigen::Index>(j)];
      const double rel = std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), options.floor});
      if (rel > report.max_rel_error) {
        report.max_rel_error = rel;
        report.worst_case = c;
        report.worst_joint = j;
      }
    }
    ++report.cases;
  }
  return report;
}

}  // namespace vrrt
