#include "vrrt/visualize.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

namespace vrrt {

namespace {

constexpr double kRankTolerance = 1e-12;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// Maps a 2D bounding box onto a square canvas with a margin, y up.
struct Viewport {
  Eigen::Vector2d lo, hi;
  double size;
  double margin = 20.0;

  Eigen::Vector2d map(const Eigen::Vector2d& p) const {
    const double span = std::max({hi.x() - lo.x(), hi.y() - lo.y(), 1e-9});
    const double s = (size - 2 * margin) / span;
    return {margin + (p.x() - lo.x()) * s, size - margin - (p.y() - lo.y()) * s};
  }
};

std::string step_color(int step, int max_step) {
  const double t = max_step > 0 ? static_cast<double>(step) / max_step : 0.0;
  const int r = static_cast<int>(40 + 200 * t);
  const int b = static_cast<int>(220 - 180 * t);
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x50%02x", r, b);
  return buf;
}

}  // namespace

PcaProjection pca_project(const Eigen::MatrixXd& points) {
  PcaProjection out;
  const Eigen::Index n = points.rows();
  const Eigen::Index d = points.cols();
  out.mean = n > 0 ? Eigen::VectorXd(points.colwise().mean().transpose()) : Eigen::VectorXd::Zero(d);
  out.axes = Eigen::Matrix<double, Eigen::Dynamic, 2>::Zero(d, 2);
  const Eigen::MatrixXd centered = points.rowwise() - out.mean.transpose();

  if (n >= 2 && d >= 2) {
    const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    const Eigen::VectorXd& vals = eig.eigenvalues();  // ascending
    const double scale = std::max(1.0, vals.cwiseAbs().maxCoeff());
    if (vals[d - 2] > kRankTolerance * scale) {
      for (int k = 0; k < 2; ++k) {
        Eigen::VectorXd axis = eig.eigenvectors().col(d - 1 - k);
        Eigen::Index idx = 0;
        axis.cwiseAbs().maxCoeff(&idx);
        if (axis[idx] < 0) axis = -axis;
        out.axes.col(k) = axis;
      }
      out.coords = centered * out.axes;
      return out;
    }
  }
  out.degenerate = true;
  for (Eigen::Index k = 0; k < std::min<Eigen::Index>(2, d); ++k) out.axes(k, k) = 1.0;
  out.coords = centered * out.axes;
  return out;
}

std::string export_tree_svg(const SearchTree& tree, const std::vector<std::vector<Configuration>>& paths,
                            const Scene& scene, const RobotModel& model, const TreePlotOptions& options,
                            std::string* warning) {
  if (tree.empty()) throw std::invalid_argument("cannot plot an empty tree");
  std::ostringstream svg;
  const double size = options.size;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.size << "\" height=\"" << options.size
      << "\" viewBox=\"0 0 " << options.size << " " << options.size << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << options.size << "\" height=\"" << options.size << "\" fill=\"white\"/>\n";

  if (options.mode == TreePlotMode::Workspace) {
    const Viewport vp{scene.workspace.min, scene.workspace.max, size};
    const Eigen::Vector2d a = vp.map(scene.workspace.min);
    const Eigen::Vector2d b = vp.map(scene.workspace.max);
    svg << "<rect x=\"" << fmt(a.x()) << "\" y=\"" << fmt(b.y()) << "\" width=\"" << fmt(b.x() - a.x())
        << "\" height=\"" << fmt(a.y() - b.y()) << "\" fill=\"none\" stroke=\"#888\"/>\n";
    for (const Box& box : scene.obstacles) {
      const Eigen::Vector2d p = vp.map(Vec2(box.min.x(), box.max.y()));
      const Eigen::Vector2d q = vp.map(Vec2(box.max.x(), box.min.y()));
      svg << "<rect x=\"" << fmt(p.x()) << "\" y=\"" << fmt(p.y()) << "\" width=\"" << fmt(q.x() - p.x())
          << "\" height=\"" << fmt(q.y() - p.y()) << "\" fill=\"#c44\" fill-opacity=\"0.6\"/>\n";
    }
    const std::vector<Configuration> poses = paths.empty() ? std::vector<Configuration>{tree.node(0).q} : paths.front();
    for (std::size_t i = 0; i < poses.size(); ++i) {
      const double t = poses.size() > 1 ? static_cast<double>(i) / static_cast<double>(poses.size() - 1) : 1.0;
      const std::vector<Vec2> joints = joint_positions(model, poses[i]);
      svg << "<polyline fill=\"none\" stroke=\"" << step_color(static_cast<int>(100 * t), 100)
          << "\" stroke-opacity=\"" << fmt(0.25 + 0.75 * t) << "\" stroke-width=\"2\" points=\"";
      for (const Vec2& j : joints) {
        const Eigen::Vector2d p = vp.map(j);
        svg << fmt(p.x()) << "," << fmt(p.y()) << " ";
      }
      svg << "\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
  }

  Eigen::MatrixXd pts(static_cast<Eigen::Index>(tree.size()), static_cast<Eigen::Index>(tree.dof()));
  for (const TreeNode& n : tree.nodes()) pts.row(static_cast<Eigen::Index>(n.id)) = n.q.transpose();
  const PcaProjection pca = pca_project(pts);
  if (pca.degenerate && warning) *warning = "node covariance has rank < 2; plotting the first two joint coordinates";

  auto project = [&](const Configuration& q) -> Eigen::Vector2d {
    return (q - pca.mean).transpose() * pca.axes;
  };
  Eigen::Vector2d lo = pca.coords.colwise().minCoeff().transpose();
  Eigen::Vector2d hi = pca.coords.colwise().maxCoeff().transpose();
  for (const auto& path : paths) {
    for (const auto& q : path) {
      lo = lo.cwiseMin(project(q));
      hi = hi.cwiseMax(project(q));
    }
  }
  const Viewport vp{lo, hi, size};

  svg << "<g stroke=\"#bbb\" stroke-width=\"0.6\">\n";
  for (const TreeNode& n : tree.nodes()) {
    if (n.parent == kNoParent) continue;
    const Eigen::Vector2d a = vp.map(pca.coords.row(static_cast<Eigen::Index>(n.parent)).transpose());
    const Eigen::Vector2d b = vp.map(pca.coords.row(static_cast<Eigen::Index>(n.id)).transpose());
    svg << "<line x1=\"" << fmt(a.x()) << "\" y1=\"" << fmt(a.y()) << "\" x2=\"" << fmt(b.x()) << "\" y2=\""
        << fmt(b.y()) << "\"/>\n";
  }
  svg << "</g>\n";

  const std::set<NodeId> frontier(options.frontier.begin(), options.frontier.end());
  int max_step = 0;
  for (const TreeNode& n : tree.nodes()) max_step = std::max(max_step, n.opt.step);
  for (const TreeNode& n : tree.nodes()) {
    const Eigen::Vector2d p = vp.map(pca.coords.row(static_cast<Eigen::Index>(n.id)).transpose());
    std::string color;
    if (options.coloring == NodeColoring::Frontier) {
      color = frontier.count(n.id) ? "#e08000" : "#4060c0";
    } else {
      color = step_color(n.opt.step, max_step);
    }
    svg << "<circle cx=\"" << fmt(p.x()) << "\" cy=\"" << fmt(p.y()) << "\" r=\"" << (n.id == 0 ? 5 : 2)
        << "\" fill=\"" << color << "\"/>\n";
  }
  for (const auto& path : paths) {
    svg << "<polyline fill=\"none\" stroke=\"#10a040\" stroke-width=\"2\" points=\"";
    for (const auto& q : path) {
      const Eigen::Vector2d p = vp.map(project(q));
      svg << fmt(p.x()) << "," << fmt(p.y()) << " ";
    }
    svg << "\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace vrrt
