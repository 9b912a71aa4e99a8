#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "vrrt/collision.hpp"
#include "vrrt/search_tree.hpp"

namespace vrrt {

struct PcaProjection {
  Eigen::MatrixX2d coords;       ///< one row per input point
  Eigen::Matrix<double, Eigen::Dynamic, 2> axes;  ///< principal directions, d x 2
  Eigen::VectorXd mean;
  bool degenerate = false;       ///< covariance rank < 2; fell back to the first coordinates
};

/// Projects the rows of `points` (n x d) onto their top two principal
/// components. Axis signs are fixed so the largest-magnitude entry is positive.
PcaProjection pca_project(const Eigen::MatrixXd& points);

enum class TreePlotMode { Workspace, Pca };
enum class NodeColoring { Frontier, OptStep };

struct TreePlotOptions {
  TreePlotMode mode = TreePlotMode::Pca;
  NodeColoring coloring = NodeColoring::Frontier;
  std::vector<NodeId> frontier;  ///< highlighted when coloring == Frontier
  int size = 600;                ///< pixels
};

/// Standalone SVG. PCA mode plots tree edges and nodes in the projected
/// plane plus any paths; workspace mode draws the arm at each configuration
/// of the first path over the scene obstacles.
/// `warning` is set when the PCA fell back to raw coordinates.
std::string export_tree_svg(const SearchTree& tree, const std::vector<std::vector<Configuration>>& paths,
                            const Scene& scene, const RobotModel& model, const TreePlotOptions& options,
                            std::string* warning = nullptr);

}  // namespace vrrt
