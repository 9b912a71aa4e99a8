#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "vrrt/collision.hpp"
#include "vrrt/kinematics.hpp"
#include "vrrt/optimizer.hpp"

namespace vrrt {

using NodeId = std::size_t;
inline constexpr NodeId kNoParent = std::numeric_limits<NodeId>::max();

struct TreeNode {
  NodeId id = 0;
  Configuration q;
  NodeId parent = kNoParent;
  double cost = 0.0;  ///< C-space path length from the root
  double loss = 0.0;  ///< cached rendering loss
  OptState opt;
};

/// Rooted tree of configurations with RRT* cost bookkeeping.
///
/// Nodes are never removed, so ids are dense and equal to insertion order.
/// Nearest-neighbor queries scan a flat coordinate buffer; at desk scale
/// (<= 1e5 nodes) this beats a k-d tree that has to be rebalanced.
class SearchTree {
 public:
  explicit SearchTree(std::size_t dof) : dof_(dof) {}

  /// Appends a node. The first insert must pass kNoParent and becomes the root.
  NodeId insert(Configuration q, NodeId parent, double loss, OptState opt);

  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  std::size_t dof() const { return dof_; }
  const TreeNode& node(NodeId id) const;
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const std::vector<NodeId>& children(NodeId id) const;

  /// Lowest id among the closest nodes.
  NodeId nearest(const Configuration& q) const;
  /// All ids within distance R (inclusive), ascending.
  std::vector<NodeId> near_radius(const Configuration& q, double radius) const;

  /// Moves `id` under `new_parent` and refreshes costs of the whole subtree.
  /// Refuses moves that would create a cycle.
  void reparent(NodeId id, NodeId new_parent);

  /// Root first.
  std::vector<Configuration> path_to_root(NodeId id) const;
  std::size_t depth(NodeId id) const;

  /// CSV rows: id,parent,cost,loss,opt_i,q0..q{d-1}. Root parent is -1.
  void export_csv(std::ostream& out) const;

 private:
  bool is_ancestor(NodeId ancestor, NodeId id) const;

  std::size_t dof_;
  std::vector<TreeNode> nodes_;
  std::vector<std::vector<NodeId>> children_;
  std::vector<double> coords_;  // dof_ doubles per node
};

/// RRT* choose-parent followed by rewiring around `new_id`.
///
/// Returns the ids that received a new parent (including `new_id` when its
/// own parent changed). Optimizer states are never touched.
std::vector<NodeId> rrt_star_rewire(SearchTree& tree, NodeId new_id, std::span<const NodeId> neighbors,
                                    const Scene& scene, const RobotModel& model, double resolution);

}  // namespace vrrt
