#include "vrrt/search_tree.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace vrrt {

NodeId SearchTree::insert(Configuration q, NodeId parent, double loss, OptState opt) {
  if (static_cast<std::size_t>(q.size()) != dof_) throw std::invalid_argument("configuration dimension mismatch");
  TreeNode n;
  n.id = nodes_.size();
  if (nodes_.empty()) {
    if (parent != kNoParent) throw std::invalid_argument("first node must be the root");
    n.cost = 0.0;
  } else {
    if (parent >= nodes_.size()) throw std::out_of_range("unknown parent id " + std::to_string(parent));
    n.cost = nodes_[parent].cost + config_distance(nodes_[parent].q, q);
    children_[parent].push_back(n.id);
  }
  n.parent = parent;
  n.loss = loss;
  n.opt = std::move(opt);
  coords_.insert(coords_.end(), q.data(), q.data() + q.size());
  n.q = std::move(q);
  nodes_.push_back(std::move(n));
  children_.emplace_back();
  return nodes_.back().id;
}

const TreeNode& SearchTree::node(NodeId id) const {
  if (id >= nodes_.size()) throw std::out_of_range("unknown node id " + std::to_string(id));
  return nodes_[id];
}

const std::vector<NodeId>& SearchTree::children(NodeId id) const {
  if (id >= nodes_.size()) throw std::out_of_range("unknown node id " + std::to_string(id));
  return children_[id];
}

NodeId SearchTree::nearest(const Configuration& q) const {
  if (nodes_.empty()) throw std::logic_error("nearest() on an empty tree");
  NodeId best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  const double* c = coords_.data();
  const double* x = q.data();
  for (NodeId i = 0; i < nodes_.size(); ++i, c += dof_) {
    double d2 = 0.0;
    for (std::size_t j = 0; j < dof_ && d2 < best_d2; ++j) {
      const double diff = c[j] - x[j];
      d2 += diff * diff;
    }
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return best;
}

std::vector<NodeId> SearchTree::near_radius(const Configuration& q, double radius) const {
  std::vector<NodeId> out;
  const double r2 = radius * radius;
  const double* c = coords_.data();
  const double* x = q.data();
  for (NodeId i = 0; i < nodes_.size(); ++i, c += dof_) {
    double d2 = 0.0;
    for (std::size_t j = 0; j < dof_ && d2 <= r2; ++j) {
      const double diff = c[j] - x[j];
      d2 += diff * diff;
    }
    if (d2 <= r2) out.push_back(i);
  }
  return out;
}

bool SearchTree::is_ancestor(NodeId ancestor, NodeId id) const {
  for (NodeId cur = id; cur != kNoParent; cur = nodes_[cur].parent) {
    if (cur == ancestor) return true;
  }
  return false;
}

void SearchTree::reparent(NodeId id, NodeId new_parent) {
  if (id >= nodes_.size() || new_parent >= nodes_.size()) throw std::out_of_range("unknown node id");
  if (nodes_[id].parent == kNoParent) throw std::logic_error("cannot reparent the root");
  if (is_ancestor(id, new_parent)) throw std::logic_error("reparent would create a cycle");

  auto& siblings = children_[nodes_[id].parent];
  siblings.erase(std::find(siblings.begin(), siblings.end(), id));
  children_[new_parent].push_back(id);
  nodes_[id].parent = new_parent;
  nodes_[id].cost = nodes_[new_parent].cost + config_distance(nodes_[new_parent].q, nodes_[id].q);

  std::vector<NodeId> stack(children_[id].begin(), children_[id].end());
  while (!stack.empty()) {
    const NodeId cur = stack.back();
    stack.pop_back();
    const TreeNode& p = nodes_[nodes_[cur].parent];
    nodes_[cur].cost = p.cost + config_distance(p.q, nodes_[cur].q);
    stack.insert(stack.end(), children_[cur].begin(), children_[cur].end());
  }
}

std::vector<Configuration> SearchTree::path_to_root(NodeId id) const {
  if (id >= nodes_.size()) throw std::out_of_range("unknown node id " + std::to_string(id));
  std::vector<Configuration> path;
  for (NodeId cur = id; cur != kNoParent; cur = nodes_[cur].parent) path.push_back(nodes_[cur].q);
  std::reverse(path.begin(), path.end());
  return path;
}

std::size_t SearchTree::depth(NodeId id) const {
  std::size_t d = 0;
  for (NodeId cur = node(id).parent; cur != kNoParent; cur = nodes_[cur].parent) ++d;
  return d;
}

void SearchTree::export_csv(std::ostream& out) const {
  out << "id,parent,cost,loss,opt_i";
  for (std::size_t j = 0; j < dof_; ++j) out << ",q" << j;
  out << "\n";
  out.precision(17);
  for (const TreeNode& n : nodes_) {
    out << n.id << "," << (n.parent == kNoParent ? -1L : static_cast<long>(n.parent)) << "," << n.cost << ","
        << n.loss << "," << n.opt.step;
    for (Eigen::Index j = 0; j < n.q.size(); ++j) out << "," << n.q[j];
    out << "\n";
  }
}

std::vector<NodeId> rrt_star_rewire(SearchTree& tree, NodeId new_id, std::span<const NodeId> neighbors,
                                    const Scene& scene, const RobotModel& model, double resolution) {
  std::vector<NodeId> changed;
  const Configuration q_new = tree.node(new_id).q;

  // Choose parent: cheapest collision-free connection among the neighbors.
  NodeId best_parent = tree.node(new_id).parent;
  double best_cost = tree.node(new_id).cost;
  for (NodeId nb : neighbors) {
    if (nb == new_id || nb == best_parent) continue;
    const TreeNode& cand = tree.node(nb);
    const double c = cand.cost + config_distance(cand.q, q_new);
    if (c < best_cost && edge_collision_free(scene, model, cand.q, q_new, resolution)) {
      // new_id has no descendants yet unless reused; guard against cycles anyway.
      bool descends = false;
      for (NodeId cur = nb; cur != kNoParent; cur = tree.node(cur).parent) {
        if (cur == new_id) {
          descends = true;
          break;
        }
      }
      if (descends) continue;
      best_cost = c;
      best_parent = nb;
    }
  }
  if (best_parent != tree.node(new_id).parent) {
    tree.reparent(new_id, best_parent);
    changed.push_back(new_id);
  }

  // Rewire: route neighbors through the new node when strictly cheaper.
  for (NodeId nb : neighbors) {
    if (nb == new_id || nb == tree.node(new_id).parent || tree.node(nb).parent == kNoParent) continue;
    const TreeNode& n = tree.node(nb);
    const double via = tree.node(new_id).cost + config_distance(q_new, n.q);
    if (via < n.cost && edge_collision_free(scene, model, q_new, n.q, resolution)) {
      bool ancestor = false;
      for (NodeId cur = new_id; cur != kNoParent; cur = tree.node(cur).parent) {
        if (cur == nb) {
          ancestor = true;
          break;
        }
      }
      if (ancestor) continue;
      tree.reparent(nb, new_id);
      changed.push_back(nb);
    }
  }
  return changed;
}

}  // namespace vrrt
