#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "vrrt/rng.hpp"
#include "vrrt/search_tree.hpp"

namespace vrrt {

enum class FrontierPolicy { TruncGeometric, Uniform, TopK };

std::string_view to_string(FrontierPolicy p);
/// Accepts geometric | uniform | topk.
FrontierPolicy parse_frontier_policy(std::string_view name);

/// Truncated geometric rank probability (1 - kappa) kappa^k / (1 - kappa^M).
/// kappa = 0 is the greedy limit (all mass on rank 0).
double p_frontier(std::size_t k, double kappa, std::size_t m);

/// Inverse-CDF draw from the truncated geometric distribution over [0, m).
std::size_t sample_truncated_geometric(double kappa, std::size_t m, Rng& rng);

struct FrontierConfig {
  FrontierPolicy policy = FrontierPolicy::TruncGeometric;
  double kappa = 0.9;
  std::size_t capacity = 200;  ///< M
  std::size_t top_k = 20;      ///< only used by TopK

  void validate() const;
};

/// The M lowest-loss tree nodes, ascending by (loss, id).
class FrontierSet {
 public:
  explicit FrontierSet(FrontierConfig config = {});

  /// Brings the ranking up to date with `tree`. Losses are fixed at
  /// insertion, so only nodes added since the last update are merged in.
  void update(const SearchTree& tree);

  /// Rank drawn per the policy, with M replaced by the current size.
  std::size_t sample_rank(Rng& rng) const;
  NodeId sample(Rng& rng) const { return ranked_.at(sample_rank(rng)); }

  const std::vector<NodeId>& ranked() const { return ranked_; }
  std::size_t size() const { return ranked_.size(); }
  bool empty() const { return ranked_.empty(); }
  const FrontierConfig& config() const { return config_; }

 private:
  FrontierConfig config_;
  std::vector<NodeId> ranked_;
  std::vector<double> ranked_loss_;
  std::size_t seen_ = 0;
};

/// Functional form of FrontierSet::update.
FrontierSet update_frontier(FrontierSet frontier, const SearchTree& tree);

}  // namespace vrrt
