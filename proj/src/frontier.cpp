#include "vrrt/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace vrrt {

std::string_view to_string(FrontierPolicy p) {
  switch (p) {
    case FrontierPolicy::TruncGeometric: return "geometric";
    case FrontierPolicy::Uniform: return "uniform";
    case FrontierPolicy::TopK: return "topk";
  }
  return "geometric";
}

FrontierPolicy parse_frontier_policy(std::string_view name) {
  if (name == "geometric") return FrontierPolicy::TruncGeometric;
  if (name == "uniform") return FrontierPolicy::Uniform;
  if (name == "topk") return FrontierPolicy::TopK;
  throw std::invalid_argument("unknown frontier policy '" + std::string(name) + "' (expected geometric|uniform|topk)");
}

double p_frontier(std::size_t k, double kappa, std::size_t m) {
  if (m == 0 || k >= m) throw std::out_of_range("frontier rank out of range");
  if (!(kappa >= 0.0 && kappa < 1.0)) throw std::invalid_argument("kappa must lie in [0, 1)");
  if (kappa == 0.0) return k == 0 ? 1.0 : 0.0;
  // -expm1(M log kappa) = 1 - kappa^M without cancellation for kappa near 1.
  const double norm = -std::expm1(static_cast<double>(m) * std::log(kappa));
  return (1.0 - kappa) * std::pow(kappa, static_cast<double>(k)) / norm;
}

std::size_t sample_truncated_geometric(double kappa, std::size_t m, Rng& rng) {
  if (m == 0) throw std::out_of_range("empty rank range");
  if (kappa == 0.0 || m == 1) return 0;
  // P(K <= k) = (1 - kappa^{k+1}) / (1 - kappa^M); invert for a uniform draw.
  const double log_kappa = std::log(kappa);
  const double tail_mass = -std::expm1(static_cast<double>(m) * log_kappa);
  const double u = rng.uniform();
  const double k = std::floor(std::log1p(-u * tail_mass) / log_kappa);
  if (!(k >= 0.0)) return 0;
  return std::min(static_cast<std::size_t>(k), m - 1);
}

void FrontierConfig::validate() const {
  if (capacity == 0) throw std::invalid_argument("frontier capacity M must be >= 1");
  if (!(kappa >= 0.0 && kappa < 1.0)) throw std::invalid_argument("kappa must lie in [0, 1)");
  if (policy == FrontierPolicy::TopK && top_k == 0) throw std::invalid_argument("top_k must be >= 1");
}

FrontierSet::FrontierSet(FrontierConfig config) : config_(config) { config_.validate(); }

void FrontierSet::update(const SearchTree& tree) {
  if (tree.size() < seen_) {
    // A different (smaller) tree: start over.
    ranked_.clear();
    ranked_loss_.clear();
    seen_ = 0;
  }
  if (tree.size() == seen_) return;

  std::vector<std::pair<double, NodeId>> merged;
  merged.reserve(ranked_.size() + tree.size() - seen_);
  for (std::size_t i = 0; i < ranked_.size(); ++i) merged.emplace_back(ranked_loss_[i], ranked_[i]);
  for (NodeId id = seen_; id < tree.size(); ++id) merged.emplace_back(tree.node(id).loss, id);
  seen_ = tree.size();

  const std::size_t keep = std::min(config_.capacity, merged.size());
  std::partial_sort(merged.begin(), merged.begin() + static_cast<std::ptrdiff_t>(keep), merged.end());
  ranked_.resize(keep);
  ranked_loss_.resize(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    ranked_loss_[i] = merged[i].first;
    ranked_[i] = merged[i].second;
  }
}

std::size_t FrontierSet::sample_rank(Rng& rng) const {
  if (ranked_.empty()) throw std::logic_error("sampling from an empty frontier");
  const std::size_t n = ranked_.size();
  switch (config_.policy) {
    case FrontierPolicy::TruncGeometric: return sample_truncated_geometric(config_.kappa, n, rng);
    case FrontierPolicy::Uniform: return rng.index(n);
    case FrontierPolicy::TopK: return rng.index(std::min(config_.top_k, n));
  }
  return 0;
}

FrontierSet update_frontier(FrontierSet frontier, const SearchTree& tree) {
  frontier.update(tree);
  return frontier;
}

}  // namespace vrrt
