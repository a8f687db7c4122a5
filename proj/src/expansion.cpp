#include "psga/expansion.hpp"

#include <algorithm>
#include <limits>

namespace psga {

Expansion::Expansion(const SocialGraph& g, double lambda)
    : graph_(&g),
      lambda_(lambda),
      member_mark_(g.node_count(), 0),
      frontier_mark_(g.node_count(), 0),
      frontier_pos_(g.node_count(), 0) {}

void Expansion::reset(NodeId start) {
  if (++epoch_ == std::numeric_limits<std::uint32_t>::max()) {
    std::fill(member_mark_.begin(), member_mark_.end(), 0);
    std::fill(frontier_mark_.begin(), frontier_mark_.end(), 0);
    epoch_ = 1;
  }
  members_.clear();
  frontier_.clear();
  increments_.clear();
  member_mark_[start] = epoch_;
  members_.push_back(start);
  preference_ = graph_->interest(start);
  touch_neighbors(start);
}

double Expansion::add(std::size_t pos) {
  const NodeId v = frontier_[pos];
  const double gain = increments_[pos];

  const std::size_t last = frontier_.size() - 1;
  if (pos != last) {
    frontier_[pos] = frontier_[last];
    increments_[pos] = increments_[last];
    frontier_pos_[frontier_[pos]] = static_cast<std::uint32_t>(pos);
  }
  frontier_.pop_back();
  increments_.pop_back();
  frontier_mark_[v] = 0;

  member_mark_[v] = epoch_;
  members_.push_back(v);
  preference_ += gain;
  touch_neighbors(v);
  return gain;
}

void Expansion::touch_neighbors(NodeId v) {
  const auto row = graph_->neighbors(v);
  const auto weights = graph_->tightness_row(v);
  for (std::size_t p = 0; p < row.size(); ++p) {
    const NodeId u = row[p];
    if (member_mark_[u] == epoch_) continue;
    const double delta = lambda_ * weights[p];
    if (frontier_mark_[u] == epoch_) {
      increments_[frontier_pos_[u]] += delta;
    } else {
      frontier_mark_[u] = epoch_;
      frontier_pos_[u] = static_cast<std::uint32_t>(frontier_.size());
      frontier_.push_back(u);
      increments_.push_back(graph_->interest(u) + delta);
    }
  }
}

std::vector<double> selection_distribution(std::span<const double> weights, double floor) {
  std::vector<double> probs(weights.size());
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    probs[i] = std::max(floor, weights[i]);
    total += probs[i];
  }
  for (double& p : probs) p /= total;
  return probs;
}

std::size_t weighted_pick(std::span<const double> weights, Rng& rng, double floor) {
  double total = 0.0;
  for (double w : weights) total += std::max(floor, w);
  double target = uniform01(rng) * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    target -= std::max(floor, weights[i]);
    if (target < 0.0) return i;
  }
  return weights.size() - 1;
}

}  // namespace psga
