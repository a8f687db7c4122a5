#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "psga/graph.hpp"
#include "psga/random.hpp"

namespace psga {

/// Floor applied to selection weights so that frontier nodes with zero or
/// negative weight remain selectable.
inline constexpr double kWeightFloor = 1e-9;

/// A connected member set grown one frontier node at a time.
///
/// Tracks the frontier V_A (nodes adjacent to the set but not in it) and, for
/// each frontier node u, the exact preference increment
/// eta_u + lambda * sum of tightness from u to current members. Membership is
/// epoch-stamped so reset() is O(1) in the graph size and one object can be
/// reused across many runs by the same worker.
class Expansion {
 public:
  Expansion(const SocialGraph& g, double lambda);

  void reset(NodeId start);

  /// Moves frontier()[pos] into the member set and returns the preference
  /// increment it contributed. The frontier order is not preserved.
  double add(std::size_t pos);

  std::span<const NodeId> members() const noexcept { return members_; }
  std::span<const NodeId> frontier() const noexcept { return frontier_; }
  std::span<const double> increments() const noexcept { return increments_; }
  double preference() const noexcept { return preference_; }
  bool contains(NodeId v) const noexcept { return member_mark_[v] == epoch_; }

 private:
  void touch_neighbors(NodeId v);

  const SocialGraph* graph_;
  double lambda_;
  std::uint32_t epoch_ = 0;
  std::vector<std::uint32_t> member_mark_;
  std::vector<std::uint32_t> frontier_mark_;
  std::vector<std::uint32_t> frontier_pos_;
  std::vector<NodeId> members_;
  std::vector<NodeId> frontier_;
  std::vector<double> increments_;
  double preference_ = 0.0;
};

/// Probability of each entry under "proportional to max(floor, w)". When
/// every weight is at or below the floor the result is uniform.
std::vector<double> selection_distribution(std::span<const double> weights,
                                           double floor = kWeightFloor);

/// Draws an index with probability proportional to max(floor, weights[i]).
/// `weights` must be non-empty.
std::size_t weighted_pick(std::span<const double> weights, Rng& rng,
                          double floor = kWeightFloor);

}  // namespace psga
