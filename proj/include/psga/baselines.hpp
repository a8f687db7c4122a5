#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "psga/graph.hpp"

namespace psga {

struct BaselineConfig {
  std::size_t budget = 1000;  // T: number of generated runs
  std::size_t start_nodes = 0;  // m; 0 selects ceil(n / k_max), capped at T
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

/// Node insertion order of the deterministic greedy: starts from the highest
/// interest node and repeatedly takes the frontier node with the largest
/// preference increment (lowest id on ties), stopping at k_max or when the
/// frontier empties.
std::vector<NodeId> dgreedy_order(const SocialGraph& g, const UtilityParams& params);

/// Best prefix of dgreedy_order by utility (smaller size on ties).
GroupSelection dgreedy_solve(const SocialGraph& g, const CostFunction& cost,
                             const UtilityParams& params);

/// Randomized greedy. Uses the same start nodes as BARGS and spreads the T runs
/// evenly over them (remainder to the earlier ones). Each run grows to k_max,
/// picking a frontier node with probability proportional to
/// max(kWeightFloor, preference increment); every realized prefix is scored
/// and the best one overall is returned (earliest found on ties).
GroupSelection rgreedy_solve(const SocialGraph& g, const CostFunction& cost,
                             const UtilityParams& params, const BaselineConfig& cfg);

}  // namespace psga
