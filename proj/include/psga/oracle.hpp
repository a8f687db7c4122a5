#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <span>

#include "psga/graph.hpp"

namespace psga {

inline constexpr std::size_t kDefaultEnumerationCap = 50'000'000;

using SetVisitor = std::function<void(std::span<const NodeId>)>;

/// Calls `visit` exactly once for every connected induced subgraph with at
/// most k_max nodes. Sets are grown from each root r in increasing id order
/// and only ever absorb nodes with id > r; a node enters the extension set
/// only when it is adjacent to the newest member and to nothing earlier, which
/// rules out reaching the same set along two paths. Returns the number of
/// sets visited. Throws ResourceError once more than `cap` sets are reached.
std::size_t enumerate_connected(const SocialGraph& g, std::size_t k_max, const SetVisitor& visit,
                                std::size_t cap = std::numeric_limits<std::size_t>::max());

struct OracleResult {
  GroupSelection best;
  std::map<std::size_t, double> per_size_best;
  std::size_t sets_enumerated = 0;
};

/// Exhaustive optimum over connected groups of size 1..k_max. Ties prefer the
/// smaller group, then the lexicographically smallest member list.
OracleResult exact_solve(const SocialGraph& g, const CostFunction& cost,
                         const UtilityParams& params, std::size_t cap = kDefaultEnumerationCap);

}  // namespace psga
