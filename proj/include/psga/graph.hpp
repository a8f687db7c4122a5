#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace psga {

using NodeId = std::uint32_t;

struct Edge {
  NodeId u;
  NodeId v;
  double tightness;
};

/// Undirected social network with a per-node interest score and a per-edge
/// tightness score. Adjacency is stored in CSR form with each row sorted by
/// neighbor id. Immutable after construction.
class SocialGraph {
 public:
  SocialGraph() = default;

  /// Throws InvalidInput on self-loops, repeated node pairs (in either
  /// orientation), or endpoints outside [0, interest.size()).
  SocialGraph(std::vector<double> interest, std::span<const Edge> edges);

  std::size_t node_count() const noexcept { return interest_.size(); }
  std::size_t edge_count() const noexcept { return neighbors_.size() / 2; }
  bool empty() const noexcept { return interest_.empty(); }
  bool contains(NodeId i) const noexcept { return i < interest_.size(); }

  double interest(NodeId i) const { return interest_[i]; }
  std::span<const double> interests() const noexcept { return interest_; }

  std::span<const NodeId> neighbors(NodeId i) const {
    return {neighbors_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  /// Tightness values parallel to neighbors(i).
  std::span<const double> tightness_row(NodeId i) const {
    return {tightness_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::size_t degree(NodeId i) const { return offsets_[i + 1] - offsets_[i]; }

  /// Tightness of edge (i, j), or nullopt when the pair is not adjacent.
  std::optional<double> tightness(NodeId i, NodeId j) const;

  /// Every edge once, with u < v, in (u, v) order.
  std::vector<Edge> edges() const;

 private:
  std::vector<double> interest_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> neighbors_;
  std::vector<double> tightness_;
};

struct CostSegment {
  std::size_t k_lo;
  std::size_t k_hi;
  double intercept;
  double slope;

  double at(std::size_t k) const { return intercept + slope * static_cast<double>(k); }
};

/// Piecewise-linear activity cost C(k) over group sizes 1..max_size(), with
/// C(0) = 0. Segments must be contiguous from k = 1 and non-negative at every
/// covered size.
class CostFunction {
 public:
  explicit CostFunction(std::vector<CostSegment> segments);

  /// The three-segment auditorium rate table: 400-k, 850-k, 2200-k.
  static CostFunction duke_energy();
  /// C(k) = 0 for 1 <= k <= max_size.
  static CostFunction zero(std::size_t max_size);

  /// Throws DomainError for k > max_size().
  double operator()(std::size_t k) const;

  std::size_t max_size() const noexcept { return segments_.back().k_hi; }
  std::span<const CostSegment> segments() const noexcept { return segments_; }

 private:
  std::vector<CostSegment> segments_;
};

inline double cost_eval(const CostFunction& cost, std::size_t k) { return cost(k); }

struct UtilityParams {
  double beta = 1.0;    // cost weight
  double lambda = 1.0;  // tightness weight
  std::size_t k_max = 1;

  /// Throws InvalidInput unless 1 <= k_max <= min(n, cost.max_size()) and
  /// both weights are non-negative.
  void validate(const SocialGraph& g, const CostFunction& cost) const;
};

struct GroupSelection {
  std::vector<NodeId> members;  // sorted ascending
  double preference = 0.0;
  double cost = 0.0;  // beta * C(|members|)
  double utility = 0.0;
  bool connected = false;

  std::size_t size() const noexcept { return members.size(); }
};

/// Sum of member interests plus lambda times the tightness of every internal
/// edge, each edge counted once. Connectivity is not required. Throws
/// InvalidInput on unknown or repeated ids, or an empty set.
double evaluate_preference(const SocialGraph& g, std::span<const NodeId> members,
                           double lambda);

GroupSelection evaluate_utility(const SocialGraph& g, const CostFunction& cost,
                                const UtilityParams& params,
                                std::span<const NodeId> members);

/// True iff the induced subgraph on `members` has a single component. The
/// empty set counts as connected.
bool is_connected(const SocialGraph& g, std::span<const NodeId> members);

/// Adds node n with zero interest, joined to every original node by a
/// zero-tightness edge, so that any member set becomes connected once n is
/// included.
SocialGraph virtualize_connectivity(const SocialGraph& g);

}  // namespace psga
