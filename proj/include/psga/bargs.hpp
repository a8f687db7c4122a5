#pragma once

// Budget-aware randomized group selection (BARGS).
//
// The solver grows random connected groups ("runs") from a handful of start
// nodes. A run that reaches size k also yields a sample at every smaller size,
// so one run feeds the statistics of several (start node, size) cells. Budget
// is spent in stages of equal size: after each stage the observed utility range
// of every cell decides how many runs each start node and each size gets next
// (an OCBA-style allocation), and the membership frequencies of each cell's
// elite samples become the node-selection weights for the next stage (a
// cross-entropy update).

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "psga/expansion.hpp"
#include "psga/graph.hpp"
#include "psga/random.hpp"

namespace psga {

struct BargsConfig {
  std::size_t total_budget = 1000;  // T, counted in runs
  std::size_t start_nodes = 0;      // m; 0 selects ceil(n / k_max), capped at T
  double alpha = 0.99;              // closeness ratio used to size a stage
  double rho = 0.3;                 // elite quantile of the cross-entropy update
  double p_cs = 0.7;                // target probability of correct selection
  double smoothing = 0.7;           // w: weight of the fresh elite frequencies
  double initial_weight = 0.5;      // uniform selection weight before any update
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bool verify_invariants = false;  // throw InvariantViolation on any broken invariant

  /// Throws InvalidInput on out-of-range parameters.
  void validate() const;
};

/// ceil(n / k_max).
std::size_t default_start_count(std::size_t n, std::size_t k_max);

/// Effective start-node count: `requested` if non-zero, else
/// min(default_start_count, budget). Throws InvalidInput when an explicit
/// request exceeds the node count or the budget.
std::size_t resolve_start_count(std::size_t n, std::size_t k_max, std::size_t requested,
                                std::size_t budget);

/// The m nodes with the largest eta_i + lambda * (sum of incident tightness),
/// in descending score order, lowest id first on ties.
std::vector<NodeId> select_start_nodes(const SocialGraph& g, std::size_t m, double lambda);

struct StageSizing {
  std::size_t stage_budget = 0;  // T_1
  std::size_t stage_count = 1;   // r
  bool fallback = false;         // the stage formula did not apply
};

/// T_1 = ceil(m * ln(2(1 - p_cs) / (m - 1)) / ln alpha) and r = floor(T / T_1).
/// T_1 is raised to at least m so every start node is sampled in the first
/// stage. When T < T_1, or m == 1, a single stage spends all of T. When the
/// logarithm's argument is >= 1 the formula is meaningless and the single
/// stage fallback is flagged.
StageSizing compute_stage_plan(std::size_t total_budget, std::size_t m, double p_cs, double alpha);

/// Upper bound on the stage count, T k_max ln(alpha) / (n ln(2(1 - p_cs)/(m - 1))).
/// Informational only; compute_stage_plan decides r.
double stage_count_bound(std::size_t total_budget, std::size_t k_max, std::size_t n, std::size_t m,
                         double p_cs, double alpha);

/// Min, max and count of the sampled utilities of one (start node, size) cell.
struct RangeStats {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  std::size_t count = 0;

  void add(double u) noexcept {
    if (u < min) min = u;
    if (u > max) max = u;
    ++count;
  }
  bool degenerate() const noexcept { return count > 0 && !(max > min); }
};

/// Chance that `candidate` still beats the incumbent, modelling each cell's
/// samples as uniform on [min, max]:
///   ((candidate.max - incumbent.min) / (incumbent.max - incumbent.min))^candidate.count
/// clamped to [0, 1]; 0 when candidate.max <= incumbent.min or the candidate
/// has no samples. A degenerate incumbent range (max == min) collapses this to
/// a step: 1 if candidate.max >= incumbent.max, else 0. The incumbent cell
/// itself is assigned 1 by the caller, not by this function.
double win_probability(const RangeStats& candidate, const RangeStats& incumbent);

/// Integer split of `total` proportional to `weights` by the largest-remainder
/// method; the result always sums to `total` when any weight is positive.
/// Remainder ties go to the larger weight, then the lower index.
std::vector<std::size_t> split_budget(std::span<const double> weights, std::size_t total);

/// One random expansion from a start node. utilities[k-1] is the utility of
/// the first k members of `order`.
struct RunRecord {
  std::uint32_t start_index = 0;
  std::uint32_t stage = 0;
  std::vector<NodeId> order;
  std::vector<double> utilities;

  std::size_t length() const noexcept { return order.size(); }
  std::span<const NodeId> prefix(std::size_t k) const { return {order.data(), k}; }
};

/// Every run generated so far plus per-(start index, size) utility ranges.
class SamplePool {
 public:
  SamplePool() = default;
  SamplePool(std::size_t start_count, std::size_t k_max);

  void record(RunRecord run);

  const RangeStats& stats(std::size_t start_index, std::size_t k) const {
    return stats_[start_index * k_max_ + (k - 1)];
  }
  std::span<const RunRecord> runs() const noexcept { return runs_; }
  std::size_t start_count() const noexcept { return start_count_; }
  std::size_t k_max() const noexcept { return k_max_; }

 private:
  std::size_t start_count_ = 0;
  std::size_t k_max_ = 0;
  std::vector<RangeStats> stats_;
  std::vector<RunRecord> runs_;
};

struct Incumbent {
  std::size_t start_index = 0;
  std::size_t size = 0;

  friend bool operator==(const Incumbent&, const Incumbent&) = default;
};

/// The active cell with the largest observed maximum; ties prefer the lower
/// start index, then the smaller size. nullopt when no active cell has samples.
std::optional<Incumbent> find_incumbent(const SamplePool& pool, const std::vector<bool>& active);

/// Per-size win probabilities of one start node against the incumbent, with
/// the incumbent cell fixed at 1. Index k-1 holds size k.
std::vector<double> size_win_probabilities(const SamplePool& pool, std::size_t start_index,
                                           const Incumbent& incumbent);

struct NodeAllocation {
  Incumbent incumbent;
  std::vector<double> scores;         // sum over sizes of win probabilities
  std::vector<std::size_t> budgets;   // N_{i,t}; sums to the stage budget
  bool degenerate_incumbent = false;  // incumbent range collapsed to a point
};

/// Splits the stage budget across active start nodes in proportion to their
/// summed win probabilities. Inactive nodes receive 0. The incumbent's node
/// always keeps at least one run.
NodeAllocation allocate_node_budgets(const SamplePool& pool, const std::vector<bool>& active,
                                     std::size_t stage_budget);

/// Splits one node's budget across sizes in proportion to the per-size win
/// probabilities. Index k-1 holds size k.
std::vector<std::size_t> allocate_size_budgets(const SamplePool& pool, std::size_t start_index,
                                               std::size_t node_budget,
                                               const Incumbent& incumbent);

/// Converts per-size sample targets into fresh-run counts, walking from the
/// largest size down: fresh[k] = max(0, target[k] - sum of fresh[l] for l > k).
/// A run of length k also yields samples at every smaller size, so the realized
/// sample count at size k is max(target[k], realized[k+1]).
std::vector<std::size_t> reallocate_fresh_runs(std::span<const std::size_t> targets);

/// Sparse node-selection weights: nodes without an explicit entry share the
/// common base value.
class NodeWeights {
 public:
  explicit NodeWeights(double base = 1.0) : base_(base) {}

  double operator[](NodeId j) const {
    const auto it = explicit_.find(j);
    return it == explicit_.end() ? base_ : it->second;
  }
  double base() const noexcept { return base_; }
  std::size_t explicit_count() const noexcept { return explicit_.size(); }

  /// this <- w * target + (1 - w) * this, where `target` lists the nonzero
  /// entries of the new distribution and every other node's target is 0.
  void blend(const std::unordered_map<NodeId, double>& target, double w);

 private:
  double base_;
  std::unordered_map<NodeId, double> explicit_;
};

struct ScoredSample {
  std::span<const NodeId> members;
  double utility;
};

struct CeUpdate {
  NodeWeights weights;
  double gamma;
  bool updated;  // false when no sample reached the threshold
};

/// Cross-entropy refit for one (start node, size) cell from this stage's
/// samples. The candidate threshold is the utility ranked ceil(rho * N) in
/// descending order; gamma never decreases. The elite set is every sample with
/// utility >= gamma, and each node's new weight is its elite membership
/// frequency, blended with the previous weights by `smoothing`.
CeUpdate ce_update(std::span<const ScoredSample> samples, double rho, double gamma_prev,
                   double smoothing, const NodeWeights& prev);

/// Grows one run from `start` to `length` members (fewer if the frontier
/// empties). At size k the next node is drawn from the frontier with
/// probability proportional to max(kWeightFloor, weights_by_size[k-1][v]).
/// With `verify` set, throws InvariantViolation if a frontier distribution
/// does not sum to 1 within 1e-12.
RunRecord expand_run(const SocialGraph& g, const CostFunction& cost, const UtilityParams& params,
                     NodeId start, std::size_t length, std::span<const NodeWeights> weights_by_size,
                     Rng& rng, Expansion& scratch, bool verify = false);

struct StageRecord {
  std::size_t stage = 0;  // 1-based
  std::size_t stage_budget = 0;
  std::optional<Incumbent> incumbent;  // set from stage 2 on
  std::vector<double> node_scores;
  std::vector<std::size_t> node_budgets;                // [start index]
  std::vector<std::vector<std::size_t>> size_targets;   // [start index][k-1]
  std::vector<std::vector<std::size_t>> fresh_runs;     // [start index][k-1]
  std::vector<std::vector<std::size_t>> realized;       // [start index][k-1]
  std::size_t runs_executed = 0;
  double best_utility = -std::numeric_limits<double>::infinity();
};

struct BargsResult {
  GroupSelection best;
  std::vector<NodeId> start_nodes;
  StageSizing sizing;
  std::vector<StageRecord> stages;
  std::vector<double> best_trace;  // best utility after each stage
  std::vector<std::vector<std::vector<double>>> gamma_history;  // [stage][start][k-1]
  SamplePool pool;
  std::size_t degenerate_incumbents = 0;
  double runtime_ms = 0.0;
};

/// Full solver: start-node selection, staged budget allocation, fresh-run
/// reallocation and cross-entropy weight updates. Returns the best group over
/// every sample of every size and stage. Results depend only on the instance,
/// the config and the seed, never on the thread count.
BargsResult solve(const SocialGraph& g, const CostFunction& cost, const UtilityParams& params,
                  const BargsConfig& cfg);

}  // namespace psga
