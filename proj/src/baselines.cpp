#include "psga/baselines.hpp"

#include <limits>
#include <optional>

#include "psga/bargs.hpp"
#include "psga/error.hpp"
#include "psga/expansion.hpp"
#include "psga/parallel.hpp"
#include "psga/random.hpp"

namespace psga {

std::vector<NodeId> dgreedy_order(const SocialGraph& g, const UtilityParams& params) {
  if (g.empty()) throw InvalidInput("graph is empty");

  NodeId start = 0;
  for (NodeId i = 1; i < g.node_count(); ++i) {
    if (g.interest(i) > g.interest(start)) start = i;
  }

  Expansion grow(g, params.lambda);
  grow.reset(start);
  while (grow.members().size() < params.k_max && !grow.frontier().empty()) {
    const auto frontier = grow.frontier();
    const auto gains = grow.increments();
    std::size_t pick = 0;
    for (std::size_t p = 1; p < frontier.size(); ++p) {
      if (gains[p] > gains[pick] || (gains[p] == gains[pick] && frontier[p] < frontier[pick])) {
        pick = p;
      }
    }
    grow.add(pick);
  }
  const auto members = grow.members();
  return {members.begin(), members.end()};
}

GroupSelection dgreedy_solve(const SocialGraph& g, const CostFunction& cost,
                             const UtilityParams& params) {
  params.validate(g, cost);
  const auto order = dgreedy_order(g, params);

  Expansion grow(g, params.lambda);
  grow.reset(order.front());
  std::size_t best_k = 1;
  double best = grow.preference() - params.beta * cost(1);
  for (std::size_t k = 2; k <= order.size(); ++k) {
    const auto frontier = grow.frontier();
    std::size_t pos = 0;
    while (frontier[pos] != order[k - 1]) ++pos;
    grow.add(pos);
    const double util = grow.preference() - params.beta * cost(k);
    if (util > best) {
      best = util;
      best_k = k;
    }
  }
  return evaluate_utility(g, cost, params, std::span(order).first(best_k));
}

GroupSelection rgreedy_solve(const SocialGraph& g, const CostFunction& cost,
                             const UtilityParams& params, const BaselineConfig& cfg) {
  if (g.empty()) throw InvalidInput("graph is empty");
  params.validate(g, cost);
  if (cfg.budget < 1) throw InvalidInput("budget must be at least 1");

  const std::size_t m = resolve_start_count(g.node_count(), params.k_max, cfg.start_nodes, cfg.budget);
  const auto starts = select_start_nodes(g, m, params.lambda);

  struct RunBest {
    double utility = -std::numeric_limits<double>::infinity();
    std::vector<NodeId> members;
  };
  std::vector<RunBest> per_run(cfg.budget);
  const unsigned workers = std::max(cfg.threads, 1u);
  std::vector<std::optional<Expansion>> scratch(workers);

  // Run q belongs to start q mod m, so earlier starts absorb the remainder.
  parallel_for(cfg.budget, workers, [&](std::size_t q, unsigned worker) {
    if (!scratch[worker]) scratch[worker].emplace(g, params.lambda);
    Expansion& grow = *scratch[worker];
    Rng rng(derive_seed(cfg.seed, {q}));

    grow.reset(starts[q % m]);
    RunBest& best = per_run[q];
    best.utility = grow.preference() - params.beta * cost(1);
    std::size_t best_k = 1;
    while (grow.members().size() < params.k_max && !grow.frontier().empty()) {
      grow.add(weighted_pick(grow.increments(), rng));
      const double util = grow.preference() - params.beta * cost(grow.members().size());
      if (util > best.utility) {
        best.utility = util;
        best_k = grow.members().size();
      }
    }
    const auto members = grow.members();
    best.members.assign(members.begin(), members.begin() + static_cast<std::ptrdiff_t>(best_k));
  });

  std::size_t winner = 0;
  for (std::size_t q = 1; q < per_run.size(); ++q) {
    if (per_run[q].utility > per_run[winner].utility) winner = q;
  }
  return evaluate_utility(g, cost, params, per_run[winner].members);
}

}  // namespace psga
