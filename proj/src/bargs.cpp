#include "psga/bargs.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "psga/error.hpp"
#include "psga/parallel.hpp"

namespace psga {

void BargsConfig::validate() const {
  if (total_budget < 1) throw InvalidInput("budget must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");
  if (!(rho > 0.0 && rho < 1.0)) throw InvalidInput("rho must lie in (0, 1)");
  if (!(p_cs > 0.0 && p_cs < 1.0)) throw InvalidInput("p_cs must lie in (0, 1)");
  if (!(smoothing >= 0.0 && smoothing <= 1.0)) throw InvalidInput("smoothing must lie in [0, 1]");
  if (!(initial_weight > 0.0 && initial_weight <= 1.0)) {
    throw InvalidInput("initial weight must lie in (0, 1]");
  }
}

std::size_t default_start_count(std::size_t n, std::size_t k_max) {
  return (n + k_max - 1) / k_max;
}

std::size_t resolve_start_count(std::size_t n, std::size_t k_max, std::size_t requested,
                                std::size_t budget) {
  if (requested == 0) return std::max<std::size_t>(1, std::min(default_start_count(n, k_max), budget));
  if (requested > n) {
    throw InvalidInput("m=" + std::to_string(requested) + " exceeds node count " + std::to_string(n));
  }
  if (requested > budget) {
    throw InvalidInput("m=" + std::to_string(requested) + " exceeds budget " + std::to_string(budget));
  }
  return requested;
}

std::vector<NodeId> select_start_nodes(const SocialGraph& g, std::size_t m, double lambda) {
  const std::size_t n = g.node_count();
  if (m < 1 || m > n) {
    throw InvalidInput("cannot select " + std::to_string(m) + " start nodes from " +
                       std::to_string(n));
  }
  std::vector<double> score(n);
  for (NodeId i = 0; i < n; ++i) {
    const auto row = g.tightness_row(i);
    score[i] = g.interest(i) + lambda * std::accumulate(row.begin(), row.end(), 0.0);
  }
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  auto by_score = [&](NodeId a, NodeId b) { return score[a] > score[b] || (score[a] == score[b] && a < b); };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m), order.end(), by_score);
  order.resize(m);
  return order;
}

StageSizing compute_stage_plan(std::size_t total_budget, std::size_t m, double p_cs, double alpha) {
  StageSizing single{total_budget, 1, false};
  if (m <= 1) return single;

  const double arg = 2.0 * (1.0 - p_cs) / static_cast<double>(m - 1);
  if (!(arg < 1.0) || !(arg > 0.0)) {
    single.fallback = true;
    return single;
  }
  const double raw = static_cast<double>(m) * std::log(arg) / std::log(alpha);
  auto stage_budget = static_cast<std::size_t>(std::ceil(raw));
  stage_budget = std::max(stage_budget, m);
  if (total_budget < stage_budget) return single;
  return {stage_budget, std::max<std::size_t>(1, total_budget / stage_budget), false};
}

double stage_count_bound(std::size_t total_budget, std::size_t k_max, std::size_t n, std::size_t m,
                         double p_cs, double alpha) {
  const double arg = 2.0 * (1.0 - p_cs) / static_cast<double>(m - 1);
  return static_cast<double>(total_budget) * static_cast<double>(k_max) * std::log(alpha) /
         (static_cast<double>(n) * std::log(arg));
}

double win_probability(const RangeStats& candidate, const RangeStats& incumbent) {
  if (candidate.count == 0) return 0.0;
  if (incumbent.degenerate()) return candidate.max >= incumbent.max ? 1.0 : 0.0;
  if (candidate.max <= incumbent.min) return 0.0;
  const double ratio = (candidate.max - incumbent.min) / (incumbent.max - incumbent.min);
  return std::clamp(std::pow(ratio, static_cast<double>(candidate.count)), 0.0, 1.0);
}

std::vector<std::size_t> split_budget(std::span<const double> weights, std::size_t total) {
  std::vector<std::size_t> out(weights.size(), 0);
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(sum > 0.0) || total == 0) return out;

  std::vector<double> remainder(weights.size(), 0.0);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0)) continue;
    const double share = static_cast<double>(total) * weights[i] / sum;
    out[i] = std::min(total, static_cast<std::size_t>(std::floor(share)));
    remainder[i] = share - static_cast<double>(out[i]);
    assigned += out[i];
  }
  // Floating error can push the floors one past total; trim from the smallest remainders.
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (remainder[a] != remainder[b]) return remainder[a] > remainder[b];
    return weights[a] > weights[b];
  });
  for (auto it = order.rbegin(); assigned > total && it != order.rend(); ++it) {
    if (out[*it] > 0) {
      --out[*it];
      --assigned;
    }
  }
  for (std::size_t p = 0; assigned < total; p = (p + 1) % order.size()) {
    if (weights[order[p]] > 0.0) {
      ++out[order[p]];
      ++assigned;
    }
  }
  return out;
}

SamplePool::SamplePool(std::size_t start_count, std::size_t k_max)
    : start_count_(start_count), k_max_(k_max), stats_(start_count * k_max) {}

void SamplePool::record(RunRecord run) {
  for (std::size_t k = 1; k <= run.length(); ++k) {
    stats_[run.start_index * k_max_ + (k - 1)].add(run.utilities[k - 1]);
  }
  runs_.push_back(std::move(run));
}

std::optional<Incumbent> find_incumbent(const SamplePool& pool, const std::vector<bool>& active) {
  std::optional<Incumbent> best;
  double best_max = 0.0;
  for (std::size_t i = 0; i < pool.start_count(); ++i) {
    if (!active[i]) continue;
    for (std::size_t k = 1; k <= pool.k_max(); ++k) {
      const RangeStats& s = pool.stats(i, k);
      if (s.count == 0) continue;
      if (!best || s.max > best_max) {
        best = Incumbent{i, k};
        best_max = s.max;
      }
    }
  }
  return best;
}

std::vector<double> size_win_probabilities(const SamplePool& pool, std::size_t start_index,
                                           const Incumbent& incumbent) {
  const RangeStats& inc = pool.stats(incumbent.start_index, incumbent.size);
  std::vector<double> probs(pool.k_max(), 0.0);
  for (std::size_t k = 1; k <= pool.k_max(); ++k) {
    probs[k - 1] = (Incumbent{start_index, k} == incumbent)
                       ? 1.0
                       : win_probability(pool.stats(start_index, k), inc);
  }
  return probs;
}

NodeAllocation allocate_node_budgets(const SamplePool& pool, const std::vector<bool>& active,
                                     std::size_t stage_budget) {
  const auto incumbent = find_incumbent(pool, active);
  if (!incumbent) throw InvariantViolation("no active start node has samples");

  NodeAllocation out;
  out.incumbent = *incumbent;
  out.degenerate_incumbent = pool.stats(incumbent->start_index, incumbent->size).degenerate();
  out.scores.assign(pool.start_count(), 0.0);
  for (std::size_t i = 0; i < pool.start_count(); ++i) {
    if (!active[i]) continue;
    const auto probs = size_win_probabilities(pool, i, *incumbent);
    out.scores[i] = std::accumulate(probs.begin(), probs.end(), 0.0);
  }
  if (!(out.scores[incumbent->start_index] >= 1.0)) {
    throw InvariantViolation("incumbent start node scored below 1");
  }
  out.budgets = split_budget(out.scores, stage_budget);

  // Rounding may starve the incumbent when many nodes tie; it keeps one run.
  std::size_t& inc_budget = out.budgets[incumbent->start_index];
  if (inc_budget == 0 && stage_budget > 0) {
    const auto donor = std::max_element(out.budgets.begin(), out.budgets.end());
    --*donor;
    inc_budget = 1;
  }
  return out;
}

std::vector<std::size_t> allocate_size_budgets(const SamplePool& pool, std::size_t start_index,
                                               std::size_t node_budget,
                                               const Incumbent& incumbent) {
  const auto probs = size_win_probabilities(pool, start_index, incumbent);
  auto targets = split_budget(probs, node_budget);
  if (std::accumulate(targets.begin(), targets.end(), std::size_t{0}) != node_budget) {
    // Every size has zero win probability: spend the budget on the longest
    // realized size so that all shorter sizes are refreshed too.
    std::size_t longest = 0;
    for (std::size_t k = 1; k <= pool.k_max(); ++k) {
      if (pool.stats(start_index, k).count > 0) longest = k;
    }
    targets.assign(pool.k_max(), 0);
    targets[std::max<std::size_t>(longest, 1) - 1] = node_budget;
  }
  return targets;
}

std::vector<std::size_t> reallocate_fresh_runs(std::span<const std::size_t> targets) {
  std::vector<std::size_t> fresh(targets.size(), 0);
  std::size_t above = 0;
  for (std::size_t k = targets.size(); k-- > 0;) {
    fresh[k] = targets[k] > above ? targets[k] - above : 0;
    above += fresh[k];
  }
  return fresh;
}

void NodeWeights::blend(const std::unordered_map<NodeId, double>& target, double w) {
  const double keep = 1.0 - w;
  for (auto& [node, value] : explicit_) {
    const auto it = target.find(node);
    value = keep * value + (it == target.end() ? 0.0 : w * it->second);
  }
  for (const auto& [node, value] : target) {
    if (!explicit_.contains(node)) explicit_.emplace(node, keep * base_ + w * value);
  }
  base_ *= keep;
}

CeUpdate ce_update(std::span<const ScoredSample> samples, double rho, double gamma_prev,
                   double smoothing, const NodeWeights& prev) {
  if (samples.empty()) return {prev, gamma_prev, false};

  std::vector<double> utilities(samples.size());
  std::transform(samples.begin(), samples.end(), utilities.begin(),
                 [](const ScoredSample& s) { return s.utility; });
  std::sort(utilities.begin(), utilities.end(), std::greater<>());
  auto rank = static_cast<std::size_t>(std::ceil(rho * static_cast<double>(samples.size())));
  rank = std::clamp<std::size_t>(rank, 1, samples.size());
  const double gamma = std::max(gamma_prev, utilities[rank - 1]);

  std::unordered_map<NodeId, double> frequency;
  std::size_t elite = 0;
  for (const ScoredSample& s : samples) {
    if (s.utility < gamma) continue;
    ++elite;
    for (NodeId j : s.members) frequency[j] += 1.0;
  }
  if (elite == 0) return {prev, gamma_prev, false};
  for (auto& [node, count] : frequency) count /= static_cast<double>(elite);

  CeUpdate out{prev, gamma, true};
  out.weights.blend(frequency, smoothing);
  return out;
}

RunRecord expand_run(const SocialGraph& g, const CostFunction& cost, const UtilityParams& params,
                     NodeId start, std::size_t length, std::span<const NodeWeights> weights_by_size,
                     Rng& rng, Expansion& scratch, bool verify) {
  RunRecord run;
  run.order.reserve(length);
  run.utilities.reserve(length);

  scratch.reset(start);
  run.order.push_back(start);
  run.utilities.push_back(scratch.preference() - params.beta * cost(1));

  std::vector<double> weights;
  for (std::size_t k = 1; k < length && !scratch.frontier().empty(); ++k) {
    const NodeWeights& table = weights_by_size[k - 1];
    const auto frontier = scratch.frontier();
    weights.resize(frontier.size());
    for (std::size_t p = 0; p < frontier.size(); ++p) weights[p] = table[frontier[p]];

    if (verify) {
      const auto dist = selection_distribution(weights);
      const double total = std::accumulate(dist.begin(), dist.end(), 0.0);
      if (std::abs(total - 1.0) > 1e-12) {
        throw InvariantViolation("frontier distribution sums to " + std::to_string(total));
      }
    }

    const std::size_t pick = weighted_pick(weights, rng);
    run.order.push_back(frontier[pick]);
    scratch.add(pick);
    run.utilities.push_back(scratch.preference() - params.beta * cost(k + 1));
  }
  return run;
}

namespace {

struct RunTask {
  std::uint32_t start_index;
  std::uint32_t length;
  std::uint64_t seed;
};

void check(bool ok, const std::string& what) {
  if (!ok) throw InvariantViolation(what);
}

void verify_pool(const SocialGraph& g, const SamplePool& pool, std::span<const NodeId> starts) {
  std::vector<RangeStats> recomputed(pool.start_count() * pool.k_max());
  for (const RunRecord& run : pool.runs()) {
    check(!run.order.empty() && run.order.front() == starts[run.start_index],
          "run does not begin at its start node");
    for (std::size_t k = 1; k <= run.length(); ++k) {
      check(is_connected(g, run.prefix(k)), "stored prefix is not connected");
      recomputed[run.start_index * pool.k_max() + (k - 1)].add(run.utilities[k - 1]);
    }
  }
  for (std::size_t i = 0; i < pool.start_count(); ++i) {
    for (std::size_t k = 1; k <= pool.k_max(); ++k) {
      const RangeStats& a = pool.stats(i, k);
      const RangeStats& b = recomputed[i * pool.k_max() + (k - 1)];
      check(a.count == b.count && (a.count == 0 || (a.min == b.min && a.max == b.max)),
            "pool min/max disagree with recorded samples");
      check(a.count == 0 || a.min <= a.max, "pool min exceeds max");
    }
  }
}

}  // namespace

BargsResult solve(const SocialGraph& g, const CostFunction& cost, const UtilityParams& params,
                  const BargsConfig& cfg) {
  const auto clock_start = std::chrono::steady_clock::now();
  if (g.empty()) throw InvalidInput("graph is empty");
  params.validate(g, cost);
  cfg.validate();

  const std::size_t k_max = params.k_max;
  const std::size_t m = resolve_start_count(g.node_count(), k_max, cfg.start_nodes, cfg.total_budget);
  const bool verify = cfg.verify_invariants;

  BargsResult result;
  result.start_nodes = select_start_nodes(g, m, params.lambda);
  result.sizing = compute_stage_plan(cfg.total_budget, m, cfg.p_cs, cfg.alpha);
  result.pool = SamplePool(m, k_max);
  SamplePool& pool = result.pool;

  std::vector<std::vector<NodeWeights>> weights(
      m, std::vector<NodeWeights>(k_max, NodeWeights(cfg.initial_weight)));
  std::vector<std::vector<double>> gamma(
      m, std::vector<double>(k_max, -std::numeric_limits<double>::infinity()));
  std::vector<bool> active(m, true);

  const unsigned workers = std::max(cfg.threads, 1u);
  std::vector<std::optional<Expansion>> scratch(workers);

  double best_utility = -std::numeric_limits<double>::infinity();
  std::vector<NodeId> best_members;

  for (std::size_t t = 1; t <= result.sizing.stage_count; ++t) {
    StageRecord rec;
    rec.stage = t;
    rec.stage_budget = result.sizing.stage_budget;
    rec.size_targets.assign(m, std::vector<std::size_t>(k_max, 0));
    rec.fresh_runs.assign(m, std::vector<std::size_t>(k_max, 0));

    if (t == 1) {
      rec.node_budgets = split_budget(std::vector<double>(m, 1.0), rec.stage_budget);
      for (std::size_t i = 0; i < m; ++i) {
        rec.size_targets[i][k_max - 1] = rec.node_budgets[i];
        rec.fresh_runs[i] = reallocate_fresh_runs(rec.size_targets[i]);
      }
    } else {
      const std::vector<bool> was_active = active;
      NodeAllocation alloc = allocate_node_budgets(pool, active, rec.stage_budget);
      rec.incumbent = alloc.incumbent;
      rec.node_scores = std::move(alloc.scores);
      rec.node_budgets = std::move(alloc.budgets);
      if (alloc.degenerate_incumbent) ++result.degenerate_incumbents;
      for (std::size_t i = 0; i < m; ++i) {
        if (rec.node_budgets[i] == 0) active[i] = false;
        if (verify) check(was_active[i] || !active[i], "pruned start node reappeared");
        if (!active[i]) continue;
        rec.size_targets[i] = allocate_size_budgets(pool, i, rec.node_budgets[i], alloc.incumbent);
        rec.fresh_runs[i] = reallocate_fresh_runs(rec.size_targets[i]);
      }
    }

    if (verify) {
      check(std::accumulate(rec.node_budgets.begin(), rec.node_budgets.end(), std::size_t{0}) ==
                rec.stage_budget,
            "stage node budgets do not sum to the stage budget");
      for (std::size_t i = 0; i < m; ++i) {
        check(std::accumulate(rec.size_targets[i].begin(), rec.size_targets[i].end(),
                              std::size_t{0}) == rec.node_budgets[i],
              "size targets do not sum to the node budget");
      }
    }

    // Task order (start index, size descending, run) fixes the merge order.
    std::vector<RunTask> tasks;
    for (std::size_t i = 0; i < m; ++i) {
      std::uint64_t q = 0;
      for (std::size_t k = k_max; k >= 1; --k) {
        for (std::size_t c = 0; c < rec.fresh_runs[i][k - 1]; ++c, ++q) {
          tasks.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(k),
                           derive_seed(cfg.seed, {t, i, q})});
        }
      }
    }

    std::vector<RunRecord> runs(tasks.size());
    parallel_for(tasks.size(), workers, [&](std::size_t idx, unsigned worker) {
      if (!scratch[worker]) scratch[worker].emplace(g, params.lambda);
      const RunTask& task = tasks[idx];
      Rng rng(task.seed);
      runs[idx] = expand_run(g, cost, params, result.start_nodes[task.start_index], task.length,
                             weights[task.start_index], rng, *scratch[worker], verify);
      runs[idx].start_index = task.start_index;
      runs[idx].stage = static_cast<std::uint32_t>(t);
    });

    const std::size_t first_run = pool.runs().size();
    for (RunRecord& run : runs) {
      for (std::size_t k = 1; k <= run.length(); ++k) {
        if (run.utilities[k - 1] > best_utility) {
          best_utility = run.utilities[k - 1];
          best_members.assign(run.order.begin(), run.order.begin() + static_cast<std::ptrdiff_t>(k));
        }
      }
      pool.record(std::move(run));
    }
    const auto stage_runs = pool.runs().subspan(first_run);
    rec.runs_executed = stage_runs.size();

    rec.realized.assign(m, std::vector<std::size_t>(k_max, 0));
    std::vector<std::vector<const RunRecord*>> by_start(m);
    for (const RunRecord& run : stage_runs) {
      by_start[run.start_index].push_back(&run);
      for (std::size_t k = 1; k <= run.length(); ++k) ++rec.realized[run.start_index][k - 1];
    }

    if (verify) {
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 1; k <= k_max; ++k) {
          // Sizes beyond the start's component can never be realized.
          const bool reachable = std::any_of(by_start[i].begin(), by_start[i].end(),
                                             [k](const RunRecord* r) { return r->length() >= k; });
          check(!reachable || rec.realized[i][k - 1] >= rec.size_targets[i][k - 1],
                "realized samples fall short of the size target");
        }
      }
      verify_pool(g, pool, result.start_nodes);
    }

    std::vector<ScoredSample> samples;
    for (std::size_t i = 0; i < m; ++i) {
      if (!active[i]) continue;
      for (std::size_t k = 1; k <= k_max; ++k) {
        samples.clear();
        for (const RunRecord* run : by_start[i]) {
          if (run->length() >= k) samples.push_back({run->prefix(k), run->utilities[k - 1]});
        }
        if (samples.empty()) continue;
        CeUpdate upd = ce_update(samples, cfg.rho, gamma[i][k - 1], cfg.smoothing, weights[i][k - 1]);
        if (verify) check(upd.gamma >= gamma[i][k - 1], "elite threshold decreased");
        if (upd.updated) {
          weights[i][k - 1] = std::move(upd.weights);
          gamma[i][k - 1] = upd.gamma;
        }
      }
    }
    result.gamma_history.push_back(gamma);

    rec.best_utility = best_utility;
    if (verify && !result.best_trace.empty()) {
      check(best_utility >= result.best_trace.back(), "best-so-far utility decreased");
    }
    result.best_trace.push_back(best_utility);
    result.stages.push_back(std::move(rec));
  }

  result.best = evaluate_utility(g, cost, params, best_members);
  if (verify) check(result.best.connected, "returned group is not connected");
  result.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - clock_start).count();
  return result;
}

}  // namespace psga
