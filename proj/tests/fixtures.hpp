#pragma once

// Shared instances and independent reference computations for the unit tests.
// Nothing here calls into the solver code paths under test except the graph
// constructor.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "psga/graph.hpp"

namespace fixtures {

using psga::CostFunction;
using psga::CostSegment;
using psga::Edge;
using psga::NodeId;
using psga::SocialGraph;

// a - b - c with eta = (0.5, 0.2, 0.4), tau_ab = 0.3, tau_bc = 0.1.
inline SocialGraph path3() {
  const std::vector<Edge> edges{{0, 1, 0.3}, {1, 2, 0.1}};
  return SocialGraph({0.5, 0.2, 0.4}, edges);
}

// The six-node illustrative network, v1..v6 as ids 0..5. Interests, the edges
// named in the worked walkthrough and the cost table are as quoted there; the
// remaining tightness values are reconstructed so that every quoted total
// (greedy prefixes, start scores, sampled utilities) is reproduced.
inline SocialGraph example_graph() {
  const std::vector<Edge> edges{
      {0, 1, 0.7},  {1, 2, 0.9},  {1, 3, 0.6}, {1, 4, -0.6}, {4, 5, 0.5},
      {3, 5, 0.7},  {0, 3, 0.45}, {0, 4, 0.05}, {3, 4, -0.65}, {0, 2, -0.3},
  };
  return SocialGraph({0.6, 0.6, 0.1, 0.65, 0.7, 0.6}, edges);
}

// C(1..6) = 400, 300, 200, 350, 500, 650.
inline CostFunction example_cost() {
  return CostFunction({{1, 3, 500.0, -100.0}, {4, 6, -250.0, 150.0}});
}

inline constexpr double kExampleBeta = 0.01;

struct Instance {
  SocialGraph graph;
  CostFunction cost;
  double beta;
  double lambda;
  std::size_t k_max;
};

// Small connected instance: a random spanning tree plus extra edges, interests
// in [0, 1], tightness in [-0.5, 1], and a two-segment cost that falls by one
// per member and jumps upward at a random breakpoint. k_max >= 2.
inline Instance random_instance(std::uint64_t seed, std::size_t n_lo = 4, std::size_t n_hi = 12,
                                std::size_t k_hi = 6) {
  std::mt19937_64 rng(seed);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };

  const std::size_t n = pick(n_lo, n_hi);
  std::vector<double> eta(n);
  for (double& x : eta) x = uni(0.0, 1.0);

  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  std::vector<Edge> edges;
  auto connect = [&](std::size_t a, std::size_t b) {
    if (a == b || adj[a][b]) return;
    adj[a][b] = adj[b][a] = true;
    edges.push_back({static_cast<NodeId>(a), static_cast<NodeId>(b), uni(-0.5, 1.0)});
  };
  for (std::size_t v = 1; v < n; ++v) connect(v, pick(0, v - 1));
  const std::size_t extra = pick(0, n);
  for (std::size_t e = 0; e < extra; ++e) connect(pick(0, n - 1), pick(0, n - 1));

  const std::size_t k_max = std::min(n, pick(2, k_hi));
  const std::size_t brk = pick(1, k_max - 1);
  const double base = static_cast<double>(brk) + uni(0.5, 3.0);
  const double jump = uni(0.5, 3.0);
  const double upper = base + jump + static_cast<double>(k_max - brk);
  std::vector<CostSegment> segs{{1, brk, base, -1.0}, {brk + 1, k_max, upper, -1.0}};

  static constexpr double kBetas[] = {0.0, 0.5, 1.0};
  return {SocialGraph(std::move(eta), edges), CostFunction(std::move(segs)), kBetas[seed % 3],
          1.0, k_max};
}

// Union-find connectivity of the node subset encoded in `mask`.
inline bool mask_connected(const SocialGraph& g, std::uint32_t mask) {
  if (mask == 0) return true;
  std::vector<NodeId> parent(g.node_count());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](NodeId x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Edge& e : g.edges()) {
    if ((mask >> e.u & 1U) && (mask >> e.v & 1U)) parent[find(e.u)] = find(e.v);
  }
  NodeId root = std::numeric_limits<NodeId>::max();
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (!(mask >> v & 1U)) continue;
    if (root == std::numeric_limits<NodeId>::max()) root = find(v);
    else if (find(v) != root) return false;
  }
  return true;
}

// Utility of the subset in `mask`, computed from the edge list directly.
inline double mask_utility(const SocialGraph& g, const CostFunction& cost, double beta, double lambda,
                           std::uint32_t mask) {
  double u = 0.0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (mask >> v & 1U) u += g.interest(v);
  }
  for (const Edge& e : g.edges()) {
    if ((mask >> e.u & 1U) && (mask >> e.v & 1U)) u += lambda * e.tightness;
  }
  return u - beta * cost(static_cast<std::size_t>(std::popcount(mask)));
}

struct BruteForce {
  double best = -std::numeric_limits<double>::infinity();
  std::uint32_t best_mask = 0;
  std::size_t connected_sets = 0;
};

// Scans all 2^n subsets; n must be at most ~20.
inline BruteForce brute_force(const SocialGraph& g, const CostFunction& cost, double beta,
                              double lambda, std::size_t k_max) {
  BruteForce out;
  const std::uint32_t limit = 1U << g.node_count();
  for (std::uint32_t mask = 1; mask < limit; ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) > k_max) continue;
    if (!mask_connected(g, mask)) continue;
    ++out.connected_sets;
    const double u = mask_utility(g, cost, beta, lambda, mask);
    if (u > out.best) {
      out.best = u;
      out.best_mask = mask;
    }
  }
  return out;
}

inline std::vector<NodeId> mask_members(std::uint32_t mask) {
  std::vector<NodeId> out;
  for (NodeId v = 0; mask >> v; ++v) {
    if (mask >> v & 1U) out.push_back(v);
  }
  return out;
}

}  // namespace fixtures
