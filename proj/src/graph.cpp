#include "psga/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "psga/error.hpp"

namespace psga {

SocialGraph::SocialGraph(std::vector<double> interest, std::span<const Edge> edges)
    : interest_(std::move(interest)) {
  const std::size_t n = interest_.size();
  std::vector<std::size_t> degree(n, 0);
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n) {
      throw InvalidInput("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                         ") references a node outside 0.." + std::to_string(n));
    }
    if (e.u == e.v) {
      throw InvalidInput("self-loop on node " + std::to_string(e.u));
    }
    ++degree[e.u];
    ++degree[e.v];
  }

  offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + degree[i];

  std::vector<std::pair<NodeId, double>> slots(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const Edge& e : edges) {
    slots[fill[e.u]++] = {e.v, e.tightness};
    slots[fill[e.v]++] = {e.u, e.tightness};
  }

  neighbors_.resize(slots.size());
  tightness_.resize(slots.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto first = slots.begin() + static_cast<std::ptrdiff_t>(offsets_[i]);
    auto last = slots.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]);
    std::sort(first, last, [](const auto& a, const auto& b) { return a.first < b.first; });
    auto dup = std::adjacent_find(first, last,
                                  [](const auto& a, const auto& b) { return a.first == b.first; });
    if (dup != last) {
      throw InvalidInput("duplicate edge between " + std::to_string(i) + " and " +
                         std::to_string(dup->first));
    }
    for (auto it = first; it != last; ++it) {
      const auto pos = static_cast<std::size_t>(it - slots.begin());
      neighbors_[pos] = it->first;
      tightness_[pos] = it->second;
    }
  }
}

std::optional<double> SocialGraph::tightness(NodeId i, NodeId j) const {
  if (!contains(i) || !contains(j)) return std::nullopt;
  const auto row = neighbors(i);
  const auto it = std::lower_bound(row.begin(), row.end(), j);
  if (it == row.end() || *it != j) return std::nullopt;
  return tightness_row(i)[static_cast<std::size_t>(it - row.begin())];
}

std::vector<Edge> SocialGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeId u = 0; u < node_count(); ++u) {
    const auto row = neighbors(u);
    const auto weights = tightness_row(u);
    for (std::size_t p = 0; p < row.size(); ++p) {
      if (row[p] > u) out.push_back({u, row[p], weights[p]});
    }
  }
  return out;
}

CostFunction::CostFunction(std::vector<CostSegment> segments) : segments_(std::move(segments)) {
  if (segments_.empty()) throw InvalidInput("cost function needs at least one segment");
  std::size_t expected = 1;
  for (const CostSegment& s : segments_) {
    if (s.k_lo != expected) {
      if (s.k_lo > expected) {
        throw InvalidInput("cost segments leave a gap at k=" + std::to_string(expected));
      }
      throw InvalidInput("cost segments overlap at k=" + std::to_string(s.k_lo));
    }
    if (s.k_hi < s.k_lo) {
      throw InvalidInput("cost segment [" + std::to_string(s.k_lo) + ", " +
                         std::to_string(s.k_hi) + "] is empty");
    }
    if (!std::isfinite(s.intercept) || !std::isfinite(s.slope)) {
      throw InvalidInput("cost segment starting at k=" + std::to_string(s.k_lo) +
                         " has a non-finite coefficient");
    }
    // Linear on the segment, so the endpoints bound every integer size.
    for (std::size_t k : {s.k_lo, s.k_hi}) {
      if (s.at(k) < 0.0) throw InvalidInput("negative cost at k=" + std::to_string(k));
    }
    expected = s.k_hi + 1;
  }
}

CostFunction CostFunction::duke_energy() {
  return CostFunction({{1, 100, 400.0, -1.0}, {101, 600, 850.0, -1.0}, {601, 1750, 2200.0, -1.0}});
}

CostFunction CostFunction::zero(std::size_t max_size) {
  return CostFunction({{1, max_size, 0.0, 0.0}});
}

double CostFunction::operator()(std::size_t k) const {
  if (k == 0) return 0.0;
  if (k > max_size()) {
    throw DomainError("cost queried at k=" + std::to_string(k) + " beyond covered size " +
                      std::to_string(max_size()));
  }
  const auto it = std::partition_point(segments_.begin(), segments_.end(),
                                       [k](const CostSegment& s) { return s.k_hi < k; });
  return it->at(k);
}

void UtilityParams::validate(const SocialGraph& g, const CostFunction& cost) const {
  if (!(beta >= 0.0) || !(lambda >= 0.0)) throw InvalidInput("beta and lambda must be >= 0");
  if (k_max < 1) throw InvalidInput("k_max must be at least 1");
  if (k_max > g.node_count()) {
    throw InvalidInput("k_max=" + std::to_string(k_max) + " exceeds node count " +
                       std::to_string(g.node_count()));
  }
  if (k_max > cost.max_size()) {
    throw InvalidInput("k_max=" + std::to_string(k_max) + " exceeds cost domain " +
                       std::to_string(cost.max_size()));
  }
}

namespace {

std::vector<NodeId> sorted_checked(const SocialGraph& g, std::span<const NodeId> members) {
  std::vector<NodeId> sorted(members.begin(), members.end());
  std::sort(sorted.begin(), sorted.end());
  for (NodeId id : sorted) {
    if (!g.contains(id)) throw InvalidInput("unknown node id " + std::to_string(id));
  }
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidInput("member set repeats a node id");
  }
  return sorted;
}

double preference_of_sorted(const SocialGraph& g, std::span<const NodeId> sorted, double lambda) {
  double interest = 0.0;
  double tight = 0.0;
  for (NodeId i : sorted) {
    interest += g.interest(i);
    const auto row = g.neighbors(i);
    const auto weights = g.tightness_row(i);
    // Row is sorted, so neighbors above i start at upper_bound(i).
    for (auto it = std::upper_bound(row.begin(), row.end(), i); it != row.end(); ++it) {
      if (std::binary_search(sorted.begin(), sorted.end(), *it)) {
        tight += weights[static_cast<std::size_t>(it - row.begin())];
      }
    }
  }
  return interest + lambda * tight;
}

}  // namespace

double evaluate_preference(const SocialGraph& g, std::span<const NodeId> members, double lambda) {
  if (members.empty()) throw InvalidInput("member set is empty");
  const auto sorted = sorted_checked(g, members);
  return preference_of_sorted(g, sorted, lambda);
}

GroupSelection evaluate_utility(const SocialGraph& g, const CostFunction& cost,
                                const UtilityParams& params, std::span<const NodeId> members) {
  if (members.empty()) throw InvalidInput("member set is empty");
  if (members.size() > params.k_max) {
    throw InvalidInput("group of size " + std::to_string(members.size()) + " exceeds k_max=" +
                       std::to_string(params.k_max));
  }
  GroupSelection out;
  out.members = sorted_checked(g, members);
  out.preference = preference_of_sorted(g, out.members, params.lambda);
  out.cost = params.beta * cost(out.members.size());
  out.utility = out.preference - out.cost;
  out.connected = is_connected(g, out.members);
  return out;
}

bool is_connected(const SocialGraph& g, std::span<const NodeId> members) {
  if (members.empty()) return true;
  std::vector<NodeId> sorted(members.begin(), members.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::vector<bool> seen(sorted.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const NodeId u = sorted[stack.back()];
    stack.pop_back();
    for (NodeId v : g.neighbors(u)) {
      const auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
      if (it == sorted.end() || *it != v) continue;
      const auto pos = static_cast<std::size_t>(it - sorted.begin());
      if (!seen[pos]) {
        seen[pos] = true;
        ++reached;
        stack.push_back(pos);
      }
    }
  }
  return reached == sorted.size();
}

SocialGraph virtualize_connectivity(const SocialGraph& g) {
  const auto n = static_cast<NodeId>(g.node_count());
  std::vector<double> interest(g.interests().begin(), g.interests().end());
  interest.push_back(0.0);
  std::vector<Edge> edges = g.edges();
  edges.reserve(edges.size() + n);
  for (NodeId i = 0; i < n; ++i) edges.push_back({i, n, 0.0});
  return SocialGraph(std::move(interest), edges);
}

}  // namespace psga
