#include "psga/oracle.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "psga/error.hpp"

namespace psga {
namespace {

class Enumerator {
 public:
  Enumerator(const SocialGraph& g, std::size_t k_max, const SetVisitor& visit, std::size_t cap)
      : g_(g), k_max_(k_max), visit_(visit), cap_(cap), cover_(g.node_count(), 0) {}

  std::size_t run() {
    for (NodeId root = 0; root < g_.node_count(); ++root) {
      std::vector<NodeId> ext;
      for (NodeId u : g_.neighbors(root)) {
        if (u > root) ext.push_back(u);
      }
      members_.assign(1, root);
      cover(root, +1);
      extend(std::move(ext), root);
      cover(root, -1);
    }
    return count_;
  }

 private:
  // cover_[u] counts members equal or adjacent to u.
  void cover(NodeId v, int delta) {
    cover_[v] += delta;
    for (NodeId u : g_.neighbors(v)) cover_[u] += delta;
  }

  void extend(std::vector<NodeId> ext, NodeId root) {
    if (++count_ > cap_) {
      throw ResourceError("connected-set enumeration exceeded cap of " + std::to_string(cap_));
    }
    visit_(members_);
    if (members_.size() == k_max_) return;

    while (!ext.empty()) {
      const NodeId w = ext.back();
      ext.pop_back();

      std::vector<NodeId> next = ext;
      for (NodeId u : g_.neighbors(w)) {
        if (u > root && cover_[u] == 0) next.push_back(u);
      }
      members_.push_back(w);
      cover(w, +1);
      extend(std::move(next), root);
      cover(w, -1);
      members_.pop_back();
    }
  }

  const SocialGraph& g_;
  std::size_t k_max_;
  const SetVisitor& visit_;
  std::size_t cap_;
  std::vector<int> cover_;
  std::vector<NodeId> members_;
  std::size_t count_ = 0;
};

}  // namespace

std::size_t enumerate_connected(const SocialGraph& g, std::size_t k_max, const SetVisitor& visit,
                                std::size_t cap) {
  if (k_max < 1) throw InvalidInput("k_max must be at least 1");
  return Enumerator(g, k_max, visit, cap).run();
}

OracleResult exact_solve(const SocialGraph& g, const CostFunction& cost,
                         const UtilityParams& params, std::size_t cap) {
  if (g.empty()) throw InvalidInput("graph is empty");
  params.validate(g, cost);

  OracleResult result;
  bool have_best = false;
  std::vector<NodeId> sorted;

  result.sets_enumerated = enumerate_connected(
      g, params.k_max,
      [&](std::span<const NodeId> members) {
        sorted.assign(members.begin(), members.end());
        std::sort(sorted.begin(), sorted.end());
        const double pref = evaluate_preference(g, sorted, params.lambda);
        const double util = pref - params.beta * cost(sorted.size());

        auto [slot, inserted] = result.per_size_best.try_emplace(sorted.size(), util);
        if (!inserted) slot->second = std::max(slot->second, util);

        bool better = !have_best || util > result.best.utility;
        if (have_best && util == result.best.utility) {
          better = sorted.size() < result.best.size() ||
                   (sorted.size() == result.best.size() && sorted < result.best.members);
        }
        if (better) {
          have_best = true;
          result.best.members = sorted;
          result.best.utility = util;
        }
      },
      cap);

  result.best = evaluate_utility(g, cost, params, result.best.members);
  return result;
}

}  // namespace psga
