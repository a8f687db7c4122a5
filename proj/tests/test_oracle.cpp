#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "psga/error.hpp"
#include "psga/oracle.hpp"

using namespace psga;

namespace {

std::vector<std::vector<NodeId>> collect(const SocialGraph& g, std::size_t k_max) {
  std::vector<std::vector<NodeId>> sets;
  enumerate_connected(g, k_max, [&](std::span<const NodeId> s) {
    std::vector<NodeId> v(s.begin(), s.end());
    std::sort(v.begin(), v.end());
    sets.push_back(std::move(v));
  });
  return sets;
}

SocialGraph random_graph(std::mt19937_64& rng, std::size_t n, unsigned sparsity) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (rng() % sparsity == 0) edges.push_back({u, v, 1.0});
    }
  }
  return SocialGraph(std::vector<double>(n, 0.0), edges);
}

}  // namespace

TEST_CASE("enumeration of a three-node path") {
  const auto sets = collect(fixtures::path3(), 3);
  const std::set<std::vector<NodeId>> got(sets.begin(), sets.end());
  const std::set<std::vector<NodeId>> expected{{0}, {1}, {2}, {0, 1}, {1, 2}, {0, 1, 2}};
  CHECK(sets.size() == 6);
  CHECK(got == expected);
}

TEST_CASE("enumeration of trivial and complete graphs") {
  const std::vector<Edge> none;
  const SocialGraph single({1.0}, none);
  CHECK(enumerate_connected(single, 1, [](std::span<const NodeId>) {}) == 1);

  std::vector<Edge> k4;
  for (NodeId u = 0; u < 4; ++u) {
    for (NodeId v = u + 1; v < 4; ++v) k4.push_back({u, v, 1.0});
  }
  const SocialGraph complete({0, 0, 0, 0}, k4);
  CHECK(enumerate_connected(complete, 4, [](std::span<const NodeId>) {}) == 15);
  CHECK(enumerate_connected(complete, 2, [](std::span<const NodeId>) {}) == 10);
}

TEST_CASE("enumeration is duplicate-free and complete against a bitmask filter") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 15;
    const SocialGraph g = random_graph(rng, n, 2 + static_cast<unsigned>(rng() % 4));
    const std::size_t k_max = 1 + rng() % n;

    const auto sets = collect(g, k_max);
    std::set<std::uint32_t> masks;
    for (const auto& s : sets) {
      CHECK(s.size() <= k_max);
      std::uint32_t mask = 0;
      for (NodeId v : s) mask |= 1U << v;
      CHECK(fixtures::mask_connected(g, mask));
      masks.insert(mask);
    }
    CHECK(masks.size() == sets.size());

    std::size_t reference = 0;
    for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) <= k_max && fixtures::mask_connected(g, mask)) {
        ++reference;
      }
    }
    CHECK(sets.size() == reference);
  }
}

TEST_CASE("enumeration cap raises a resource error") {
  std::vector<Edge> k6;
  for (NodeId u = 0; u < 6; ++u) {
    for (NodeId v = u + 1; v < 6; ++v) k6.push_back({u, v, 1.0});
  }
  const SocialGraph complete(std::vector<double>(6, 0.0), k6);
  CHECK_THROWS_AS(enumerate_connected(complete, 6, [](std::span<const NodeId>) {}, 62), ResourceError);
  CHECK(enumerate_connected(complete, 6, [](std::span<const NodeId>) {}, 63) == 63);
  CHECK_THROWS_AS(exact_solve(complete, CostFunction::zero(6), {1, 1, 6}, 10), ResourceError);
}

TEST_CASE("exact optimum on the path graph") {
  const OracleResult r = exact_solve(fixtures::path3(), CostFunction::zero(3), {1.0, 1.0, 3});
  CHECK(r.best.members == std::vector<NodeId>{0, 1, 2});
  CHECK(r.best.utility == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(r.sets_enumerated == 6);
  REQUIRE(r.per_size_best.size() == 3);
  CHECK(r.per_size_best.at(1) == doctest::Approx(0.5));
  CHECK(r.per_size_best.at(2) == doctest::Approx(1.0));
  CHECK(r.per_size_best.at(3) == doctest::Approx(1.5));
}

TEST_CASE("exact optimum breaks ties by size then lexicographic order") {
  std::vector<Edge> edges{{0, 1, 0.0}, {1, 2, 0.0}, {2, 3, 0.0}};
  const SocialGraph flat({0, 0, 0, 0}, edges);
  const OracleResult r = exact_solve(flat, CostFunction::zero(4), {0.0, 1.0, 4});
  CHECK(r.best.members == std::vector<NodeId>{0});
  CHECK(r.best.utility == 0.0);

  // Two equal-utility pairs: {1,2} and {0,3}; {0,3} is lexicographically smaller.
  std::vector<Edge> e2{{0, 3, 0.0}, {1, 2, 0.0}, {0, 1, -5.0}};
  const SocialGraph pairs({1, 1, 1, 1}, e2);
  const OracleResult p = exact_solve(pairs, CostFunction::zero(2), {0.0, 1.0, 2});
  CHECK(p.best.members == std::vector<NodeId>{0, 3});
}

TEST_CASE("exact optimum on the six-node illustrative network") {
  const OracleResult r = exact_solve(fixtures::example_graph(), fixtures::example_cost(),
                                     {fixtures::kExampleBeta, 1.0, 6});
  CHECK(r.best.utility == doctest::Approx(1.6).epsilon(1e-12));
  CHECK(r.best.members == std::vector<NodeId>{0, 1, 3});
  CHECK(r.best.connected);
}

TEST_CASE("exact optimum agrees with brute force and dominates every connected set") {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const auto inst = fixtures::random_instance(seed);
    const UtilityParams up{inst.beta, inst.lambda, inst.k_max};
    const OracleResult r = exact_solve(inst.graph, inst.cost, up);
    const auto bf = fixtures::brute_force(inst.graph, inst.cost, inst.beta, inst.lambda, inst.k_max);

    CHECK(r.best.utility == doctest::Approx(bf.best).epsilon(1e-12).scale(1.0));
    CHECK(r.sets_enumerated == bf.connected_sets);
    CHECK(r.best.connected);
    CHECK(r.best.size() <= inst.k_max);

    double max_per_size = -std::numeric_limits<double>::infinity();
    for (const auto& [k, u] : r.per_size_best) max_per_size = std::max(max_per_size, u);
    CHECK(r.best.utility == max_per_size);
    for (std::size_t k = 1; k <= inst.k_max; ++k) CHECK(r.per_size_best.count(k) == 1);
  }
}
