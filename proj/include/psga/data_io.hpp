#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "psga/graph.hpp"

namespace psga {

/// A graph read from disk together with the original id of every dense node.
struct LoadedGraph {
  SocialGraph graph;
  std::vector<std::string> ids;  // ids[dense] = id as written in the node file
};

/// Node file: `id<TAB>interest` per line. Edge file: `u<TAB>v<TAB>tightness`.
/// Blank lines and lines starting with '#' are skipped. Ids are arbitrary
/// tokens, remapped to 0..n-1 in first-seen order. Throws ParseError on
/// malformed lines, repeated node ids, dangling endpoints, self-loops and
/// duplicate edges (in either orientation).
LoadedGraph load_graph(const std::filesystem::path& nodes, const std::filesystem::path& edges);

/// Inverse of load_graph. With empty `ids`, node i is written as "i".
void write_graph(const SocialGraph& g, const std::vector<std::string>& ids,
                 const std::filesystem::path& nodes, const std::filesystem::path& edges);

/// Cost file: `k_lo k_hi intercept slope` per line, segments in order.
CostFunction load_cost(const std::filesystem::path& path);
void write_cost(const CostFunction& cost, const std::filesystem::path& path);

enum class EdgeModel { random, preferential };

struct SynthConfig {
  std::size_t n = 1000;
  EdgeModel model = EdgeModel::random;
  double mean_degree = 10.0;    // random model: G(n, M) with M = round(n d / 2)
  std::size_t attachment = 5;   // preferential model: edges added per new node
  double interest_exponent = 2.5;
  double interest_scale = 1.0;  // interests land in (0, scale]
  double negative_prob = 0.0;   // chance an edge's tightness is negated
  std::uint64_t seed = 1;
};

/// Synthetic instance. Interests follow a discrete power law
/// P(x) ~ x^-exponent on 1..n, rescaled by scale / max drawn value. The
/// tightness of edge (i, j) is its common-neighbor count over the largest
/// common-neighbor count of any edge (all 0 when the graph has no
/// triangles), negated with probability negative_prob. Bit-identical for equal
/// configs.
SocialGraph gen_synthetic(const SynthConfig& cfg);

struct ResultRow {
  std::string algorithm;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t k_max = 0;
  std::size_t budget = 0;
  std::uint64_t seed = 0;
  std::size_t best_size = 0;
  double utility = 0.0;
  double preference = 0.0;
  double cost = 0.0;
  double wall_ms = 0.0;
  unsigned threads = 1;
  std::string members;  // space-separated original ids
};

/// The CSV header line, without a trailing newline.
std::string result_header();
std::string format_row(const ResultRow& row);

/// Writes rows as CSV. In append mode the header is written only when the file
/// is missing or empty. Throws InvalidInput on an empty row list and Error on
/// IO failure.
void write_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path,
                   bool append = false);
std::vector<ResultRow> read_results(const std::filesystem::path& path);

}  // namespace psga
