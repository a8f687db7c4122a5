#include "psga/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "psga/error.hpp"
#include "psga/random.hpp"

namespace psga {
namespace {

std::vector<std::string> tokens_of(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

bool skip_line(const std::string& line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string::npos || line[first] == '#';
}

template <typename T>
bool parse_number(const std::string& tok, T& out) {
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::trunc) {
  std::ofstream out(path, std::ios::out | mode);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  return fields;
}

}  // namespace

LoadedGraph load_graph(const std::filesystem::path& nodes, const std::filesystem::path& edges) {
  LoadedGraph out;
  std::unordered_map<std::string, NodeId> dense;
  std::vector<double> interest;

  {
    auto in = open_in(nodes);
    std::size_t lineno = 0;
    for (std::string line; std::getline(in, line);) {
      ++lineno;
      if (skip_line(line)) continue;
      const auto tok = tokens_of(line);
      double value = 0.0;
      if (tok.size() != 2 || !parse_number(tok[1], value)) {
        throw ParseError(nodes.string(), lineno, "expected `id<TAB>interest`");
      }
      if (!dense.emplace(tok[0], static_cast<NodeId>(interest.size())).second) {
        throw ParseError(nodes.string(), lineno, "node id `" + tok[0] + "` repeated");
      }
      out.ids.push_back(tok[0]);
      interest.push_back(value);
    }
  }

  std::vector<Edge> edge_list;
  std::unordered_set<std::uint64_t> seen;
  {
    auto in = open_in(edges);
    std::size_t lineno = 0;
    for (std::string line; std::getline(in, line);) {
      ++lineno;
      if (skip_line(line)) continue;
      const auto tok = tokens_of(line);
      double value = 0.0;
      if (tok.size() != 3 || !parse_number(tok[2], value)) {
        throw ParseError(edges.string(), lineno, "expected `u<TAB>v<TAB>tightness`");
      }
      const auto u = dense.find(tok[0]);
      const auto v = dense.find(tok[1]);
      if (u == dense.end() || v == dense.end()) {
        const std::string& missing = u == dense.end() ? tok[0] : tok[1];
        throw ParseError(edges.string(), lineno, "dangling endpoint `" + missing + "`");
      }
      if (u->second == v->second) {
        throw ParseError(edges.string(), lineno, "self-loop on `" + tok[0] + "`");
      }
      const auto lo = std::min(u->second, v->second);
      const auto hi = std::max(u->second, v->second);
      if (!seen.insert((std::uint64_t{lo} << 32) | hi).second) {
        throw ParseError(edges.string(), lineno,
                         "duplicate edge between `" + tok[0] + "` and `" + tok[1] + "`");
      }
      edge_list.push_back({u->second, v->second, value});
    }
  }

  out.graph = SocialGraph(std::move(interest), edge_list);
  return out;
}

void write_graph(const SocialGraph& g, const std::vector<std::string>& ids,
                 const std::filesystem::path& nodes, const std::filesystem::path& edges) {
  auto name = [&](NodeId i) { return ids.empty() ? std::to_string(i) : ids.at(i); };
  {
    auto out = open_out(nodes);
    out << "# id\tinterest\n";
    for (NodeId i = 0; i < g.node_count(); ++i) out << name(i) << '\t' << format_double(g.interest(i)) << '\n';
    if (!out) throw Error("failed writing " + nodes.string());
  }
  {
    auto out = open_out(edges);
    out << "# u\tv\ttightness\n";
    for (const Edge& e : g.edges()) {
      out << name(e.u) << '\t' << name(e.v) << '\t' << format_double(e.tightness) << '\n';
    }
    if (!out) throw Error("failed writing " + edges.string());
  }
}

CostFunction load_cost(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<CostSegment> segments;
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (skip_line(line)) continue;
    const auto tok = tokens_of(line);
    CostSegment s{};
    if (tok.size() != 4 || !parse_number(tok[0], s.k_lo) || !parse_number(tok[1], s.k_hi) ||
        !parse_number(tok[2], s.intercept) || !parse_number(tok[3], s.slope)) {
      throw ParseError(path.string(), lineno, "expected `k_lo k_hi intercept slope`");
    }
    segments.push_back(s);
  }
  return CostFunction(std::move(segments));
}

void write_cost(const CostFunction& cost, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "# k_lo k_hi intercept slope\n";
  for (const CostSegment& s : cost.segments()) {
    out << s.k_lo << ' ' << s.k_hi << ' ' << format_double(s.intercept) << ' '
        << format_double(s.slope) << '\n';
  }
}

SocialGraph gen_synthetic(const SynthConfig& cfg) {
  const std::size_t n = cfg.n;
  if (n < 2) throw InvalidInput("synthetic graphs need n >= 2");
  if (!(cfg.interest_scale > 0.0)) throw InvalidInput("interest scale must be positive");
  if (!(cfg.negative_prob >= 0.0 && cfg.negative_prob < 1.0)) {
    throw InvalidInput("negative edge probability must lie in [0, 1)");
  }

  // Interests: inverse-CDF draws from the truncated zeta distribution on 1..n.
  Rng interest_rng(derive_seed(cfg.seed, {1}));
  std::vector<double> cdf(n);
  double acc = 0.0;
  for (std::size_t x = 1; x <= n; ++x) {
    acc += std::pow(static_cast<double>(x), -cfg.interest_exponent);
    cdf[x - 1] = acc;
  }
  std::vector<double> raw(n);
  double top = 1.0;
  for (double& r : raw) {
    const double u = uniform01(interest_rng) * acc;
    const auto x = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin()) + 1;
    r = static_cast<double>(std::min(x, n));
    top = std::max(top, r);
  }
  std::vector<double> interest(n);
  for (std::size_t i = 0; i < n; ++i) interest[i] = cfg.interest_scale * raw[i] / top;

  Rng edge_rng(derive_seed(cfg.seed, {2}));
  std::vector<std::pair<NodeId, NodeId>> pairs;
  if (cfg.model == EdgeModel::random) {
    if (!(cfg.mean_degree >= 0.0)) throw InvalidInput("mean degree must be non-negative");
    const std::size_t max_edges = n * (n - 1) / 2;
    const auto target = std::min<std::size_t>(
        max_edges, static_cast<std::size_t>(std::llround(static_cast<double>(n) * cfg.mean_degree / 2.0)));
    if (2 * target > max_edges) {
      for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
      }
      for (std::size_t i = 0; i < target; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(uniform01(edge_rng) * static_cast<double>(pairs.size() - i));
        std::swap(pairs[i], pairs[j]);
      }
      pairs.resize(target);
    } else {
      std::unordered_set<std::uint64_t> taken;
      while (pairs.size() < target) {
        auto u = static_cast<NodeId>(edge_rng() % n);
        auto v = static_cast<NodeId>(edge_rng() % n);
        if (u == v) continue;
        if (u > v) std::swap(u, v);
        if (taken.insert((std::uint64_t{u} << 32) | v).second) pairs.emplace_back(u, v);
      }
    }
  } else {
    const std::size_t a = cfg.attachment;
    if (a < 1 || a >= n) throw InvalidInput("attachment must lie in [1, n)");
    std::vector<NodeId> endpoints;  // each node repeated once per incident edge
    for (NodeId u = 0; u <= a; ++u) {
      for (NodeId v = u + 1; v <= a; ++v) {
        pairs.emplace_back(u, v);
        endpoints.push_back(u);
        endpoints.push_back(v);
      }
    }
    std::vector<NodeId> chosen;
    for (auto v = static_cast<NodeId>(a + 1); v < n; ++v) {
      chosen.clear();
      while (chosen.size() < a) {
        const NodeId u = endpoints[edge_rng() % endpoints.size()];
        if (std::find(chosen.begin(), chosen.end(), u) == chosen.end()) chosen.push_back(u);
      }
      for (NodeId u : chosen) {
        pairs.emplace_back(u, v);
        endpoints.push_back(u);
        endpoints.push_back(v);
      }
    }
  }
  std::sort(pairs.begin(), pairs.end());

  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (auto [u, v] : pairs) edges.push_back({u, v, 0.0});
  const SocialGraph shape(std::vector<double>(n, 0.0), edges);

  std::size_t most = 0;
  std::vector<std::size_t> common(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto a = shape.neighbors(edges[e].u);
    const auto b = shape.neighbors(edges[e].v);
    std::size_t c = 0;
    for (auto i = a.begin(), j = b.begin(); i != a.end() && j != b.end();) {
      if (*i < *j) {
        ++i;
      } else if (*j < *i) {
        ++j;
      } else {
        ++c;
        ++i;
        ++j;
      }
    }
    common[e] = c;
    most = std::max(most, c);
  }

  Rng sign_rng(derive_seed(cfg.seed, {3}));
  for (std::size_t e = 0; e < edges.size(); ++e) {
    double t = most == 0 ? 0.0 : static_cast<double>(common[e]) / static_cast<double>(most);
    if (uniform01(sign_rng) < cfg.negative_prob) t = -t;
    edges[e].tightness = t;
  }
  return SocialGraph(std::move(interest), edges);
}

std::string result_header() {
  return "algorithm,n,m,k_max,T,seed,best_size,utility,preference,cost,wall_ms,threads,members";
}

std::string format_row(const ResultRow& r) {
  std::ostringstream out;
  out << csv_field(r.algorithm) << ',' << r.n << ',' << r.m << ',' << r.k_max << ',' << r.budget
      << ',' << r.seed << ',' << r.best_size << ',' << format_double(r.utility) << ','
      << format_double(r.preference) << ',' << format_double(r.cost) << ','
      << format_double(r.wall_ms) << ',' << r.threads << ',' << csv_field(r.members);
  return out.str();
}

void write_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path,
                   bool append) {
  if (rows.empty()) throw InvalidInput("no result rows to write");
  std::error_code ec;
  const bool need_header =
      !append || !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
  auto out = open_out(path, append ? std::ios::app : std::ios::trunc);
  if (need_header) out << result_header() << '\n';
  for (const ResultRow& r : rows) out << format_row(r) << '\n';
  out.flush();
  if (!out) throw Error("failed writing " + path.string());
}

std::vector<ResultRow> read_results(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<ResultRow> rows;
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (line.empty() || line == result_header()) continue;
    const auto f = split_csv(line);
    ResultRow r;
    const bool ok = f.size() == 13 && parse_number(f[1], r.n) && parse_number(f[2], r.m) &&
                    parse_number(f[3], r.k_max) && parse_number(f[4], r.budget) &&
                    parse_number(f[5], r.seed) && parse_number(f[6], r.best_size) &&
                    parse_number(f[7], r.utility) && parse_number(f[8], r.preference) &&
                    parse_number(f[9], r.cost) && parse_number(f[10], r.wall_ms) &&
                    parse_number(f[11], r.threads);
    if (!ok) throw ParseError(path.string(), lineno, "malformed result row");
    r.algorithm = f[0];
    r.members = f[12];
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace psga
