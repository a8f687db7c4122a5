#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "psga/data_io.hpp"
#include "psga/error.hpp"

using namespace psga;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("psga_io_" + std::to_string(std::random_device{}()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path file(const std::string& name) const { return path / name; }
};

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t parse_error_line(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("loading the path graph with arbitrary ids") {
  TempDir dir;
  write_text(dir.file("n.txt"), "# id\tinterest\nalice\t0.5\n\nbob\t0.2\ncarol\t0.4\n");
  write_text(dir.file("e.txt"), "alice\tbob\t0.3\nbob\tcarol\t0.1\n");
  const LoadedGraph lg = load_graph(dir.file("n.txt"), dir.file("e.txt"));
  CHECK(lg.graph.node_count() == 3);
  CHECK(lg.graph.edge_count() == 2);
  CHECK(lg.ids == std::vector<std::string>{"alice", "bob", "carol"});
  CHECK(lg.graph.interest(2) == 0.4);
  CHECK(*lg.graph.tightness(1, 2) == 0.1);
}

TEST_CASE("malformed graph files report the offending line") {
  TempDir dir;
  const auto nodes = dir.file("n.txt");
  const auto edges = dir.file("e.txt");
  write_text(nodes, "a\t1\nb\t2\nc\t3\n");

  write_text(edges, "a\tb\t0.5\na\tz\t0.1\n");
  CHECK(parse_error_line([&] { load_graph(nodes, edges); }) == 2);

  write_text(edges, "a\tb\t0.5\nb\ta\t0.1\n");
  CHECK(parse_error_line([&] { load_graph(nodes, edges); }) == 2);

  write_text(edges, "# header\na\ta\t0.5\n");
  CHECK(parse_error_line([&] { load_graph(nodes, edges); }) == 2);

  write_text(edges, "a\tb\n");
  CHECK(parse_error_line([&] { load_graph(nodes, edges); }) == 1);

  write_text(edges, "a\tb\tabc\n");
  CHECK(parse_error_line([&] { load_graph(nodes, edges); }) == 1);

  write_text(edges, "");
  write_text(nodes, "a\t1\nb\tx\n");
  CHECK(parse_error_line([&] { load_graph(nodes, edges); }) == 2);

  write_text(nodes, "a\t1\n\na\t2\n");
  CHECK(parse_error_line([&] { load_graph(nodes, edges); }) == 3);

  CHECK_THROWS_AS(load_graph(dir.file("missing.txt"), edges), Error);
}

TEST_CASE("graph files round-trip") {
  TempDir dir;
  const SocialGraph g = fixtures::example_graph();
  write_graph(g, {}, dir.file("n.txt"), dir.file("e.txt"));
  const LoadedGraph back = load_graph(dir.file("n.txt"), dir.file("e.txt"));
  REQUIRE(back.graph.node_count() == g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    CHECK(back.ids[v] == std::to_string(v));
    CHECK(back.graph.interest(v) == g.interest(v));
  }
  const auto a = g.edges();
  const auto b = back.graph.edges();
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].u == b[i].u);
    CHECK(a[i].v == b[i].v);
    CHECK(a[i].tightness == b[i].tightness);
  }

  SynthConfig sc;
  sc.n = 300;
  sc.negative_prob = 0.2;
  sc.seed = 9;
  const SocialGraph s = gen_synthetic(sc);
  std::vector<std::string> ids;
  for (NodeId v = 0; v < s.node_count(); ++v) ids.push_back("u" + std::to_string(1000 - v));
  write_graph(s, ids, dir.file("n2.txt"), dir.file("e2.txt"));
  const LoadedGraph s2 = load_graph(dir.file("n2.txt"), dir.file("e2.txt"));
  CHECK(s2.ids == ids);
  CHECK(s2.graph.edge_count() == s.edge_count());
  for (const Edge& e : s.edges()) CHECK(*s2.graph.tightness(e.u, e.v) == e.tightness);
}

TEST_CASE("cost files") {
  TempDir dir;
  write_text(dir.file("duke.txt"), "# k_lo k_hi intercept slope\n1 100 400 -1\n101 600 850 -1\n601 1750 2200 -1\n");
  const CostFunction duke = load_cost(dir.file("duke.txt"));
  CHECK(duke(100) == 300.0);
  CHECK(duke(101) == 749.0);
  CHECK(duke.max_size() == 1750);

  write_text(dir.file("zero.txt"), "1 10 0 0\n");
  const CostFunction zero = load_cost(dir.file("zero.txt"));
  for (std::size_t k = 1; k <= 10; ++k) CHECK(zero(k) == 0.0);

  write_text(dir.file("gap.txt"), "1 5 10 0\n7 9 10 0\n");
  try {
    load_cost(dir.file("gap.txt"));
    FAIL("expected a gap error");
  } catch (const InvalidInput& e) {
    CHECK(std::string(e.what()).find("k=6") != std::string::npos);
  }

  write_text(dir.file("neg.txt"), "1 10 5 -1\n");
  CHECK_THROWS_AS(load_cost(dir.file("neg.txt")), InvalidInput);

  write_text(dir.file("bad.txt"), "1 10 5\n");
  CHECK(parse_error_line([&] { load_cost(dir.file("bad.txt")); }) == 1);

  write_cost(duke, dir.file("out.txt"));
  const CostFunction again = load_cost(dir.file("out.txt"));
  for (std::size_t k = 1; k <= duke.max_size(); ++k) CHECK(again(k) == duke(k));
}

TEST_CASE("synthetic graphs are reproducible and well-formed") {
  for (EdgeModel model : {EdgeModel::random, EdgeModel::preferential}) {
    SynthConfig sc;
    sc.n = 1500;
    sc.model = model;
    sc.negative_prob = 0.3;
    sc.interest_scale = 2.0;
    sc.seed = 123;
    const SocialGraph a = gen_synthetic(sc);
    const SocialGraph b = gen_synthetic(sc);
    REQUIRE(a.node_count() == b.node_count());
    for (NodeId v = 0; v < a.node_count(); ++v) {
      CHECK(a.interest(v) == b.interest(v));
      CHECK(a.interest(v) > 0.0);
      CHECK(a.interest(v) <= 2.0);
    }
    const auto ea = a.edges();
    const auto eb = b.edges();
    REQUIRE(ea.size() == eb.size());
    bool any_negative = false;
    for (std::size_t i = 0; i < ea.size(); ++i) {
      CHECK(ea[i].u == eb[i].u);
      CHECK(ea[i].v == eb[i].v);
      CHECK(ea[i].tightness == eb[i].tightness);
      CHECK(ea[i].tightness >= -1.0);
      CHECK(ea[i].tightness <= 1.0);
      any_negative |= ea[i].tightness < 0.0;
    }
    CHECK(any_negative);

    const double mean_degree = 2.0 * static_cast<double>(a.edge_count()) / static_cast<double>(a.node_count());
    CHECK(mean_degree == doctest::Approx(10.0).epsilon(0.05));

    sc.seed = 124;
    const SocialGraph c = gen_synthetic(sc);
    bool differs = c.edge_count() != a.edge_count();
    for (NodeId v = 0; v < a.node_count() && !differs; ++v) differs = a.interest(v) != c.interest(v);
    CHECK(differs);
  }
}

TEST_CASE("tightness normalization and sign flips") {
  SynthConfig sc;
  sc.n = 4;
  sc.mean_degree = 3.0;  // forces K4
  sc.seed = 1;
  const SocialGraph k4 = gen_synthetic(sc);
  REQUIRE(k4.edge_count() == 6);
  for (const Edge& e : k4.edges()) CHECK(e.tightness == 1.0);

  sc.n = 800;
  sc.mean_degree = 12.0;
  sc.negative_prob = 0.0;
  const SocialGraph g = gen_synthetic(sc);
  double max_tau = 0.0;
  for (const Edge& e : g.edges()) {
    CHECK(e.tightness >= 0.0);
    max_tau = std::max(max_tau, e.tightness);

    // Independent common-neighbor count.
    std::size_t common = 0;
    for (NodeId w : g.neighbors(e.u)) {
      if (g.tightness(e.v, w)) ++common;
    }
    if (common == 0) CHECK(e.tightness == 0.0);
    else CHECK(e.tightness > 0.0);
  }
  CHECK(max_tau == 1.0);
}

TEST_CASE("interest scores follow the configured power law") {
  SynthConfig sc;
  sc.n = 10000;
  sc.interest_exponent = 2.5;
  sc.seed = 31;
  const SocialGraph g = gen_synthetic(sc);
  const auto eta = g.interests();
  const double unit = *std::min_element(eta.begin(), eta.end());
  std::map<long, std::size_t> hist;
  for (double x : eta) ++hist[std::lround(x / unit)];

  // Least-squares slope of log count against log value over well-populated values.
  double sx = 0, sy = 0, sxx = 0, sxy = 0, cnt = 0;
  for (const auto& [value, count] : hist) {
    if (count < 10) continue;
    const double lx = std::log(static_cast<double>(value));
    const double ly = std::log(static_cast<double>(count));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    cnt += 1;
  }
  REQUIRE(cnt >= 4);
  const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  CHECK(slope == doctest::Approx(-2.5).epsilon(0.3 / 2.5));
}

TEST_CASE("synthetic generator rejects bad configurations") {
  SynthConfig sc;
  sc.n = 1;
  CHECK_THROWS_AS(gen_synthetic(sc), InvalidInput);
  sc.n = 10;
  sc.negative_prob = 1.0;
  CHECK_THROWS_AS(gen_synthetic(sc), InvalidInput);
  sc.negative_prob = 0.0;
  sc.model = EdgeModel::preferential;
  sc.attachment = 10;
  CHECK_THROWS_AS(gen_synthetic(sc), InvalidInput);
}

TEST_CASE("result CSV") {
  TempDir dir;
  ResultRow row;
  row.algorithm = "bargs";
  row.n = 6;
  row.m = 2;
  row.k_max = 4;
  row.budget = 20;
  row.seed = 7;
  row.best_size = 3;
  row.preference = 3.6;
  row.cost = 2.0;
  row.utility = row.preference - row.cost;
  row.wall_ms = 1.25;
  row.threads = 4;
  row.members = "v1 v2 v4";

  const auto path = dir.file("r.csv");
  write_results({row}, path);
  const std::string text = read_text(path);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  CHECK(text.rfind(result_header() + "\n", 0) == 0);

  ResultRow second = row;
  second.algorithm = "rgreedy";
  second.members = "a,\"b\"";
  write_results({second}, path, /*append=*/true);
  const auto rows = read_results(path);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].algorithm == "bargs");
  CHECK(rows[0].utility == row.utility);
  CHECK(rows[0].preference == row.preference);
  CHECK(rows[0].wall_ms == row.wall_ms);
  CHECK(rows[0].members == "v1 v2 v4");
  CHECK(rows[1].members == "a,\"b\"");
  for (const ResultRow& r : rows) CHECK(std::abs(r.utility - (r.preference - r.cost)) <= 1e-9);

  // Append to a fresh file writes the header once.
  write_results({row}, dir.file("fresh.csv"), true);
  write_results({row}, dir.file("fresh.csv"), true);
  CHECK(read_results(dir.file("fresh.csv")).size() == 2);

  CHECK_THROWS_AS(write_results({}, path), InvalidInput);
  CHECK_THROWS_AS(write_results({row}, dir.path / "no" / "such" / "dir.csv"), Error);
}
