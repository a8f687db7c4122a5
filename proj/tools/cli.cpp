#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "psga/baselines.hpp"
#include "psga/bargs.hpp"
#include "psga/bounds.hpp"
#include "psga/data_io.hpp"
#include "psga/error.hpp"
#include "psga/oracle.hpp"
#include "psga/random.hpp"

namespace psga::cli {
namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

struct UtilityFlags {
  std::string cost_path;
  double beta = 1.0;
  double lambda = 1.0;
  std::size_t k_max = 0;

  void attach(CLI::App* app) {
    app->add_option("--cost", cost_path, "Cost file (default: built-in Duke table)");
    app->add_option("--beta", beta, "Cost weight")->capture_default_str();
    app->add_option("--lambda", lambda, "Tightness weight")->capture_default_str();
    app->add_option("--kmax", k_max, "Group size limit")->required();
  }
  CostFunction cost() const {
    return cost_path.empty() ? CostFunction::duke_energy() : load_cost(cost_path);
  }
  UtilityParams params() const { return {beta, lambda, k_max}; }
};

struct SolverFlags {
  std::size_t budget = 1000;
  std::size_t m = 0;
  double alpha = 0.99;
  double rho = 0.3;
  double pcs = 0.7;
  double smooth = 0.7;
  std::uint64_t seed = 1;
  unsigned threads = 1;

  void attach(CLI::App* app) {
    app->add_option("--budget", budget, "Total runs T")->capture_default_str();
    app->add_option("--m", m, "Start nodes (0: ceil(n/kmax))")->capture_default_str();
    app->add_option("--alpha", alpha, "Closeness ratio")->capture_default_str();
    app->add_option("--rho", rho, "Elite quantile")->capture_default_str();
    app->add_option("--pcs", pcs, "Target correct-selection probability")->capture_default_str();
    app->add_option("--smooth", smooth, "Cross-entropy smoothing weight")->capture_default_str();
    app->add_option("--seed", seed, "Random seed")->capture_default_str();
    app->add_option("--threads", threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  }
  BargsConfig bargs() const {
    BargsConfig c;
    c.total_budget = budget;
    c.start_nodes = m;
    c.alpha = alpha;
    c.rho = rho;
    c.p_cs = pcs;
    c.smoothing = smooth;
    c.seed = seed;
    c.threads = threads;
    return c;
  }
  BaselineConfig baseline() const { return {budget, m, seed, threads}; }
};

std::string member_ids(const GroupSelection& sel, const std::vector<std::string>& ids) {
  std::string out;
  for (NodeId v : sel.members) {
    if (!out.empty()) out += ' ';
    out += ids.empty() ? std::to_string(v) : ids[v];
  }
  return out;
}

/// Runs one algorithm and packs the outcome as a result row.
ResultRow run_algorithm(const std::string& algo, const SocialGraph& g, const std::vector<std::string>& ids,
                        const CostFunction& cost, const UtilityParams& params, const SolverFlags& s,
                        GroupSelection* selection = nullptr) {
  ResultRow row;
  row.algorithm = algo;
  row.n = g.node_count();
  row.k_max = params.k_max;
  row.seed = s.seed;
  row.threads = s.threads;

  const auto t0 = std::chrono::steady_clock::now();
  GroupSelection sel;
  if (algo == "bargs") {
    sel = solve(g, cost, params, s.bargs()).best;
    row.m = resolve_start_count(g.node_count(), params.k_max, s.m, s.budget);
    row.budget = s.budget;
  } else if (algo == "rgreedy") {
    sel = rgreedy_solve(g, cost, params, s.baseline());
    row.m = resolve_start_count(g.node_count(), params.k_max, s.m, s.budget);
    row.budget = s.budget;
  } else if (algo == "dgreedy") {
    sel = dgreedy_solve(g, cost, params);
    row.m = 1;
    row.budget = 1;
  } else {
    throw InvalidInput("unknown algorithm `" + algo + "`");
  }
  row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  row.best_size = sel.size();
  row.utility = sel.utility;
  row.preference = sel.preference;
  row.cost = sel.cost;
  row.members = member_ids(sel, ids);
  if (selection) *selection = std::move(sel);
  return row;
}

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Participant selection for group activities: BARGS solver and baselines"};
  app.require_subcommand(1, 1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic instance");
  SynthConfig synth;
  std::string model = "random";
  std::string out_nodes, out_edges;
  gen->add_option("--n", synth.n, "Node count")->required();
  gen->add_option("--model", model, "Edge model")->check(CLI::IsMember({"random", "pa"}))->capture_default_str();
  gen->add_option("--degree", synth.mean_degree, "Mean degree (random model)")->capture_default_str();
  gen->add_option("--attach", synth.attachment, "Edges per new node (pa model)")->capture_default_str();
  gen->add_option("--exponent", synth.interest_exponent, "Interest power-law exponent")->capture_default_str();
  gen->add_option("--scale", synth.interest_scale, "Largest interest score")->capture_default_str();
  gen->add_option("--neg-prob", synth.negative_prob, "Negative edge probability")->capture_default_str();
  gen->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  gen->add_option("--out-nodes", out_nodes, "Node file to write")->required();
  gen->add_option("--out-edges", out_edges, "Edge file to write")->required();

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Run one solver on an instance");
  std::string algo, nodes_path, edges_path, results_path;
  UtilityFlags solve_util;
  SolverFlags solve_flags;
  solve_cmd->add_option("--algo", algo, "Algorithm")->required()->check(CLI::IsMember({"bargs", "dgreedy", "rgreedy"}));
  solve_cmd->add_option("--nodes", nodes_path, "Node file")->required();
  solve_cmd->add_option("--edges", edges_path, "Edge file")->required();
  solve_util.attach(solve_cmd);
  solve_flags.attach(solve_cmd);
  solve_cmd->add_option("--out", results_path, "Results CSV to append to");

  // exact
  auto* exact = app.add_subcommand("exact", "Exhaustive optimum (small instances)");
  UtilityFlags exact_util;
  std::size_t cap = kDefaultEnumerationCap;
  exact->add_option("--nodes", nodes_path, "Node file")->required();
  exact->add_option("--edges", edges_path, "Edge file")->required();
  exact_util.attach(exact);
  exact->add_option("--cap", cap, "Maximum sets to enumerate")->capture_default_str();

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Evaluate the closed-form performance bounds");
  std::size_t bound_m = 0, bound_kmax = 0, bound_budget = 0, bound_r = 0;
  double bound_alpha = 0.99;
  bounds->add_option("--m", bound_m, "Start nodes")->required();
  bounds->add_option("--kmax", bound_kmax, "Group size limit")->required();
  bounds->add_option("--budget", bound_budget, "Total budget T")->required();
  bounds->add_option("--r", bound_r, "Stage count")->required();
  bounds->add_option("--alpha", bound_alpha, "Closeness ratio")->capture_default_str();

  // bench
  auto* bench = app.add_subcommand("bench", "Sweep one parameter over synthetic instances");
  std::string sweep;
  std::vector<std::size_t> values;
  std::size_t repeats = 1;
  std::string algos = "bargs,rgreedy,dgreedy";
  SynthConfig bench_synth;
  bench_synth.n = 2000;
  bench_synth.model = EdgeModel::preferential;
  std::string bench_model = "pa";
  UtilityFlags bench_util;
  SolverFlags bench_flags;
  bench->add_option("--sweep", sweep, "Swept parameter")->required()->check(CLI::IsMember({"budget", "n", "m"}));
  bench->add_option("--values", values, "Values of the swept parameter")->required();
  bench->add_option("--repeats", repeats, "Repeats per configuration")->capture_default_str();
  bench->add_option("--algos", algos, "Comma-separated algorithms")->capture_default_str();
  bench->add_option("--n", bench_synth.n, "Node count when not swept")->capture_default_str();
  bench->add_option("--model", bench_model, "Edge model")->check(CLI::IsMember({"random", "pa"}))->capture_default_str();
  bench->add_option("--degree", bench_synth.mean_degree, "Mean degree (random model)")->capture_default_str();
  bench->add_option("--attach", bench_synth.attachment, "Edges per new node (pa model)")->capture_default_str();
  bench->add_option("--neg-prob", bench_synth.negative_prob, "Negative edge probability")->capture_default_str();
  bench->add_option("--scale", bench_synth.interest_scale, "Largest interest score")->capture_default_str();
  bench_util.attach(bench);
  bench_flags.attach(bench);
  bench->add_option("--out", results_path, "Results CSV to append to")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code;
  }

  try {
    if (gen->parsed()) {
      synth.model = model == "pa" ? EdgeModel::preferential : EdgeModel::random;
      const SocialGraph g = gen_synthetic(synth);
      write_graph(g, {}, out_nodes, out_edges);
      out << "wrote " << g.node_count() << " nodes and " << g.edge_count() << " edges\n";
      return 0;
    }

    if (solve_cmd->parsed()) {
      const LoadedGraph loaded = load_graph(nodes_path, edges_path);
      GroupSelection sel;
      const ResultRow row = run_algorithm(algo, loaded.graph, loaded.ids, solve_util.cost(),
                                          solve_util.params(), solve_flags, &sel);
      out << "algorithm: " << algo << '\n'
          << "members: {" << row.members << "}\n"
          << "size: " << row.best_size << '\n'
          << "utility: " << fmt(row.utility) << '\n'
          << "preference: " << fmt(row.preference) << '\n'
          << "cost: " << fmt(row.cost) << '\n';
      if (!results_path.empty()) write_results({row}, results_path, /*append=*/true);
      return 0;
    }

    if (exact->parsed()) {
      const LoadedGraph loaded = load_graph(nodes_path, edges_path);
      const OracleResult res = exact_solve(loaded.graph, exact_util.cost(), exact_util.params(), cap);
      out << "members: {" << member_ids(res.best, loaded.ids) << "}\n"
          << "size: " << res.best.size() << '\n'
          << "utility: " << fmt(res.best.utility) << '\n'
          << "sets_enumerated: " << res.sets_enumerated << '\n';
      for (const auto& [k, u] : res.per_size_best) out << "best_at_size " << k << ": " << fmt(u) << '\n';
      return 0;
    }

    if (bounds->parsed()) {
      const double selection = correct_selection_bound(bound_m, bound_kmax, bound_budget, bound_r, bound_alpha);
      const QualityBound quality = expected_quality_bound(bound_m, bound_kmax, bound_budget, bound_r);
      out << "correct_selection_bound: " << fmt(selection) << '\n'
          << "incumbent_samples: " << fmt(quality.incumbent_samples) << '\n'
          << "quality_ratio: " << fmt(quality.quality_ratio) << '\n';
      return 0;
    }

    if (bench->parsed()) {
      bench_synth.model = bench_model == "pa" ? EdgeModel::preferential : EdgeModel::random;
      std::vector<std::string> algo_list;
      for (std::stringstream ss(algos); ss.good();) {
        std::string a;
        std::getline(ss, a, ',');
        if (!a.empty()) algo_list.push_back(a);
      }
      const CostFunction cost = bench_util.cost();
      std::map<std::pair<std::size_t, std::string>, std::pair<double, std::size_t>> totals;

      for (std::size_t value : values) {
        for (std::size_t rep = 0; rep < repeats; ++rep) {
          SynthConfig sc = bench_synth;
          SolverFlags sf = bench_flags;
          if (sweep == "n") sc.n = value;
          if (sweep == "budget") sf.budget = value;
          if (sweep == "m") sf.m = value;
          sc.seed = derive_seed(bench_flags.seed, {rep, sweep == "n" ? value : 0});
          sf.seed = derive_seed(bench_flags.seed, {rep, 1});
          const SocialGraph g = gen_synthetic(sc);

          std::vector<ResultRow> rows;
          for (const std::string& a : algo_list) {
            rows.push_back(run_algorithm(a, g, {}, cost, bench_util.params(), sf));
            auto& [sum, count] = totals[{value, a}];
            sum += rows.back().utility;
            ++count;
          }
          write_results(rows, results_path, /*append=*/true);
        }
      }

      out << sweep << ",algorithm,mean_utility,runs\n";
      for (const auto& [key, agg] : totals) {
        out << key.first << ',' << key.second << ',' << fmt(agg.first / static_cast<double>(agg.second))
            << ',' << agg.second << '\n';
      }
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_command(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace psga::cli
