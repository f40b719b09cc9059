#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "chebdisc/chebtransform.hpp"
#include "chebdisc/construct.hpp"
#include "chebdisc/error.hpp"
#include "chebdisc/experiment.hpp"
#include "chebdisc/indexset.hpp"
#include "chebdisc/io.hpp"
#include "chebdisc/parallel.hpp"
#include "chebdisc/verify.hpp"

namespace {

using namespace chebdisc;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFailed = 2;

struct Global {
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string format = "csv";
};

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  return out;
}

std::ifstream read_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  return in;
}

// Writes to `path`, or stdout when it is empty or "-".
template <class Fn>
void emit(const std::string& path, Fn fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
  } else {
    auto out = open_or_throw(path);
    fn(out);
  }
}

struct GenOpts {
  std::string family = "l1";
  std::size_t d = 2;
  int n = 1;
  std::size_t active = 2;
  int max_degree = 1024;
  std::string out;
};

int run_gen(const Global& g, const GenOpts& o) {
  ExperimentSpec spec;
  spec.family = parse_family(o.family);
  spec.seed = g.seed;
  spec.active = o.active;
  spec.max_degree = o.max_degree;
  const IndexSet set = make_family_set(spec, o.d, o.n);
  emit(o.out, [&](std::ostream& out) {
    if (g.format == "json") {
      out << index_set_to_json(set).dump() << '\n';
    } else {
      write_index_set_text(out, set);
    }
  });
  std::cerr << "card " << set.size() << " mirror_card " << mirror_cardinality(set) << '\n';
  return kExitOk;
}

struct ConstructOpts {
  std::string set;
  std::string strategy = "halving";
  double r = 1.0;
  double c = 2.0;
  std::optional<int> L;
  std::optional<int> iter_cap;
  std::string threshold = "half";
  bool ring = false;
  bool compliant = false;
  std::string out;
  std::string nodes;
};

int run_construct(const Global& g, const ConstructOpts& o) {
  const IndexSet set = load_index_set(o.set);
  StrategyParams params;
  params.c = o.c;
  params.r = o.r;
  params.L = o.L;
  params.iter_cap = o.iter_cap;
  params.threshold = o.threshold == "theory" ? ThresholdRule::theory : ThresholdRule::half;
  params.seed = g.seed;
  params.ring = o.ring;
  params.theorem_compliant = o.compliant;
  const Strategy strategy = parse_strategy(o.strategy);
  const auto disc = construct(set, strategy, params);
  if (!o.out.empty()) save_discretization(o.out, disc);
  if (!o.nodes.empty()) {
    auto out = open_or_throw(o.nodes);
    write_nodes_csv(out, disc.nodes());
  }
  if (g.format == "json") {
    nlohmann::json j = {{"strategy", to_string(strategy)}, {"card", set.size()},
                        {"mirror_card", mirror_cardinality(set)}, {"node_count", disc.node_count},
                        {"rounds", disc.report.rounds.size()}, {"lattices", disc.lattices.size()},
                        {"success", disc.success}, {"seconds", disc.report.seconds}};
    std::cout << j.dump() << '\n';
  } else {
    std::cout << "strategy,card,mirror_card,node_count,rounds,success,seconds\n"
              << to_string(strategy) << ',' << set.size() << ',' << mirror_cardinality(set) << ','
              << disc.node_count << ',' << disc.report.rounds.size() << ',' << (disc.success ? 1 : 0) << ','
              << std::setprecision(4) << disc.report.seconds << '\n';
  }
  return disc.success ? kExitOk : kExitFailed;
}

MultiLatticeDiscretization load_disc(const std::string& disc_path, const std::string& set_path) {
  if (set_path.empty()) return load_discretization(disc_path);
  const IndexSet set = load_index_set(set_path);
  return load_discretization(disc_path, &set);
}

struct VerifyOpts {
  std::string disc;
  std::string set;
  bool iterative = false;
  std::string out;
};

int run_verify(const Global&, const VerifyOpts& o) {
  const auto disc = load_disc(o.disc, o.set);
  VerifyOptions opts;
  opts.iterative = o.iterative;
  const auto v = verify_rank(disc, opts);
  emit(o.out, [&](std::ostream& out) { out << verification_to_json(v).dump() << '\n'; });
  return v.full_rank ? kExitOk : kExitFailed;
}

struct EvaluateOpts {
  std::string disc;
  std::string set;
  std::string coeffs;
  std::string out;
};

int run_evaluate(const Global&, const EvaluateOpts& o) {
  const auto disc = load_disc(o.disc, o.set);
  auto in = read_or_throw(o.coeffs);
  const auto c = read_coefficients_csv(in, disc.index_set);
  const auto y = fast_evaluate(c, disc);
  emit(o.out, [&](std::ostream& out) { write_samples_csv(out, y); });
  return kExitOk;
}

struct ReconstructOpts {
  std::string disc;
  std::string set;
  std::string samples;
  std::string out;
  double tol = 1e-10;
  int max_iter = 0;
  bool jacobi = false;
};

int run_reconstruct(const Global&, const ReconstructOpts& o) {
  const auto disc = load_disc(o.disc, o.set);
  if (!disc.success) {
    std::cerr << "error: the discretization does not cover its index set\n";
    return kExitFailed;
  }
  auto in = read_or_throw(o.samples);
  const auto y = read_samples_csv(in, disc);
  CgOptions opts;
  opts.tol = o.tol;
  opts.max_iter = o.max_iter;
  opts.jacobi = o.jacobi;
  const auto result = reconstruct_cg(y, disc, opts);
  emit(o.out, [&](std::ostream& out) { write_coefficients_csv(out, disc.index_set, result.coefficients); });
  std::cerr << "iterations " << result.iterations << " residual " << result.residual << '\n';
  return kExitOk;
}

struct HarnessOpts {
  std::string set;
  std::string strategy = "plain";
  double r = 1.0;
  int trials = 50;
  bool iterative = false;
  std::string out;
};

int run_harness(const Global& g, const HarnessOpts& o) {
  const IndexSet set = load_index_set(o.set);
  StrategyParams params;
  params.r = o.r;
  params.seed = g.seed;
  VerifyOptions vopts;
  vopts.iterative = o.iterative;
  const auto h = failure_harness(set, parse_strategy(o.strategy), params, o.trials, vopts);
  emit(o.out, [&](std::ostream& out) {
    out << "trial,seed,success,full_rank,node_count,condition,seconds\n";
    for (std::size_t t = 0; t < h.trials.size(); ++t) {
      const auto& r = h.trials[t];
      out << t << ',' << r.seed << ',' << r.success << ',' << r.full_rank << ',' << r.node_count << ','
          << std::setprecision(6) << r.condition_number << ',' << r.seconds << '\n';
    }
    out << "# failures " << h.failures << " of " << h.trials.size() << " rate " << h.rate << " ci95 ["
        << h.ci_low << ", " << h.ci_high << "]\n";
  });
  for (std::size_t t = 0; t < h.trials.size(); ++t) {
    if (h.trials[t].failed()) {
      std::cerr << "trial " << t << " failed (success=" << h.trials[t].success
                << ", full_rank=" << h.trials[t].full_rank << ")\n";
    }
  }
  return kExitOk;
}

struct ExperimentOpts {
  std::string family = "l1";
  std::vector<std::size_t> dims;
  std::vector<int> params;
  std::vector<std::string> strategies{"plain", "greedy", "iterative", "halving"};
  double r = 1.0;
  int trials = 10;
  std::size_t active = 2;
  int max_degree = 1024;
  bool extended = false;
  bool no_condition = false;
  std::string out;
};

int run_experiment_cmd(const Global& g, const ExperimentOpts& o, bool figure) {
  ExperimentSpec spec;
  spec.family = parse_family(o.family);
  spec.dims = o.dims;
  spec.params = o.params;
  for (const auto& s : o.strategies) spec.strategies.push_back(parse_strategy(s));
  spec.r = o.r;
  spec.trials = o.trials;
  spec.seed = g.seed;
  spec.active = o.active;
  spec.max_degree = o.max_degree;
  spec.extended = o.extended;
  spec.condition = figure && !o.no_condition;
  const auto rows = run_experiment(spec, &std::cerr);
  emit(o.out, [&](std::ostream& out) {
    if (figure) {
      write_figure_csv(out, rows);
    } else {
      write_table_csv(out, rows);
    }
  });
  return kExitOk;
}

void add_experiment_options(CLI::App* cmd, ExperimentOpts& o) {
  cmd->add_option("--family", o.family, "l1 | hc | dhc | random")->required();
  cmd->add_option("--d", o.dims, "dimensions")->required();
  cmd->add_option("--n", o.params, "refinement n (or |I| for random)")->required();
  cmd->add_option("--strategies", o.strategies, "subset of plain greedy iterative halving");
  cmd->add_option("--r", o.r, "failure exponent");
  cmd->add_option("--trials", o.trials, "seeded runs per row");
  cmd->add_option("--active", o.active, "nonzeros per vector (random family)");
  cmd->add_option("--max-degree", o.max_degree, "largest entry (random family)");
  cmd->add_flag("--extended", o.extended, "allow rows above the desk budget");
  cmd->add_option("--out", o.out, "output CSV (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial discretizations for spans of multivariate Chebyshev polynomials"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads (0 = hardware)");
  app.add_option("--format", g.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

  GenOpts gen;
  auto* gen_cmd = app.add_subcommand("gen", "write an index set");
  gen_cmd->add_option("--family", gen.family, "l1 | hc | dhc | random")->required();
  gen_cmd->add_option("--d", gen.d, "dimension")->required();
  gen_cmd->add_option("--n", gen.n, "refinement n (or |I| for random)")->required();
  gen_cmd->add_option("--active", gen.active, "nonzeros per vector (random)");
  gen_cmd->add_option("--max-degree", gen.max_degree, "largest entry (random)");
  gen_cmd->add_option("--out", gen.out, "output file (default stdout)");

  ConstructOpts con;
  auto* con_cmd = app.add_subcommand("construct", "build a multiple lattice discretization");
  con_cmd->add_option("--set", con.set, "index set file")->required();
  con_cmd->add_option("--strategy", con.strategy, "plain | greedy | iterative | halving");
  con_cmd->add_option("--r", con.r, "failure exponent, delta = |I|^-r");
  con_cmd->add_option("--c", con.c, "oversampling constant");
  con_cmd->add_option("--L", con.L, "candidates per round");
  con_cmd->add_option("--iter-cap", con.iter_cap, "round limit");
  con_cmd->add_option("--threshold", con.threshold, "half | theory")->check(CLI::IsMember({"half", "theory"}));
  con_cmd->add_flag("--ring", con.ring, "use the refined covered sets");
  con_cmd->add_flag("--theorem-compliant", con.compliant, "reject L below the bound");
  con_cmd->add_option("--out", con.out, "discretization JSON");
  con_cmd->add_option("--nodes", con.nodes, "node CSV");

  VerifyOpts ver;
  auto* ver_cmd = app.add_subcommand("verify", "rank and condition of a discretization");
  ver_cmd->add_option("--disc", ver.disc, "discretization JSON")->required();
  ver_cmd->add_option("--set", ver.set, "index set (overrides the embedded one)");
  ver_cmd->add_flag("--iterative", ver.iterative, "Lanczos instead of dense SVD");
  ver_cmd->add_option("--out", ver.out, "output JSON (default stdout)");

  EvaluateOpts eva;
  auto* eva_cmd = app.add_subcommand("evaluate", "sample a polynomial on all lattice points");
  eva_cmd->add_option("--disc", eva.disc, "discretization JSON")->required();
  eva_cmd->add_option("--set", eva.set, "index set (overrides the embedded one)");
  eva_cmd->add_option("--coeffs", eva.coeffs, "coefficient CSV")->required();
  eva_cmd->add_option("--out", eva.out, "sample CSV (default stdout)");

  ReconstructOpts rec;
  auto* rec_cmd = app.add_subcommand("reconstruct", "least squares coefficients from samples");
  rec_cmd->add_option("--disc", rec.disc, "discretization JSON")->required();
  rec_cmd->add_option("--set", rec.set, "index set (overrides the embedded one)");
  rec_cmd->add_option("--samples", rec.samples, "sample CSV")->required();
  rec_cmd->add_option("--out", rec.out, "coefficient CSV (default stdout)");
  rec_cmd->add_option("--tol", rec.tol, "relative normal equation residual");
  rec_cmd->add_option("--max-iter", rec.max_iter, "iteration limit (0 = 4|I|)");
  rec_cmd->add_flag("--jacobi", rec.jacobi, "diagonal preconditioning");

  HarnessOpts har;
  auto* har_cmd = app.add_subcommand("harness", "empirical failure rate of a strategy");
  har_cmd->add_option("--set", har.set, "index set file")->required();
  har_cmd->add_option("--strategy", har.strategy, "plain | greedy | iterative | halving");
  har_cmd->add_option("--r", har.r, "failure exponent");
  har_cmd->add_option("--trials", har.trials, "number of trials");
  har_cmd->add_flag("--iterative", har.iterative, "iterative rank check");
  har_cmd->add_option("--out", har.out, "output CSV (default stdout)");

  ExperimentOpts tab;
  auto* tab_cmd = app.add_subcommand("table", "node counts per strategy (max over trials)");
  add_experiment_options(tab_cmd, tab);

  ExperimentOpts fig;
  auto* fig_cmd = app.add_subcommand("figure", "oversampling factors and condition numbers");
  add_experiment_options(fig_cmd, fig);
  fig_cmd->add_flag("--no-condition", fig.no_condition, "skip condition numbers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (g.threads > 0) set_thread_count(g.threads);
    if (*gen_cmd) return run_gen(g, gen);
    if (*con_cmd) return run_construct(g, con);
    if (*ver_cmd) return run_verify(g, ver);
    if (*eva_cmd) return run_evaluate(g, eva);
    if (*rec_cmd) return run_reconstruct(g, rec);
    if (*har_cmd) return run_harness(g, har);
    if (*tab_cmd) return run_experiment_cmd(g, tab, false);
    if (*fig_cmd) return run_experiment_cmd(g, fig, true);
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailed;
  }
  return kExitUsage;
}
