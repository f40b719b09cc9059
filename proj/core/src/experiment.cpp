#include "chebdisc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "chebdisc/error.hpp"
#include "chebdisc/rng.hpp"
#include "chebdisc/verify.hpp"

namespace chebdisc {

std::string_view to_string(Family f) noexcept {
  switch (f) {
    case Family::l1: return "l1";
    case Family::hc: return "hc";
    case Family::dhc: return "dhc";
    case Family::random: return "random";
  }
  return "l1";
}

Family parse_family(std::string_view name) {
  for (auto f : {Family::l1, Family::hc, Family::dhc, Family::random}) {
    if (name == to_string(f)) return f;
  }
  throw ArgumentError("unknown index set family '" + std::string(name) + "'");
}

IndexSet make_family_set(const ExperimentSpec& spec, std::size_t d, int n) {
  switch (spec.family) {
    case Family::l1: return make_l1_ball(d, n);
    case Family::hc: return make_hyperbolic_cross(d, n);
    case Family::dhc: return make_dyadic_hyperbolic_cross(d, n);
    case Family::random:
      if (n < 1) throw ArgumentError("random sets need a positive cardinality");
      return make_random_sparse(d, spec.active, static_cast<std::size_t>(n), spec.max_degree,
                                derive_seed(spec.seed, {d, static_cast<std::uint64_t>(n)}));
  }
  throw ArgumentError("unknown family");
}

std::uint64_t trial_seed(const ExperimentSpec& spec, std::size_t d, int n, Strategy s, int trial) {
  return derive_seed(spec.seed, {static_cast<std::uint64_t>(spec.family), d, static_cast<std::uint64_t>(n),
                                 static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(trial)});
}

std::vector<TableRow> run_experiment(const ExperimentSpec& spec, std::ostream* log) {
  if (spec.trials < 1) throw ArgumentError("trials must be positive");
  std::vector<TableRow> rows;
  for (std::size_t d : spec.dims) {
    for (int n : spec.params) {
      const IndexSet set = make_family_set(spec, d, n);
      const std::uint64_t mirror = mirror_cardinality(set);
      if (mirror > spec.mirror_budget && !spec.extended) {
        if (log) {
          *log << "skipping " << to_string(spec.family) << " d=" << d << " n=" << n << ": |M(I)| = " << mirror
               << " exceeds the budget (use --extended)\n";
        }
        continue;
      }
      for (Strategy s : spec.strategies) {
        TableRow row;
        row.family = spec.family;
        row.d = d;
        row.n = n;
        row.card = set.size();
        row.mirror = mirror;
        row.strategy = s;
        row.trials = spec.trials;
        row.condition = spec.condition ? 0.0 : std::numeric_limits<double>::quiet_NaN();
        std::vector<std::size_t> nodes;
        for (int t = 0; t < spec.trials; ++t) {
          StrategyParams params;
          params.r = spec.r;
          params.seed = trial_seed(spec, d, n, s, t);
          const auto disc = construct(set, s, params);
          nodes.push_back(disc.node_count);
          row.max_seconds = std::max(row.max_seconds, disc.report.seconds);
          if (!disc.success) continue;
          ++row.successes;
          if (spec.condition) {
            VerifyOptions opts;
            opts.iterative = disc.node_count * set.size() > opts.dense_cap;
            row.condition = std::max(row.condition, verify_rank(disc, opts).condition_number);
          }
        }
        std::sort(nodes.begin(), nodes.end());
        row.min_nodes = nodes.front();
        row.max_nodes = nodes.back();
        row.median_nodes = nodes[(nodes.size() - 1) / 2];
        row.oversampling = static_cast<double>(row.max_nodes) / static_cast<double>(row.card);
        row.mirror_ratio = static_cast<double>(row.max_nodes) / static_cast<double>(row.mirror);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

void write_table_csv(std::ostream& out, const std::vector<TableRow>& rows) {
  out << "# table v1\n"
      << "family,d,n,card,mirror_card,strategy,trials,successes,max_nodes,median_nodes,min_nodes,max_seconds\n";
  for (const auto& r : rows) {
    out << to_string(r.family) << ',' << r.d << ',' << r.n << ',' << r.card << ',' << r.mirror << ','
        << to_string(r.strategy) << ',' << r.trials << ',' << r.successes << ',' << r.max_nodes << ','
        << r.median_nodes << ',' << r.min_nodes << ',' << std::setprecision(4) << r.max_seconds << '\n';
  }
}

void write_figure_csv(std::ostream& out, const std::vector<TableRow>& rows) {
  out << "# figure v1\n"
      << "family,d,n,strategy,card,oversampling,mirror_ratio,condition\n";
  for (const auto& r : rows) {
    out << to_string(r.family) << ',' << r.d << ',' << r.n << ',' << to_string(r.strategy) << ',' << r.card << ','
        << std::setprecision(6) << r.oversampling << ',' << r.mirror_ratio << ',';
    if (std::isnan(r.condition)) {
      out << "nan";
    } else {
      out << r.condition;
    }
    out << '\n';
  }
}

}  // namespace chebdisc
