#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "chebdisc/construct.hpp"
#include "chebdisc/indexset.hpp"

namespace chebdisc {

enum class Family { l1, hc, dhc, random };
std::string_view to_string(Family f) noexcept;
Family parse_family(std::string_view name);

struct ExperimentSpec {
  Family family = Family::l1;
  std::vector<std::size_t> dims;
  /// n for l1/hc/dhc, |I| for random.
  std::vector<int> params;
  std::vector<Strategy> strategies;
  double r = 1.0;
  int trials = 10;
  std::uint64_t seed = 0;
  /// random family only
  std::size_t active = 2;
  int max_degree = 1024;
  /// Rows with |M(I)| above this are skipped unless `extended` is set.
  std::uint64_t mirror_budget = 200'000;
  bool extended = false;
  /// Also compute condition numbers (figure rows).
  bool condition = true;
};

/// The family set; random sets draw from derive_seed(seed, {d, count}).
IndexSet make_family_set(const ExperimentSpec& spec, std::size_t d, int n);

struct TableRow {
  Family family = Family::l1;
  std::size_t d = 0;
  int n = 0;
  std::size_t card = 0;
  std::uint64_t mirror = 0;
  Strategy strategy = Strategy::plain;
  int trials = 0;
  int successes = 0;
  std::size_t max_nodes = 0;
  std::size_t median_nodes = 0;
  std::size_t min_nodes = 0;
  double max_seconds = 0.0;
  /// max node count / |I| and / |M(I)|
  double oversampling = 0.0;
  double mirror_ratio = 0.0;
  /// Max condition number over successful trials; NaN when not computed.
  double condition = 0.0;
};

/// Seed of trial t of a row; independent of row order.
std::uint64_t trial_seed(const ExperimentSpec& spec, std::size_t d, int n, Strategy s, int trial);

/// One row per (d, n, strategy), in that nesting order. Rows over budget are
/// skipped with a message on `log`.
std::vector<TableRow> run_experiment(const ExperimentSpec& spec, std::ostream* log);

void write_table_csv(std::ostream& out, const std::vector<TableRow>& rows);
void write_figure_csv(std::ostream& out, const std::vector<TableRow>& rows);

}  // namespace chebdisc
