#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chebdisc/indexset.hpp"
#include "chebdisc/lattice.hpp"

namespace chebdisc {

enum class Strategy { plain, greedy, iterative, halving };

std::string_view to_string(Strategy s) noexcept;
/// Throws ArgumentError for unknown names.
Strategy parse_strategy(std::string_view name);

/// Threshold t_j in the halving bisection.
enum class ThresholdRule {
  half,    ///< t = |I_j| / 2
  theory,  ///< t = |I_j| / L
};

struct StrategyParams {
  double c = 2.0;
  double r = 1.0;
  /// Failure bound; defaults to |I|^-r.
  std::optional<double> delta;
  /// Candidates per round; defaults to the strategy's formula.
  std::optional<int> L;
  /// Round limit of iterative/halving; defaults to ceil(L^2 / (2(r+1))).
  std::optional<int> iter_cap;
  ThresholdRule threshold = ThresholdRule::half;
  std::uint64_t seed = 0;
  /// Use the refined covered sets instead of J_l.
  bool ring = false;
  /// Reject L / threshold overrides below the values the probability bounds need.
  bool theorem_compliant = false;
};

/// One round (iterative/halving) or one selection step (greedy); plain logs a
/// single entry per drawn lattice.
struct RoundLog {
  int round = 0;
  std::uint64_t lattice_size = 0;
  std::size_t remaining = 0;
  std::size_t covered = 0;
  /// Number of determine_J calls spent in this round.
  int probes = 0;
};

struct ConstructionReport {
  std::vector<RoundLog> rounds;
  double seconds = 0.0;
  std::size_t candidates_evaluated = 0;
};

struct MultiLatticeDiscretization {
  IndexSet index_set;
  std::vector<Rank1Lattice> lattices;
  /// Positions into index_set covered by each lattice; pairwise disjoint.
  std::vector<std::vector<std::uint32_t>> covered;
  std::vector<std::uint32_t> residual;
  bool success = false;
  /// Exact number of distinct cosine transformed nodes.
  std::size_t node_count = 0;
  Strategy strategy = Strategy::plain;
  StrategyParams params;
  /// Candidates per round that were actually used.
  int L = 0;
  ConstructionReport report;

  /// Total number of (duplicated) lattice samples, sum of M_l.
  std::uint64_t sample_count() const;
  NodeSet nodes() const { return union_nodes(lattices); }
};

/// nextprime(max(c (|M(I)| - 1), 2 N_I)); 2 for I = {0}.
std::uint64_t size_for(const IndexSet& set, double c = 2.0);

/// L for plain and greedy: max(1, ceil((c/(c-1))^2 (ln|I| - ln delta) / 2)).
int default_L_single(std::size_t cardinality, const StrategyParams& params);
/// L for iterative and halving: max(10, 2 ceil(2 (1 + r) ln|I|)).
int default_L_rounds(std::size_t cardinality, const StrategyParams& params);
int default_iter_cap(int L, double r);

/// L i.i.d. lattices of size size_for(I, c); all are kept.
MultiLatticeDiscretization construct_plain(const IndexSet& set, const StrategyParams& params);
/// The plain draw followed by greedy selection of the lattice covering most
/// of the remaining indices.
MultiLatticeDiscretization construct_greedy(const IndexSet& set, const StrategyParams& params);
/// Per round: L fresh lattices of size size_for(I_j), keep the best one.
MultiLatticeDiscretization construct_iterative(const IndexSet& set, const StrategyParams& params);
/// As iterative, but each round bisects over the primes in [3, size_for(I_j)]
/// for a small lattice size still covering at least t_j indices.
MultiLatticeDiscretization construct_halving(const IndexSet& set, const StrategyParams& params);

MultiLatticeDiscretization construct(const IndexSet& set, Strategy strategy,
                                     const StrategyParams& params);

}  // namespace chebdisc
