#include "chebdisc/construct.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iterator>
#include <map>

#include "chebdisc/error.hpp"
#include "chebdisc/numtheory.hpp"
#include "chebdisc/parallel.hpp"
#include "chebdisc/rng.hpp"

namespace chebdisc {
namespace {

using Positions = std::vector<std::uint32_t>;

bool is_zero_set(const IndexSet& set) {
  return set.size() == 1 && expansion(set) == 0;
}

Rank1Lattice zero_lattice(std::size_t d) { return Rank1Lattice(std::vector<std::int64_t>(d, 0), 2); }

struct Candidate {
  Rank1Lattice lattice;
  Positions covered;  // positions into the round's index set
};

// Draws `count` lattices of size m for the given table, each from its own
// stream (seed, round, probe, candidate), and determines their covered sets.
std::vector<Candidate> draw_candidates(const MirrorTable& table, std::uint64_t m, int count,
                                       std::uint64_t seed, int round, int probe, AliasRule rule) {
  const std::size_t d = table.index_set().dim();
  std::vector<std::optional<Candidate>> slots(static_cast<std::size_t>(count));
  parallel_for(slots.size(), [&](std::size_t l) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(round), static_cast<std::uint64_t>(probe),
                               static_cast<std::uint64_t>(l)}));
    std::vector<std::int64_t> z(d);
    for (auto& zi : z) zi = static_cast<std::int64_t>(uniform_below(rng, m));
    Rank1Lattice lattice(std::move(z), m);
    auto covered = table.covered(lattice, rule);
    slots[l].emplace(Candidate{std::move(lattice), std::move(covered)});
  });
  std::vector<Candidate> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

// First candidate with the largest covered set.
std::size_t best_candidate(const std::vector<Candidate>& candidates) {
  std::size_t best = 0;
  for (std::size_t l = 1; l < candidates.size(); ++l) {
    if (candidates[l].covered.size() > candidates[best].covered.size()) best = l;
  }
  return best;
}

Positions all_positions(std::size_t n) {
  Positions p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<std::uint32_t>(i);
  return p;
}

Positions map_positions(const Positions& local, const Positions& global) {
  Positions out;
  out.reserve(local.size());
  for (std::uint32_t p : local) out.push_back(global[p]);
  return out;
}

Positions difference(const Positions& a, const Positions& b) {
  Positions out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

AliasRule rule_of(const StrategyParams& params) {
  return params.ring ? AliasRule::ring : AliasRule::unique;
}

void check_params(const StrategyParams& params) {
  if (!(params.c > 1.0)) throw ArgumentError("oversampling constant c must exceed 1");
  if (!(params.r >= 0.0)) throw ArgumentError("r must be nonnegative");
  if (params.delta && !(*params.delta > 0.0 && *params.delta <= 1.0)) {
    throw ArgumentError("delta must lie in (0, 1]");
  }
  if (params.L && *params.L < 1) throw ArgumentError("L must be positive");
  if (params.iter_cap && *params.iter_cap < 1) throw ArgumentError("iter_cap must be positive");
}

int resolve_L(int formula, const StrategyParams& params) {
  if (!params.L) return formula;
  if (params.theorem_compliant && *params.L < formula) {
    throw ArgumentError("L = " + std::to_string(*params.L) + " is below the required " +
                        std::to_string(formula));
  }
  return *params.L;
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

MultiLatticeDiscretization start(const IndexSet& set, Strategy strategy,
                                 const StrategyParams& params, int L) {
  MultiLatticeDiscretization disc{set, {}, {}, {}, false, 0, strategy, params, L, {}};
  return disc;
}

void finish(MultiLatticeDiscretization& disc, const Positions& residual, const Timer& timer) {
  disc.residual = residual;
  disc.success = residual.empty();
  disc.node_count = disc.lattices.empty() ? 0 : union_nodes(disc.lattices).size();
  disc.report.seconds = timer.seconds();
}

MultiLatticeDiscretization degenerate(const IndexSet& set, Strategy strategy,
                                      const StrategyParams& params, int L) {
  Timer timer;
  auto disc = start(set, strategy, params, L);
  disc.lattices.push_back(zero_lattice(set.dim()));
  disc.covered.push_back({0});
  disc.report.rounds.push_back({0, 2, 1, 1, 0});
  finish(disc, {}, timer);
  return disc;
}

// Shared loop of iterative and halving: `choose` returns the lattice of the
// round and its covered positions local to I_j.
template <class Choose>
MultiLatticeDiscretization run_rounds(const IndexSet& set, Strategy strategy,
                                      const StrategyParams& params, Choose choose) {
  check_params(params);
  const int L = resolve_L(default_L_rounds(set.size(), params), params);
  if (is_zero_set(set)) return degenerate(set, strategy, params, L);
  const int cap = params.iter_cap.value_or(default_iter_cap(L, params.r));

  Timer timer;
  auto disc = start(set, strategy, params, L);
  Positions remaining = all_positions(set.size());
  for (int round = 0; round < cap && !remaining.empty(); ++round) {
    const IndexSet current = set.subset(remaining);
    RoundLog log{round, 0, remaining.size(), 0, 0};
    Candidate pick = [&] {
      if (is_zero_set(current)) {
        log.lattice_size = 2;
        return Candidate{zero_lattice(set.dim()), {0}};
      }
      const MirrorTable table(current);
      return choose(table, round, L, log);
    }();
    disc.report.candidates_evaluated += static_cast<std::size_t>(log.probes) * L;
    log.lattice_size = pick.lattice.size();
    log.covered = pick.covered.size();
    disc.report.rounds.push_back(log);
    if (pick.covered.empty()) continue;
    auto global = map_positions(pick.covered, remaining);
    remaining = difference(remaining, global);
    disc.lattices.push_back(std::move(pick.lattice));
    disc.covered.push_back(std::move(global));
  }
  finish(disc, remaining, timer);
  return disc;
}

}  // namespace

std::string_view to_string(Strategy s) noexcept {
  switch (s) {
    case Strategy::plain: return "plain";
    case Strategy::greedy: return "greedy";
    case Strategy::iterative: return "iterative";
    case Strategy::halving: return "halving";
  }
  return "plain";
}

Strategy parse_strategy(std::string_view name) {
  for (auto s : {Strategy::plain, Strategy::greedy, Strategy::iterative, Strategy::halving}) {
    if (name == to_string(s)) return s;
  }
  throw ArgumentError("unknown strategy '" + std::string(name) + "'");
}

std::uint64_t MultiLatticeDiscretization::sample_count() const {
  std::uint64_t total = 0;
  for (const auto& lattice : lattices) total += lattice.size();
  return total;
}

std::uint64_t size_for(const IndexSet& set, double c) {
  if (is_zero_set(set)) return 2;
  const auto mirror = static_cast<double>(mirror_cardinality(set));
  const auto n_i = static_cast<double>(expansion(set));
  return next_prime(std::max(c * (mirror - 1.0), 2.0 * n_i));
}

int default_L_single(std::size_t cardinality, const StrategyParams& params) {
  const double ln_i = std::log(static_cast<double>(cardinality));
  const double ln_delta = params.delta ? std::log(*params.delta) : -params.r * ln_i;
  const double ratio = params.c / (params.c - 1.0);
  const double value = ratio * ratio * (ln_i - ln_delta) / 2.0;
  return std::max(1, static_cast<int>(std::ceil(value - 1e-12)));
}

int default_L_rounds(std::size_t cardinality, const StrategyParams& params) {
  const double ln_i = std::log(static_cast<double>(cardinality));
  const int half = static_cast<int>(std::ceil(2.0 * (1.0 + params.r) * ln_i - 1e-12));
  return std::max(10, 2 * half);
}

int default_iter_cap(int L, double r) {
  return std::max(1, static_cast<int>(std::ceil(static_cast<double>(L) * L / (2.0 * (r + 1.0)))));
}

MultiLatticeDiscretization construct_plain(const IndexSet& set, const StrategyParams& params) {
  check_params(params);
  const int L = resolve_L(default_L_single(set.size(), params), params);
  if (is_zero_set(set)) return degenerate(set, Strategy::plain, params, L);

  Timer timer;
  auto disc = start(set, Strategy::plain, params, L);
  const std::uint64_t m = size_for(set, params.c);
  const MirrorTable table(set);
  auto candidates = draw_candidates(table, m, L, params.seed, 0, 0, rule_of(params));
  disc.report.candidates_evaluated = candidates.size();

  Positions remaining = all_positions(set.size());
  for (std::size_t l = 0; l < candidates.size(); ++l) {
    // each index is credited to the first lattice covering it
    auto fresh = difference(candidates[l].covered, difference(all_positions(set.size()), remaining));
    disc.report.rounds.push_back({static_cast<int>(l), m, remaining.size(), fresh.size(), 1});
    remaining = difference(remaining, fresh);
    disc.lattices.push_back(std::move(candidates[l].lattice));
    disc.covered.push_back(std::move(fresh));
  }
  finish(disc, remaining, timer);
  return disc;
}

MultiLatticeDiscretization construct_greedy(const IndexSet& set, const StrategyParams& params) {
  check_params(params);
  const int L = resolve_L(default_L_single(set.size(), params), params);
  if (is_zero_set(set)) return degenerate(set, Strategy::greedy, params, L);

  Timer timer;
  auto disc = start(set, Strategy::greedy, params, L);
  const std::uint64_t m = size_for(set, params.c);
  const MirrorTable table(set);
  auto candidates = draw_candidates(table, m, L, params.seed, 0, 0, rule_of(params));
  disc.report.candidates_evaluated = candidates.size();

  std::vector<Positions> open;
  open.reserve(candidates.size());
  for (const auto& cand : candidates) open.push_back(cand.covered);
  Positions remaining = all_positions(set.size());
  for (int step = 0;; ++step) {
    std::size_t best = 0;
    for (std::size_t l = 1; l < open.size(); ++l) {
      if (open[l].size() > open[best].size()) best = l;
    }
    if (open[best].empty()) break;
    Positions chosen = std::move(open[best]);
    for (auto& other : open) other = difference(other, chosen);
    disc.report.rounds.push_back({step, m, remaining.size(), chosen.size(), 0});
    remaining = difference(remaining, chosen);
    disc.lattices.push_back(candidates[best].lattice);
    disc.covered.push_back(std::move(chosen));
  }
  finish(disc, remaining, timer);
  return disc;
}

MultiLatticeDiscretization construct_iterative(const IndexSet& set, const StrategyParams& params) {
  return run_rounds(set, Strategy::iterative, params,
                    [&](const MirrorTable& table, int round, int L, RoundLog& log) {
                      const std::uint64_t m = size_for(table.index_set(), 2.0);
                      auto candidates =
                          draw_candidates(table, m, L, params.seed, round, 0, rule_of(params));
                      log.probes = 1;
                      return std::move(candidates[best_candidate(candidates)]);
                    });
}

MultiLatticeDiscretization construct_halving(const IndexSet& set, const StrategyParams& params) {
  return run_rounds(
      set, Strategy::halving, params, [&](const MirrorTable& table, int round, int L, RoundLog& log) {
        const IndexSet& current = table.index_set();
        const std::uint64_t m = size_for(current, 2.0);
        const auto primes = primes_in(3, m).primes;
        const double t = params.threshold == ThresholdRule::half
                             ? static_cast<double>(current.size()) / 2.0
                             : static_cast<double>(current.size()) / L;
        std::map<std::size_t, Candidate> probed;
        auto probe = [&](std::size_t i) -> Candidate& {
          auto it = probed.find(i);
          if (it != probed.end()) return it->second;
          auto candidates =
              draw_candidates(table, primes[i], L, params.seed, round, log.probes, rule_of(params));
          ++log.probes;
          return probed.emplace(i, std::move(candidates[best_candidate(candidates)])).first->second;
        };
        std::size_t lo = 0;
        std::size_t hi = primes.size() - 1;
        while (lo < hi) {
          const std::size_t mid = lo + (hi - lo) / 2;
          if (static_cast<double>(probe(mid).covered.size()) < t) {
            lo = mid + 1;
          } else {
            hi = mid;
          }
        }
        return std::move(probe(lo));
      });
}

MultiLatticeDiscretization construct(const IndexSet& set, Strategy strategy,
                                     const StrategyParams& params) {
  switch (strategy) {
    case Strategy::plain: return construct_plain(set, params);
    case Strategy::greedy: return construct_greedy(set, params);
    case Strategy::iterative: return construct_iterative(set, params);
    case Strategy::halving: return construct_halving(set, params);
  }
  throw ArgumentError("unknown strategy");
}

}  // namespace chebdisc
