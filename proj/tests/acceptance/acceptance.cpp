// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "chebdisc/chebtransform.hpp"
#include "chebdisc/construct.hpp"
#include "chebdisc/error.hpp"
#include "chebdisc/experiment.hpp"
#include "chebdisc/indexset.hpp"
#include "chebdisc/lattice.hpp"
#include "chebdisc/rng.hpp"
#include "chebdisc/verify.hpp"
#include "../unit/oracles.hpp"

using namespace chebdisc;

namespace {

constexpr std::uint64_t kBaseSeed = 20240611;
constexpr Strategy kAll[] = {Strategy::plain, Strategy::greedy, Strategy::iterative, Strategy::halving};

struct Outcome {
  bool pass = true;
  std::string summary;
};

template <class... Args>
std::string format(const char* fmt, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

void note(const std::string& line) { std::printf("    %s\n", line.c_str()); }

std::uint64_t run_seed(int criterion, std::uint64_t run) {
  return derive_seed(kBaseSeed, {static_cast<std::uint64_t>(criterion), run});
}

MultiLatticeDiscretization build(const IndexSet& set, Strategy s, std::uint64_t seed) {
  StrategyParams p;
  p.seed = seed;
  p.r = 1.0;
  return construct(set, s, p);
}

std::size_t median(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  return v[(v.size() - 1) / 2];
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  struct Case {
    const char* name;
    std::function<IndexSet()> make;
    std::size_t expect;
  };
  const std::vector<Case> cases{
      {"l1 d=2 n=64", [] { return make_l1_ball(2, 64); }, 2145},
      {"hc d=2 n=256", [] { return make_hyperbolic_cross(2, 256); }, 1979},
      {"dhc d=3 n=2", [] { return make_dyadic_hyperbolic_cross(3, 2); }, 10},
      {"dhc d=6 n=1", [] { return make_dyadic_hyperbolic_cross(6, 1); }, 7},
      {"dhc d=6 n=2", [] { return make_dyadic_hyperbolic_cross(6, 2); }, 28},
      {"dhc d=6 n=4", [] { return make_dyadic_hyperbolic_cross(6, 4); }, 264},
      {"dhc d=6 n=6", [] { return make_dyadic_hyperbolic_cross(6, 6); }, 1995},
      {"dhc d=6 n=8", [] { return make_dyadic_hyperbolic_cross(6, 8); }, 13539},
  };
  Outcome o;
  std::string got;
  for (const auto& c : cases) {
    const auto n = c.make().size();
    if (n != c.expect) {
      o.pass = false;
      note(format("%s: got %zu, expected %zu", c.name, n, c.expect));
    }
    got += (got.empty() ? "" : " ") + std::to_string(n);
  }
  o.summary = "cardinalities " + got;
  return o;
}

// Successful discretizations of criterion 2, reused by criterion 7.
std::vector<MultiLatticeDiscretization> g_successful;

Outcome criterion2() {
  const std::vector<std::pair<const char*, IndexSet>> sets{
      {"l1 d=6 n=4", make_l1_ball(6, 4)},
      {"hc d=2 n=16", make_hyperbolic_cross(2, 16)},
      {"dhc d=6 n=4", make_dyadic_hyperbolic_cross(6, 4)},
  };
  Outcome o;
  std::size_t successes = 0, runs = 0, deficient = 0;
  double worst = 0.0;
  for (const auto& [name, set] : sets) {
    for (auto s : kAll) {
      for (int t = 0; t < 20; ++t) {
        ++runs;
        auto disc = build(set, s, run_seed(2, static_cast<std::uint64_t>(t)));
        if (!disc.success) {
          note(format("%s %s run %d: construction reported failure", name, std::string(to_string(s)).c_str(), t));
          continue;
        }
        ++successes;
        const auto v = verify_rank(disc);
        worst = std::max(worst, v.condition_number);
        if (!v.full_rank) {
          ++deficient;
          note(format("%s %s run %d: rank %zu < %zu", name, std::string(to_string(s)).c_str(), t, v.rank, set.size()));
        }
        g_successful.push_back(std::move(disc));
      }
    }
  }
  o.pass = deficient == 0;
  o.summary = format("%zu/%zu runs succeeded, %zu rank deficient, max cond %.3f", successes, runs, deficient, worst);
  return o;
}

// Node counts of the l1-ball desk rows, shared by criteria 3 and 4.
struct DeskRow {
  std::size_t d;
  int n;
  std::map<Strategy, std::vector<std::size_t>> nodes;
};
std::vector<DeskRow> g_desk;

const std::vector<std::size_t>& desk_nodes(std::size_t d, int n, Strategy s) {
  for (auto& row : g_desk) {
    if (row.d == d && row.n == n) return row.nodes.at(s);
  }
  throw std::logic_error("desk row missing");
}

void run_desk_rows() {
  if (!g_desk.empty()) return;
  const std::vector<std::pair<std::size_t, int>> rows{{2, 64}, {3, 16}, {6, 4}, {7, 4}, {10, 2}};
  for (auto [d, n] : rows) {
    DeskRow row{d, n, {}};
    const auto set = make_l1_ball(d, n);
    for (auto s : kAll) {
      for (int t = 0; t < 10; ++t) {
        const auto disc = build(set, s, run_seed(3, static_cast<std::uint64_t>(t)));
        row.nodes[s].push_back(disc.node_count);
      }
    }
    g_desk.push_back(std::move(row));
  }
}

Outcome criterion3() {
  run_desk_rows();
  Outcome o;
  const std::map<Strategy, double> reference{{Strategy::plain, 28359},
                                         {Strategy::greedy, 3868},
                                         {Strategy::iterative, 1304},
                                         {Strategy::halving, 667}};
  std::string parts;
  for (auto s : kAll) {
    const auto& v = desk_nodes(6, 4, s);
    const double mx = static_cast<double>(*std::max_element(v.begin(), v.end()));
    const double ref = reference.at(s);
    const bool ok = mx >= ref / 2.0 && mx <= 2.0 * ref;
    o.pass = o.pass && ok;
    parts += format("%s %.0f/%.0f%s ", std::string(to_string(s)).c_str(), mx, ref, ok ? "" : "(!)");
  }
  const auto hc = make_hyperbolic_cross(2, 256);
  std::size_t mx = 0;
  for (int t = 0; t < 10; ++t) {
    mx = std::max(mx, build(hc, Strategy::halving, run_seed(3, 100 + static_cast<std::uint64_t>(t))).node_count);
  }
  const bool ok = static_cast<double>(mx) >= 5501.0 / 2.0 && static_cast<double>(mx) <= 2.0 * 5501.0;
  o.pass = o.pass && ok;
  parts += format("| hc(2,256) halving %zu/5501%s", mx, ok ? "" : "(!)");
  o.summary = parts;
  return o;
}

Outcome criterion4() {
  run_desk_rows();
  Outcome o;
  int inversions = 0;
  for (const auto& row : g_desk) {
    std::vector<std::size_t> med;
    for (auto s : kAll) med.push_back(median(row.nodes.at(s)));
    note(format("l1 d=%zu n=%d medians: %zu %zu %zu %zu", row.d, row.n, med[0], med[1], med[2], med[3]));
    for (std::size_t i = 0; i + 1 < med.size(); ++i) {
      if (med[i] < med[i + 1]) {
        ++inversions;
        note(format("  inversion: %s < %s", std::string(to_string(kAll[i])).c_str(),
                    std::string(to_string(kAll[i + 1])).c_str()));
      }
    }
  }
  o.pass = inversions <= 1;
  o.summary = format("%d inversion(s) over %zu rows", inversions, g_desk.size());
  return o;
}

Outcome criterion5() {
  Outcome o;
  ExperimentSpec spec;
  spec.family = Family::random;
  spec.active = 2;
  spec.seed = kBaseSeed;
  std::string parts;
  for (int count : {64, 256, 1024}) {
    const auto set = make_family_set(spec, 25, count);
    const auto mirror = static_cast<double>(mirror_cardinality(set));
    double worst = 0.0, worst_mirror = 0.0;
    for (int t = 0; t < 10; ++t) {
      const auto disc = build(set, Strategy::halving, run_seed(5, static_cast<std::uint64_t>(count * 100 + t)));
      if (!disc.success) {
        o.pass = false;
        note(format("|I|=%d run %d: construction failed", count, t));
        continue;
      }
      worst = std::max(worst, static_cast<double>(disc.node_count) / static_cast<double>(set.size()));
      worst_mirror = std::max(worst_mirror, static_cast<double>(disc.node_count) / mirror);
    }
    const bool ok = worst <= 4.5 && worst_mirror < 1.0;
    o.pass = o.pass && ok;
    parts += format("|I|=%d: %.3f (|X|/|M(I)| %.3f)%s  ", count, worst, worst_mirror, ok ? "" : "(!)");
  }
  o.summary = parts;
  return o;
}

// Dense sample matrix from floating point phases, independent of the library.
Eigen::MatrixXd oracle_matrix(const IndexSet& set, const std::vector<Rank1Lattice>& lattices) {
  std::size_t rows = 0;
  for (const auto& l : lattices) rows += l.size();
  Eigen::MatrixXd a(rows, set.size());
  std::size_t row = 0;
  for (const auto& lat : lattices) {
    const auto m = static_cast<long double>(lat.size());
    for (std::uint64_t j = 0; j < lat.size(); ++j, ++row) {
      std::vector<double> x(set.dim());
      for (std::size_t i = 0; i < set.dim(); ++i) {
        const long double t = std::fmod(static_cast<long double>(j) * lat.generator()[i], m) / m;
        x[i] = static_cast<double>(2.0L * std::numbers::pi_v<long double> * t);
      }
      for (std::size_t k = 0; k < set.size(); ++k) {
        double v = 1.0;
        for (std::size_t i = 0; i < set.dim(); ++i) {
          const auto ki = set[k][i];
          if (ki != 0) v *= std::numbers::sqrt2 * std::cos(ki * x[i]);
        }
        a(row, k) = v;
      }
    }
  }
  return a;
}

Outcome criterion6() {
  Outcome o;
  std::mt19937_64 rng(run_seed(6, 0));
  std::normal_distribution<double> gauss;
  double worst_eval = 0.0, worst_adj = 0.0, worst_ip = 0.0;
  int instances = 0, pairs = 0;
  while (instances < 25) {
    const std::size_t d = 2 + rng() % 5;
    const std::size_t active = 1 + rng() % std::min<std::size_t>(d, 3);
    const std::size_t count = 20 + rng() % 180;
    const int degree = 8 + static_cast<int>(rng() % 60);
    std::optional<IndexSet> drawn;
    try {
      drawn = make_random_sparse(d, active, count, degree, rng());
    } catch (const ArgumentError&) {
      continue;  // fewer than `count` vectors exist for these parameters
    }
    const IndexSet set = std::move(*drawn);
    if (mirror_cardinality(set) > 4096) continue;
    const auto m = size_for(set);
    std::vector<Rank1Lattice> lattices;
    const std::size_t count_lat = 1 + rng() % 3;
    for (std::size_t l = 0; l < count_lat; ++l) {
      std::vector<std::int64_t> z(d);
      const std::uint64_t size = l == 0 ? m : 3 + rng() % m;
      for (auto& zi : z) zi = static_cast<std::int64_t>(rng() % size);
      lattices.emplace_back(std::move(z), size);
    }
    ++instances;
    const ChebTransform op(set, lattices);
    const auto a = oracle_matrix(set, lattices);

    Eigen::VectorXd c(set.size());
    for (auto& v : c) v = gauss(rng);
    const auto y = op.evaluate({std::vector<double>(c.data(), c.data() + c.size())}).flatten();
    const Eigen::VectorXd yd = a * c;
    worst_eval = std::max(worst_eval, (Eigen::Map<const Eigen::VectorXd>(y.data(), y.size()) - yd).norm() / yd.norm());

    Eigen::VectorXd s(a.rows());
    for (auto& v : s) v = gauss(rng);
    SampleVector sv;
    std::size_t off = 0;
    for (const auto& lat : lattices) {
      sv.blocks.emplace_back(s.data() + off, s.data() + off + lat.size());
      off += lat.size();
    }
    const auto back = op.adjoint(sv).values;
    const Eigen::VectorXd bd = a.transpose() * s;
    worst_adj =
        std::max(worst_adj, (Eigen::Map<const Eigen::VectorXd>(back.data(), back.size()) - bd).norm() / bd.norm());

    for (int p = 0; p < 4; ++p, ++pairs) {
      ChebCoefficients cc{std::vector<double>(set.size())};
      for (auto& v : cc.values) v = gauss(rng);
      SampleVector yy;
      for (const auto& lat : lattices) {
        std::vector<double> b(lat.size());
        for (auto& v : b) v = gauss(rng);
        yy.blocks.push_back(std::move(b));
      }
      const auto ac = op.evaluate(cc).flatten();
      const auto aty = op.adjoint(yy).values;
      const auto yf = yy.flatten();
      double lhs = 0.0, rhs = 0.0, n1 = 0.0, n2 = 0.0;
      for (std::size_t i = 0; i < ac.size(); ++i) {
        lhs += ac[i] * yf[i];
        n1 += ac[i] * ac[i];
        n2 += yf[i] * yf[i];
      }
      for (std::size_t k = 0; k < aty.size(); ++k) rhs += cc.values[k] * aty[k];
      worst_ip = std::max(worst_ip, std::abs(lhs - rhs) / std::sqrt(n1 * n2));
    }
  }
  o.pass = worst_eval <= 1e-10 && worst_adj <= 1e-10 && worst_ip <= 1e-10 && pairs == 100;
  o.summary = format("%d instances: eval %.2e, adjoint %.2e; %d pairs: inner product %.2e", instances, worst_eval,
                     worst_adj, pairs, worst_ip);
  return o;
}

Outcome criterion7() {
  Outcome o;
  std::mt19937_64 rng(run_seed(7, 0));
  std::normal_distribution<double> gauss;
  double worst = 0.0;
  std::size_t solves = 0;
  CgOptions opts;
  opts.tol = 1e-12;
  for (const auto& disc : g_successful) {
    const ChebTransform op(disc);
    for (int t = 0; t < 10; ++t, ++solves) {
      ChebCoefficients c{std::vector<double>(disc.index_set.size())};
      for (auto& v : c.values) v = gauss(rng);
      const auto y = op.evaluate(c);
      const auto r = reconstruct_cg(y, op, opts);
      double err = 0.0, scale = 0.0;
      for (std::size_t k = 0; k < c.values.size(); ++k) {
        err = std::max(err, std::abs(r.coefficients.values[k] - c.values[k]));
        scale = std::max(scale, std::abs(c.values[k]));
      }
      worst = std::max(worst, err / scale);
    }
  }
  o.pass = worst <= 1e-8 && solves > 0;
  o.summary = format("%zu reconstructions on %zu discretizations, max relative error %.2e", solves,
                     g_successful.size(), worst);
  return o;
}

Outcome criterion8() {
  Outcome o;
  std::mt19937_64 rng(run_seed(8, 0));
  int pairs = 0, mismatches = 0, nesting = 0;
  while (pairs < 50) {
    const std::size_t d = 1 + rng() % 4;
    std::vector<std::int32_t> flat;
    const std::size_t count = 1 + rng() % 40;
    for (std::size_t i = 0; i < count * d; ++i) flat.push_back(rng() % 3 == 0 ? 0 : static_cast<std::int32_t>(rng() % 9));
    const IndexSet set(d, flat);
    const auto mirror = mirror_cardinality(set);
    if (mirror > 512) continue;
    ++pairs;
    const std::uint64_t m = 2 + rng() % (2 * mirror + 8);
    std::vector<std::int64_t> z(d);
    for (auto& zi : z) zi = static_cast<std::int64_t>(rng() % m);
    const Rank1Lattice lat(std::move(z), m);
    const auto j = determine_J(set, lat).covered;
    const auto ring = determine_J_ring(set, lat).covered;
    if (j != oracle::covered_by_columns(set, lat)) {
      ++mismatches;
      note(format("pair %d: determine_J differs from the column oracle", pairs));
    }
    const bool nested = std::includes(ring.begin(), ring.end(), j.begin(), j.end()) &&
                        std::all_of(ring.begin(), ring.end(), [&](std::uint32_t p) { return p < set.size(); });
    if (!nested) {
      ++nesting;
      note(format("pair %d: covered sets not nested", pairs));
    }
  }
  o.pass = mismatches == 0 && nesting == 0;
  o.summary = format("%d pairs, %d oracle mismatches, %d nesting violations", pairs, mismatches, nesting);
  return o;
}

Outcome criterion9() {
  Outcome o;
  std::string parts;
  for (int n : {2, 4, 6}) {
    const auto set = make_dyadic_hyperbolic_cross(6, n);
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
      const auto disc = build(set, Strategy::halving, run_seed(9, static_cast<std::uint64_t>(n * 100 + t)));
      if (!disc.success) {
        o.pass = false;
        note(format("n=%d run %d: construction failed", n, t));
        continue;
      }
      const auto v = verify_rank(disc);
      if (!v.full_rank) o.pass = false;
      worst = std::max(worst, v.condition_number);
    }
    o.pass = o.pass && worst <= 20.0;
    parts += format("n=%d: %.3f  ", n, worst);
  }
  o.summary = "max condition " + parts;
  return o;
}

Outcome criterion10() {
  Outcome o;
  const auto set = make_random_sparse(6, 3, 100, 16, kBaseSeed);
  StrategyParams p;
  p.r = 1.0;
  p.seed = run_seed(10, 0);
  const auto h = failure_harness(set, Strategy::plain, p, 50);
  for (const auto& t : h.trials) {
    if (!t.failed()) continue;
    note(format("failed trial seed %llu: %s", static_cast<unsigned long long>(t.seed),
                !t.success ? "indices left uncovered" : "rank deficient"));
  }
  o.pass = h.failures <= 3 && h.trials.size() == 50;
  o.summary = format("%zu failures in %zu trials, rate %.3f, 95%% CI [%.4f, %.4f]", h.failures, h.trials.size(), h.rate,
                     h.ci_low, h.ci_high);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double budget_seconds;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "exact cardinalities", 5, criterion1},
      {2, "rank guarantee", 180, criterion2},
      {3, "node counts at desk scale", 300, criterion3},
      {4, "strategy ordering", 300, criterion4},
      {5, "oversampling stagnation", 120, criterion5},
      {6, "FFT correctness", 60, criterion6},
      {7, "round-trip reconstruction", 120, criterion7},
      {8, "aliasing oracle", 60, criterion8},
      {9, "condition numbers", 120, criterion9},
      {10, "failure harness", 120, criterion10},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_seconds;
    const bool pass = out.pass && in_time;
    failed += pass ? 0 : 1;
    std::printf("%s criterion %2d %-26s %8.2fs (budget %.0fs%s)  %s\n", pass ? "PASS" : "FAIL", c.id, c.title, secs,
                c.budget_seconds, in_time ? "" : ", exceeded", out.summary.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
