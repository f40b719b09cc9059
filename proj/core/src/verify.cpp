#include "chebdisc/verify.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <tuple>

#include "chebdisc/error.hpp"
#include "chebdisc/rng.hpp"

namespace chebdisc {
namespace {

constexpr double kRankTol = 1e-10;
constexpr int kMaxLanczos = 1500;

VerificationResult from_singular_values(double smax, double smin, std::size_t rank, std::size_t rows,
                                        std::size_t cols, RankMethod method) {
  VerificationResult v;
  v.rows = rows;
  v.cols = cols;
  v.rank = rank;
  v.full_rank = rank == cols;
  v.singular_value_max = smax;
  v.singular_value_min = smin;
  v.condition_number = smin > 0.0 && v.full_rank ? smax / smin : std::numeric_limits<double>::infinity();
  v.method = method;
  return v;
}

VerificationResult verify_lanczos(const MultiLatticeDiscretization& disc, const VerifyOptions& options) {
  const ChebTransform transform(disc);
  const std::size_t n = transform.cols();
  const std::size_t rows = disc.node_count;
  const auto multiplicity = sample_multiplicity(disc.lattices);
  using Vec = Eigen::VectorXd;

  auto apply = [&](const Vec& x) {
    ChebCoefficients c{std::vector<double>(x.data(), x.data() + x.size())};
    SampleVector y = transform.evaluate(c);
    for (std::size_t l = 0; l < y.blocks.size(); ++l) {
      for (std::size_t j = 0; j < y.blocks[l].size(); ++j) y.blocks[l][j] /= multiplicity[l][j];
    }
    const auto back = transform.adjoint(y).values;
    return Vec(Eigen::Map<const Vec>(back.data(), static_cast<Eigen::Index>(n)));
  };

  const std::size_t steps = std::min<std::size_t>(n, kMaxLanczos);
  Eigen::MatrixXd q(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(steps));
  std::vector<double> alpha;
  std::vector<double> beta;
  Rng rng(0x5eed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Vec v(static_cast<Eigen::Index>(n));
  for (auto& e : v) e = unit(rng);
  v.normalize();

  double lmin = 0.0;
  double lmax = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    q.col(kk) = v;
    Vec w = apply(v);
    alpha.push_back(v.dot(w));
    // full reorthogonalization, twice
    for (int pass = 0; pass < 2; ++pass) {
      const Vec coef = q.leftCols(kk + 1).transpose() * w;
      w -= q.leftCols(kk + 1) * coef;
    }
    const double b = w.norm();

    if (k >= 32 && k % 4 != 0 && k + 1 != steps && b > 0.0) {
      beta.push_back(b);
      v = w / b;
      continue;
    }
    const Vec diag = Eigen::Map<const Vec>(alpha.data(), kk + 1);
    const Vec sub = Eigen::Map<const Vec>(beta.data(), kk);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    eig.computeFromTridiagonal(diag, sub);
    const auto& theta = eig.eigenvalues();
    lmin = theta[0];
    lmax = theta[kk];
    const double res_min = std::abs(b * eig.eigenvectors()(kk, 0));
    const double res_max = std::abs(b * eig.eigenvectors()(kk, kk));
    const bool exhausted = b <= 1e-14 * std::max(lmax, 1e-300);
    // residual bound |beta_k s_k| controls the Ritz value error
    const bool converged = k >= 2 && res_min <= options.lanczos_tol * lmax &&
                           res_max <= options.lanczos_tol * lmax;
    if (exhausted || converged || k + 1 == steps) break;
    beta.push_back(b);
    v = w / b;
  }
  const double smax = std::sqrt(std::max(lmax, 0.0));
  const double smin = std::sqrt(std::max(lmin, 0.0));
  const bool full = rows >= n && smin > kRankTol * static_cast<double>(std::max(rows, n)) * smax;
  // without full rank only an upper bound on the rank is known
  const std::size_t rank = full ? n : std::min(rows, n - 1);
  return from_singular_values(smax, smin, rank, rows, n, RankMethod::iterative);
}

}  // namespace

std::string_view to_string(RankMethod m) noexcept {
  return m == RankMethod::dense_svd ? "dense-svd" : "iterative";
}

VerificationResult verify_dense(const DenseMatrix& matrix) {
  const auto rows = static_cast<std::size_t>(matrix.rows());
  const auto cols = static_cast<std::size_t>(matrix.cols());
  Eigen::VectorXd sv;
  if (rows > cols) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(matrix);
    const Eigen::MatrixXd r = qr.matrixQR().topRows(matrix.cols()).triangularView<Eigen::Upper>();
    sv = Eigen::BDCSVD<Eigen::MatrixXd>(r).singularValues();
  } else {
    sv = Eigen::BDCSVD<Eigen::MatrixXd>(Eigen::MatrixXd(matrix)).singularValues();
  }
  const double smax = sv.size() > 0 ? sv[0] : 0.0;
  const double threshold = kRankTol * static_cast<double>(std::max(rows, cols)) * smax;
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > threshold) ++rank;
  }
  const double smin = cols <= static_cast<std::size_t>(sv.size()) && sv.size() > 0 ? sv[sv.size() - 1] : 0.0;
  return from_singular_values(smax, smin, rank, rows, cols, RankMethod::dense_svd);
}

VerificationResult verify_rank(const MultiLatticeDiscretization& disc, const VerifyOptions& options) {
  if (disc.lattices.empty()) {
    return from_singular_values(0.0, 0.0, 0, 0, disc.index_set.size(), RankMethod::dense_svd);
  }
  if (options.iterative) return verify_lanczos(disc, options);
  const NodeSet nodes = union_nodes(disc.lattices);
  if (nodes.size() * disc.index_set.size() > options.dense_cap) {
    throw CapacityError("dense verification exceeds the cap; use iterative mode");
  }
  return verify_dense(dense_matrix(disc.index_set, nodes, options.dense_cap));
}

std::pair<double, double> clopper_pearson(std::size_t failures, std::size_t trials, double confidence) {
  if (trials == 0 || failures > trials) throw ArgumentError("need 0 <= failures <= trials, trials >= 1");
  if (!(confidence > 0.0 && confidence < 1.0)) throw ArgumentError("confidence must lie in (0, 1)");
  const double a = 1.0 - confidence;
  const auto k = static_cast<double>(failures);
  const auto n = static_cast<double>(trials);
  const double lo = failures == 0 ? 0.0 : boost::math::ibeta_inv(k, n - k + 1.0, a / 2.0);
  const double hi = failures == trials ? 1.0 : boost::math::ibeta_inv(k + 1.0, n - k, 1.0 - a / 2.0);
  return {lo, hi};
}

HarnessResult failure_harness(const IndexSet& set, Strategy strategy, const StrategyParams& params,
                              int trials, const VerifyOptions& options) {
  if (trials < 1) throw ArgumentError("trials must be positive");
  HarnessResult out;
  for (int t = 0; t < trials; ++t) {
    StrategyParams p = params;
    p.seed = derive_seed(params.seed, {static_cast<std::uint64_t>(t)});
    const auto start = std::chrono::steady_clock::now();
    const auto disc = construct(set, strategy, p);
    TrialRecord rec;
    rec.seed = p.seed;
    rec.success = disc.success;
    rec.node_count = disc.node_count;
    if (disc.success) {
      const auto v = verify_rank(disc, options);
      rec.full_rank = v.full_rank;
      rec.condition_number = v.condition_number;
    }
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (rec.failed()) ++out.failures;
    out.trials.push_back(rec);
  }
  out.rate = static_cast<double>(out.failures) / trials;
  std::tie(out.ci_low, out.ci_high) = clopper_pearson(out.failures, out.trials.size());
  return out;
}

}  // namespace chebdisc
