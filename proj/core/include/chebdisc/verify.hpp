#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "chebdisc/chebtransform.hpp"
#include "chebdisc/construct.hpp"

namespace chebdisc {

enum class RankMethod { dense_svd, iterative };
std::string_view to_string(RankMethod m) noexcept;

struct VerificationResult {
  bool full_rank = false;
  std::size_t rank = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  double condition_number = 0.0;
  double singular_value_min = 0.0;
  double singular_value_max = 0.0;
  RankMethod method = RankMethod::dense_svd;
};

struct VerifyOptions {
  bool iterative = false;
  std::size_t dense_cap = kDenseCap;
  /// Relative accuracy of the extreme Ritz values in iterative mode.
  double lanczos_tol = 1e-10;
};

/// Rank and 2-norm condition of C(X, I), X the distinct nodes of the
/// discretization. Dense mode: Householder QR, then SVD of R; singular values
/// below 1e-10 max(rows, cols) sigma_max count as zero. Iterative mode:
/// Lanczos on C^T C applied through the lattice FFTs, duplicate samples
/// down-weighted by their multiplicity. Throws CapacityError if the dense
/// matrix exceeds the cap and iterative mode is off.
VerificationResult verify_rank(const MultiLatticeDiscretization& disc, const VerifyOptions& options = {});

/// Dense check of an explicit matrix (rows = nodes).
VerificationResult verify_dense(const DenseMatrix& matrix);

struct TrialRecord {
  std::uint64_t seed = 0;
  bool success = false;
  bool full_rank = false;
  std::size_t node_count = 0;
  double condition_number = 0.0;
  double seconds = 0.0;

  bool failed() const noexcept { return !success || !full_rank; }
};

struct HarnessResult {
  std::vector<TrialRecord> trials;
  std::size_t failures = 0;
  double rate = 0.0;
  /// Exact (Clopper-Pearson) two sided interval for the failure probability.
  double ci_low = 0.0;
  double ci_high = 1.0;
};

/// Exact binomial confidence interval for `failures` out of `trials`.
std::pair<double, double> clopper_pearson(std::size_t failures, std::size_t trials,
                                          double confidence = 0.95);

/// Runs the strategy `trials` times with seeds derive_seed(params.seed, {t});
/// a trial fails if construction fails or the result is rank deficient.
HarnessResult failure_harness(const IndexSet& set, Strategy strategy, const StrategyParams& params,
                              int trials, const VerifyOptions& options = {});

}  // namespace chebdisc
