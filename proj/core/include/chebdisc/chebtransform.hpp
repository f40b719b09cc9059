#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "chebdisc/construct.hpp"
#include "chebdisc/indexset.hpp"
#include "chebdisc/lattice.hpp"

namespace chebdisc {

/// Coefficients indexed by the positions of an IndexSet.
struct ChebCoefficients {
  std::vector<double> values;
};

/// Samples at every lattice point, block l holding j = 0, ..., M_l - 1.
struct SampleVector {
  std::vector<std::vector<double>> blocks;

  std::size_t total() const;
  std::vector<double> flatten() const;
};

using DenseMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr std::size_t kDenseCap = 40'000'000;

/// T_k(x) = prod_j 2^{(1 - delta_0(k_j))/2} cos(k_j arccos x_j).
/// Throws ArgumentError if x leaves [-1, 1]^d or the lengths differ.
double eval_cheb_point(std::span<const std::int32_t> k, std::span<const double> x);

/// Matrix-free evaluation on a fixed family of lattices. Residues of the
/// mirrored set are computed once; instances are immutable and thread safe.
class ChebTransform {
 public:
  ChebTransform(IndexSet set, std::vector<Rank1Lattice> lattices);
  explicit ChebTransform(const MultiLatticeDiscretization& disc)
      : ChebTransform(disc.index_set, disc.lattices) {}

  const IndexSet& index_set() const noexcept { return table_.index_set(); }
  std::span<const Rank1Lattice> lattices() const noexcept { return lattices_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return index_set().size(); }

  /// y = A c with one FFT per lattice.
  SampleVector evaluate(const ChebCoefficients& coeffs) const;
  /// c = A^T y.
  ChebCoefficients adjoint(const SampleVector& samples) const;
  /// diag(A^T A), from residue class counts of every M({k}).
  std::vector<double> normal_diagonal() const;

  void check_shape(const SampleVector& samples) const;

 private:
  MirrorTable table_;
  std::vector<Rank1Lattice> lattices_;
  std::size_t rows_ = 0;
  /// Residues per lattice in mirror stream order.
  std::vector<std::vector<std::uint32_t>> residues_;
  /// Owner position and weight 2^{-|h|_0/2} per mirror stream entry.
  std::vector<std::uint32_t> source_;
  std::vector<double> weight_;
};

SampleVector fast_evaluate(const ChebCoefficients& coeffs, const MultiLatticeDiscretization& disc);
ChebCoefficients fast_adjoint(const SampleVector& samples, const MultiLatticeDiscretization& disc);

/// Rows are the nodes of `nodes`, columns the positions of `set`.
/// Throws CapacityError above `cap` entries.
DenseMatrix dense_matrix(const IndexSet& set, const NodeSet& nodes, std::size_t cap = kDenseCap);

/// Rows are all lattice samples (l, j) in SampleVector order, duplicates kept.
DenseMatrix dense_sample_matrix(const IndexSet& set, std::span<const Rank1Lattice> lattices,
                                std::size_t cap = kDenseCap);

struct CgOptions {
  double tol = 1e-10;
  /// 0 means 4 |I|.
  int max_iter = 0;
  bool jacobi = false;
};

struct CgResult {
  ChebCoefficients coefficients;
  int iterations = 0;
  /// ||A^T (y - A c)|| / ||A^T y|| of the returned c.
  double residual = 0.0;
};

/// Least squares min ||A c - y|| over the duplicated samples by conjugate
/// gradients on the normal equations. Throws ArgumentError if the
/// discretization did not succeed, ConvergenceError after max_iter.
CgResult reconstruct_cg(const SampleVector& samples, const MultiLatticeDiscretization& disc,
                        const CgOptions& options = {});
CgResult reconstruct_cg(const SampleVector& samples, const ChebTransform& transform,
                        const CgOptions& options = {});

}  // namespace chebdisc
