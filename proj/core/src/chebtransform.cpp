#include "chebdisc/chebtransform.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "chebdisc/error.hpp"
#include "chebdisc/parallel.hpp"
#include "wide.hpp"

namespace chebdisc {
namespace {

struct FftwFree {
  void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};
using FftBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

FftBuffer make_buffer(std::uint64_t n) {
  auto* p = fftw_alloc_complex(n);
  if (p == nullptr) throw std::bad_alloc();
  std::fill_n(reinterpret_cast<double*>(p), 2 * n, 0.0);
  return FftBuffer(p);
}

// In-place backward (e^{+2 pi i j l / M}) plans, shared by all threads. The
// FFTW planner is not reentrant, execution with fftw_execute_dft is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::uint64_t n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    auto scratch = make_buffer(n);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), scratch.get(), scratch.get(),
                                      FFTW_BACKWARD, FFTW_ESTIMATE);
    if (plan == nullptr) throw ConsistencyError("FFTW failed to create a plan");
    plans_.emplace(n, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::uint64_t, fftw_plan> plans_;
};

PlanCache& plans() {
  static PlanCache cache;
  return cache;
}

// cos(2 pi k a / b) with k a reduced exactly modulo b.
double cos_fraction(std::int64_t k, AngleKey key) {
  const std::uint64_t b = angle_denominator(key);
  const std::uint64_t a = angle_numerator(key);
  const auto ka = static_cast<std::uint64_t>(
      static_cast<detail::u128>(static_cast<std::uint64_t>(k)) * a % b);
  return std::cos(2.0 * std::numbers::pi * static_cast<double>(ka) / static_cast<double>(b));
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

template <class RowKeys>
DenseMatrix build_dense(const IndexSet& set, std::size_t rows, std::size_t cap, RowKeys row_keys) {
  if (rows * set.size() > cap) {
    throw CapacityError("dense matrix with " + std::to_string(rows) + " x " +
                        std::to_string(set.size()) + " entries exceeds the cap");
  }
  DenseMatrix a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(set.size()));
  const std::size_t d = set.dim();
  parallel_for(rows, [&](std::size_t r) {
    const std::vector<AngleKey> keys = row_keys(r);
    for (std::size_t c = 0; c < set.size(); ++c) {
      auto k = set[c];
      double v = 1.0;
      for (std::size_t i = 0; i < d; ++i) {
        if (k[i] == 0) continue;
        v *= std::numbers::sqrt2 * cos_fraction(k[i], keys[i]);
      }
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
    }
  });
  return a;
}

}  // namespace

std::size_t SampleVector::total() const {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.size();
  return n;
}

std::vector<double> SampleVector::flatten() const {
  std::vector<double> out;
  out.reserve(total());
  for (const auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
  return out;
}

double eval_cheb_point(std::span<const std::int32_t> k, std::span<const double> x) {
  if (k.size() != x.size()) throw ArgumentError("frequency and point differ in dimension");
  double v = 1.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (!(x[i] >= -1.0 && x[i] <= 1.0)) throw ArgumentError("point outside [-1,1]^d");
    if (k[i] == 0) continue;
    v *= std::numbers::sqrt2 * std::cos(static_cast<double>(k[i]) * std::acos(x[i]));
  }
  return v;
}

ChebTransform::ChebTransform(IndexSet set, std::vector<Rank1Lattice> lattices)
    : table_(set), lattices_(std::move(lattices)) {
  for (const auto& lattice : lattices_) {
    if (lattice.dim() != set.dim()) throw ArgumentError("lattice and index set differ in dimension");
    rows_ += lattice.size();
  }
  residues_.resize(lattices_.size());
  parallel_for(lattices_.size(), [&](std::size_t l) { table_.residues(lattices_[l], residues_[l]); });
  source_.resize(table_.mirror_size());
  weight_.resize(table_.mirror_size());
  for (std::size_t k = 0; k < set.size(); ++k) {
    const double w = std::pow(2.0, -0.5 * table_.nonzeros(k));
    for (std::uint64_t p = table_.offset(k); p < table_.offset(k + 1); ++p) {
      source_[p] = static_cast<std::uint32_t>(k);
      weight_[p] = w;
    }
  }
}

void ChebTransform::check_shape(const SampleVector& samples) const {
  if (samples.blocks.size() != lattices_.size()) {
    throw ArgumentError("sample vector has " + std::to_string(samples.blocks.size()) +
                        " blocks, expected " + std::to_string(lattices_.size()));
  }
  for (std::size_t l = 0; l < lattices_.size(); ++l) {
    if (samples.blocks[l].size() != lattices_[l].size()) {
      throw ArgumentError("sample block " + std::to_string(l) + " has the wrong length");
    }
  }
}

SampleVector ChebTransform::evaluate(const ChebCoefficients& coeffs) const {
  if (coeffs.values.size() != cols()) throw ArgumentError("coefficient vector has the wrong length");
  const double tolerance = 1e-9 * std::max(norm2(coeffs.values), 1e-300);
  SampleVector out;
  out.blocks.resize(lattices_.size());
  std::vector<double> imag_max(lattices_.size(), 0.0);
  parallel_for(lattices_.size(), [&](std::size_t l) {
    const std::uint64_t m = lattices_[l].size();
    auto buf = make_buffer(m);
    const auto& res = residues_[l];
    for (std::size_t p = 0; p < res.size(); ++p) {
      buf[res[p]][0] += weight_[p] * coeffs.values[source_[p]];
    }
    fftw_execute_dft(plans().get(m), buf.get(), buf.get());
    auto& block = out.blocks[l];
    block.resize(m);
    double worst = 0.0;
    for (std::uint64_t j = 0; j < m; ++j) {
      block[j] = buf[j][0];
      worst = std::max(worst, std::abs(buf[j][1]));
    }
    imag_max[l] = worst;
  });
  const double worst = imag_max.empty() ? 0.0 : *std::max_element(imag_max.begin(), imag_max.end());
  if (worst > tolerance) {
    throw ConsistencyError("imaginary residue " + std::to_string(worst) + " of a real evaluation");
  }
  return out;
}

ChebCoefficients ChebTransform::adjoint(const SampleVector& samples) const {
  check_shape(samples);
  std::vector<std::vector<double>> partial(lattices_.size(), std::vector<double>(cols(), 0.0));
  parallel_for(lattices_.size(), [&](std::size_t l) {
    const std::uint64_t m = lattices_[l].size();
    auto buf = make_buffer(m);
    for (std::uint64_t j = 0; j < m; ++j) buf[j][0] = samples.blocks[l][j];
    fftw_execute_dft(plans().get(m), buf.get(), buf.get());
    const auto& res = residues_[l];
    auto& c = partial[l];
    for (std::size_t p = 0; p < res.size(); ++p) c[source_[p]] += weight_[p] * buf[res[p]][0];
  });
  ChebCoefficients out{std::vector<double>(cols(), 0.0)};
  for (const auto& c : partial) {
    for (std::size_t k = 0; k < c.size(); ++k) out.values[k] += c[k];
  }
  return out;
}

std::vector<double> ChebTransform::normal_diagonal() const {
  // sum_j T_k(x_j)^2 = M 2^{-|k|_0} sum over residue classes of (class size)^2
  std::vector<double> diag(cols(), 0.0);
  std::vector<std::uint32_t> block;
  for (std::size_t l = 0; l < lattices_.size(); ++l) {
    const auto m = static_cast<double>(lattices_[l].size());
    const auto& res = residues_[l];
    for (std::size_t k = 0; k < cols(); ++k) {
      block.assign(res.begin() + static_cast<std::ptrdiff_t>(table_.offset(k)),
                   res.begin() + static_cast<std::ptrdiff_t>(table_.offset(k + 1)));
      std::sort(block.begin(), block.end());
      double squares = 0.0;
      for (std::size_t b = 0; b < block.size();) {
        std::size_t e = b + 1;
        while (e < block.size() && block[e] == block[b]) ++e;
        squares += static_cast<double>((e - b) * (e - b));
        b = e;
      }
      diag[k] += m * std::ldexp(squares, -table_.nonzeros(k));
    }
  }
  return diag;
}

SampleVector fast_evaluate(const ChebCoefficients& coeffs, const MultiLatticeDiscretization& disc) {
  return ChebTransform(disc).evaluate(coeffs);
}

ChebCoefficients fast_adjoint(const SampleVector& samples, const MultiLatticeDiscretization& disc) {
  return ChebTransform(disc).adjoint(samples);
}

DenseMatrix dense_matrix(const IndexSet& set, const NodeSet& nodes, std::size_t cap) {
  if (nodes.dim() != set.dim()) throw ArgumentError("nodes and index set differ in dimension");
  return build_dense(set, nodes.size(), cap, [&](std::size_t r) {
    auto key = nodes.key(r);
    return std::vector<AngleKey>(key.begin(), key.end());
  });
}

DenseMatrix dense_sample_matrix(const IndexSet& set, std::span<const Rank1Lattice> lattices,
                                std::size_t cap) {
  std::vector<std::pair<std::size_t, std::uint64_t>> rows;
  for (std::size_t l = 0; l < lattices.size(); ++l) {
    if (lattices[l].dim() != set.dim()) throw ArgumentError("lattice and index set differ in dimension");
    for (std::uint64_t j = 0; j < lattices[l].size(); ++j) rows.emplace_back(l, j);
  }
  return build_dense(set, rows.size(), cap, [&](std::size_t r) {
    return lattice_point_key(lattices[rows[r].first], rows[r].second);
  });
}

CgResult reconstruct_cg(const SampleVector& samples, const MultiLatticeDiscretization& disc,
                        const CgOptions& options) {
  if (!disc.success) throw ArgumentError("reconstruction needs a successful discretization");
  return reconstruct_cg(samples, ChebTransform(disc), options);
}

CgResult reconstruct_cg(const SampleVector& samples, const ChebTransform& transform,
                        const CgOptions& options) {
  transform.check_shape(samples);
  const std::size_t n = transform.cols();
  const int max_iter = options.max_iter > 0 ? options.max_iter : static_cast<int>(4 * n);
  using Vec = Eigen::VectorXd;
  auto as_vec = [](const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), v.size()); };
  auto normal = [&](const Vec& x) {
    ChebCoefficients c{std::vector<double>(x.data(), x.data() + x.size())};
    return Vec(as_vec(transform.adjoint(transform.evaluate(c)).values));
  };

  const Vec b = as_vec(transform.adjoint(samples).values);
  const double b_norm = b.norm();
  CgResult result{{std::vector<double>(n, 0.0)}, 0, 0.0};
  if (b_norm == 0.0) return result;

  Vec inv_diag = Vec::Ones(static_cast<Eigen::Index>(n));
  if (options.jacobi) {
    const auto diag = transform.normal_diagonal();
    for (std::size_t k = 0; k < n; ++k) inv_diag[static_cast<Eigen::Index>(k)] = 1.0 / diag[k];
  }

  Vec x = Vec::Zero(static_cast<Eigen::Index>(n));
  Vec r = b;
  Vec z = inv_diag.cwiseProduct(r);
  Vec p = z;
  double rz = r.dot(z);
  int it = 0;
  double rel = 1.0;
  while (it < max_iter) {
    const Vec q = normal(p);
    const double alpha = rz / p.dot(q);
    x += alpha * p;
    r -= alpha * q;
    ++it;
    rel = r.norm() / b_norm;
    if (rel <= options.tol) {
      // confirm against the true residual, the recursion drifts
      r = b - normal(x);
      rel = r.norm() / b_norm;
      if (rel <= options.tol) break;
    }
    z = inv_diag.cwiseProduct(r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  if (rel > options.tol) {
    throw ConvergenceError("conjugate gradients did not reach the tolerance", it, rel);
  }
  result.coefficients.values.assign(x.data(), x.data() + x.size());
  result.iterations = it;
  result.residual = rel;
  return result;
}

}  // namespace chebdisc
