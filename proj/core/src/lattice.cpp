#include "chebdisc/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "chebdisc/error.hpp"
#include "wide.hpp"

namespace chebdisc {
namespace {

constexpr std::uint64_t kMaxLatticeSize = 0xffffffffULL;

// Sorts rows of `keys` (d per row) and returns the permutation.
std::vector<std::size_t> sorted_rows(std::span<const AngleKey> keys, std::size_t d) {
  std::vector<std::size_t> order(keys.size() / d);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(keys.begin() + a * d, keys.begin() + (a + 1) * d,
                                        keys.begin() + b * d, keys.begin() + (b + 1) * d);
  });
  return order;
}

bool rows_equal(std::span<const AngleKey> keys, std::size_t d, std::size_t a, std::size_t b) {
  return std::equal(keys.begin() + a * d, keys.begin() + (a + 1) * d, keys.begin() + b * d);
}

void append_point_keys(const Rank1Lattice& lattice, std::uint64_t j, std::vector<AngleKey>& out) {
  const std::uint64_t m = lattice.size();
  for (std::int64_t zi : lattice.generator()) {
    const auto a = static_cast<std::uint64_t>(
        static_cast<detail::u128>(j) * static_cast<std::uint64_t>(zi) % m);
    out.push_back(make_angle_key(a, m));
  }
}

}  // namespace

Rank1Lattice::Rank1Lattice(std::vector<std::int64_t> generator, std::uint64_t size)
    : z_(std::move(generator)), size_(size) {
  if (z_.empty()) throw ArgumentError("generating vector must not be empty");
  if (size_ < 1) throw ArgumentError("lattice size must be positive");
  if (size_ > kMaxLatticeSize) throw CapacityError("lattice size must be below 2^32");
  const auto m = static_cast<std::int64_t>(size_);
  for (auto& zi : z_) zi = ((zi % m) + m) % m;
}

AngleKey make_angle_key(std::uint64_t numerator, std::uint64_t denominator) {
  std::uint64_t a = numerator % denominator;
  if (2 * a > denominator) a = denominator - a;
  const std::uint64_t g = std::gcd(a, denominator);
  return ((denominator / g) << 32) | (a / g);
}

double angle_cosine(AngleKey key) {
  const auto a = static_cast<double>(angle_numerator(key));
  const auto b = static_cast<double>(angle_denominator(key));
  return std::cos(2.0 * std::numbers::pi * a / b);
}

NodeSet::NodeSet(std::size_t dim, std::vector<AngleKey> flat_keys) : dim_(dim) {
  if (dim == 0 || flat_keys.size() % dim != 0) throw ArgumentError("malformed node keys");
  const auto order = sorted_rows(flat_keys, dim);
  keys_.reserve(flat_keys.size());
  std::size_t previous = 0;
  bool first = true;
  for (std::size_t row : order) {
    if (!first && rows_equal(flat_keys, dim, previous, row)) continue;
    keys_.insert(keys_.end(), flat_keys.begin() + row * dim, flat_keys.begin() + (row + 1) * dim);
    previous = row;
    first = false;
  }
}

std::vector<double> NodeSet::point(std::size_t i) const {
  std::vector<double> x;
  x.reserve(dim_);
  for (AngleKey k : key(i)) x.push_back(angle_cosine(k));
  return x;
}

bool NodeSet::contains(std::span<const AngleKey> probe) const {
  if (probe.size() != dim_) return false;
  std::size_t lo = 0;
  std::size_t hi = size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    auto row = key(mid);
    if (std::lexicographical_compare(row.begin(), row.end(), probe.begin(), probe.end())) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return lo < size() && std::ranges::equal(key(lo), probe);
}

std::vector<AngleKey> lattice_point_key(const Rank1Lattice& lattice, std::uint64_t j) {
  std::vector<AngleKey> out;
  out.reserve(lattice.dim());
  append_point_keys(lattice, j % lattice.size(), out);
  return out;
}

NodeSet cosine_nodes(const Rank1Lattice& lattice) {
  std::vector<AngleKey> keys;
  const std::uint64_t half = lattice.size() / 2;
  keys.reserve((half + 1) * lattice.dim());
  for (std::uint64_t j = 0; j <= half; ++j) append_point_keys(lattice, j, keys);
  return NodeSet(lattice.dim(), std::move(keys));
}

NodeSet union_nodes(std::span<const Rank1Lattice> lattices) {
  if (lattices.empty()) throw ArgumentError("union_nodes needs at least one lattice");
  const std::size_t d = lattices.front().dim();
  std::vector<AngleKey> keys;
  for (const auto& lattice : lattices) {
    if (lattice.dim() != d) throw ArgumentError("union_nodes: lattices differ in dimension");
    const std::uint64_t half = lattice.size() / 2;
    for (std::uint64_t j = 0; j <= half; ++j) append_point_keys(lattice, j, keys);
  }
  return NodeSet(d, std::move(keys));
}

std::vector<std::vector<std::uint32_t>> sample_multiplicity(std::span<const Rank1Lattice> lattices) {
  if (lattices.empty()) return {};
  const std::size_t d = lattices.front().dim();
  std::vector<AngleKey> keys;
  std::vector<std::pair<std::size_t, std::uint64_t>> owner;
  for (std::size_t l = 0; l < lattices.size(); ++l) {
    if (lattices[l].dim() != d) throw ArgumentError("sample_multiplicity: dimension mismatch");
    for (std::uint64_t j = 0; j < lattices[l].size(); ++j) {
      append_point_keys(lattices[l], j, keys);
      owner.emplace_back(l, j);
    }
  }
  std::vector<std::vector<std::uint32_t>> result(lattices.size());
  for (std::size_t l = 0; l < lattices.size(); ++l) result[l].assign(lattices[l].size(), 0);

  const auto order = sorted_rows(keys, d);
  for (std::size_t begin = 0; begin < order.size();) {
    std::size_t end = begin + 1;
    while (end < order.size() && rows_equal(keys, d, order[begin], order[end])) ++end;
    for (std::size_t i = begin; i < end; ++i) {
      const auto [l, j] = owner[order[i]];
      result[l][j] = static_cast<std::uint32_t>(end - begin);
    }
    begin = end;
  }
  return result;
}

MirrorTable::MirrorTable(const IndexSet& set) : set_(set) {
  const std::size_t n = set_.size();
  offsets_.reserve(n + 1);
  support_offsets_.reserve(n + 1);
  offsets_.push_back(0);
  support_offsets_.push_back(0);
  for (std::size_t k = 0; k < n; ++k) {
    auto freq = set_[k];
    for (std::size_t i = 0; i < freq.size(); ++i) {
      if (freq[i] == 0) continue;
      support_pos_.push_back(static_cast<std::uint32_t>(i));
      support_val_.push_back(freq[i]);
    }
    const std::uint32_t nnz = static_cast<std::uint32_t>(support_pos_.size()) - support_offsets_.back();
    if (nnz >= 40) throw CapacityError("too many nonzero entries for mirror enumeration");
    support_offsets_.push_back(static_cast<std::uint32_t>(support_pos_.size()));
    offsets_.push_back(offsets_.back() + (std::uint64_t{1} << nnz));
  }
}

void MirrorTable::residues(const Rank1Lattice& lattice, std::vector<std::uint32_t>& out) const {
  if (lattice.dim() != set_.dim()) throw ArgumentError("lattice and index set differ in dimension");
  const std::uint64_t m = lattice.size();
  const auto z = lattice.generator();
  out.resize(mirror_size());
  std::uint32_t* dst = out.data();
  for (std::size_t k = 0; k + 1 < support_offsets_.size(); ++k) {
    dst[0] = 0;
    std::uint64_t filled = 1;
    for (std::uint32_t s = support_offsets_[k]; s < support_offsets_[k + 1]; ++s) {
      const std::uint64_t a =
          static_cast<std::uint64_t>(support_val_[s]) * static_cast<std::uint64_t>(z[support_pos_[s]]) % m;
      const std::uint64_t neg = (m - a) % m;
      // Pattern bit for this support position: clear -> +a, set -> -a.
      for (std::uint64_t p = 0; p < filled; ++p) {
        const std::uint64_t base = dst[p];
        dst[p + filled] = static_cast<std::uint32_t>((base + neg) % m);
        dst[p] = static_cast<std::uint32_t>((base + a) % m);
      }
      filled *= 2;
    }
    dst += filled;
  }
}

std::vector<std::uint32_t> MirrorTable::covered(const Rank1Lattice& lattice, AliasRule rule,
                                                Method method) const {
  std::vector<std::uint32_t> res;
  residues(lattice, res);
  const std::uint64_t m = lattice.size();
  const std::size_t n = set_.size();
  if (method == Method::automatic) {
    method = (m <= 8 * res.size() + (1U << 16)) ? Method::counting : Method::sorting;
  }

  std::vector<std::uint32_t> result;
  if (method == Method::counting) {
    if (rule == AliasRule::unique) {
      std::vector<std::uint8_t> count(m, 0);
      for (std::uint32_t r : res) count[r] = static_cast<std::uint8_t>(std::min(2, count[r] + 1));
      for (std::size_t k = 0; k < n; ++k) {
        for (std::uint64_t p = offsets_[k]; p < offsets_[k + 1]; ++p) {
          if (count[res[p]] == 1) {
            result.push_back(static_cast<std::uint32_t>(k));
            break;
          }
        }
      }
    } else {
      // owner: -1 empty, -2 shared by different sources, else the single source
      std::vector<std::int32_t> owner(m, -1);
      for (std::size_t k = 0; k < n; ++k) {
        const auto src = static_cast<std::int32_t>(k);
        for (std::uint64_t p = offsets_[k]; p < offsets_[k + 1]; ++p) {
          std::int32_t& o = owner[res[p]];
          if (o == -1) {
            o = src;
          } else if (o != src) {
            o = -2;
          }
        }
      }
      for (std::size_t k = 0; k < n; ++k) {
        for (std::uint64_t p = offsets_[k]; p < offsets_[k + 1]; ++p) {
          if (owner[res[p]] == static_cast<std::int32_t>(k)) {
            result.push_back(static_cast<std::uint32_t>(k));
            break;
          }
        }
      }
    }
    return result;
  }

  // Sort-and-scan over (residue, source) pairs.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  pairs.reserve(res.size());
  for (std::size_t k = 0; k < n; ++k) {
    for (std::uint64_t p = offsets_[k]; p < offsets_[k + 1]; ++p) {
      pairs.emplace_back(res[p], static_cast<std::uint32_t>(k));
    }
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<bool> hit(n, false);
  for (std::size_t begin = 0; begin < pairs.size();) {
    std::size_t end = begin + 1;
    while (end < pairs.size() && pairs[end].first == pairs[begin].first) ++end;
    // sorted by source within a class, so a single-source class has equal ends
    const bool alias_free = rule == AliasRule::unique ? (end - begin == 1)
                                                      : (pairs[begin].second == pairs[end - 1].second);
    if (alias_free) hit[pairs[begin].second] = true;
    begin = end;
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (hit[k]) result.push_back(static_cast<std::uint32_t>(k));
  }
  return result;
}

namespace {

AliasReport make_report(const IndexSet& set, const Rank1Lattice& lattice, AliasRule rule,
                        bool keep_residues) {
  const MirrorTable table(set);
  AliasReport report{lattice, table.covered(lattice, rule), {}};
  if (keep_residues) table.residues(lattice, report.residues);
  return report;
}

}  // namespace

AliasReport determine_J(const IndexSet& set, const Rank1Lattice& lattice, bool keep_residues) {
  return make_report(set, lattice, AliasRule::unique, keep_residues);
}

AliasReport determine_J_ring(const IndexSet& set, const Rank1Lattice& lattice, bool keep_residues) {
  return make_report(set, lattice, AliasRule::ring, keep_residues);
}

}  // namespace chebdisc
