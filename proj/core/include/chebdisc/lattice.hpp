#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "chebdisc/indexset.hpp"

namespace chebdisc {

/// Rank-1 lattice {j z / M mod 1 : j = 0, ..., M-1} on the torus T^d.
class Rank1Lattice {
 public:
  /// Entries of z are reduced into [0, M-1]. Throws ArgumentError for an empty
  /// generator or M < 1, CapacityError for M >= 2^32.
  Rank1Lattice(std::vector<std::int64_t> generator, std::uint64_t size);

  std::span<const std::int64_t> generator() const noexcept { return z_; }
  std::uint64_t size() const noexcept { return size_; }
  std::size_t dim() const noexcept { return z_.size(); }

  bool operator==(const Rank1Lattice& other) const = default;

 private:
  std::vector<std::int64_t> z_;
  std::uint64_t size_;
};

/// Exact key of one coordinate of a cosine transformed node: the reduced
/// fraction a/b of the canonical angle t in [0, 1/2], packed as (b << 32) | a.
/// Two nodes coincide iff all their coordinate keys coincide, because
/// cos(2 pi t) is injective on [0, 1/2].
using AngleKey = std::uint64_t;

/// Key of the angle numerator/denominator (any integers, denominator > 0).
AngleKey make_angle_key(std::uint64_t numerator, std::uint64_t denominator);
inline std::uint64_t angle_numerator(AngleKey key) noexcept { return key & 0xffffffffULL; }
inline std::uint64_t angle_denominator(AngleKey key) noexcept { return key >> 32; }
/// cos(2 pi a / b) for the key a/b.
double angle_cosine(AngleKey key);

/// A duplicate-free set of cosine transformed nodes in [-1,1]^d, stored by
/// exact keys in lexicographic key order.
class NodeSet {
 public:
  /// Sorts and deduplicates row-major keys (d per node).
  NodeSet(std::size_t dim, std::vector<AngleKey> flat_keys);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return dim_ == 0 ? 0 : keys_.size() / dim_; }
  std::span<const AngleKey> key(std::size_t i) const noexcept {
    return {keys_.data() + i * dim_, dim_};
  }
  /// The node itself, x = cos(2 pi t) componentwise.
  std::vector<double> point(std::size_t i) const;
  bool contains(std::span<const AngleKey> key) const;

 private:
  std::size_t dim_;
  std::vector<AngleKey> keys_;
};

/// Keys of lattice point j (not deduplicated).
std::vector<AngleKey> lattice_point_key(const Rank1Lattice& lattice, std::uint64_t j);

/// CosSet of a single lattice; at most floor(M/2) + 1 nodes (since j and M-j
/// give the same node) and always containing (1, ..., 1).
NodeSet cosine_nodes(const Rank1Lattice& lattice);

/// Exact union of the cosine transformed lattices. Throws ArgumentError on
/// dimension mismatch or an empty list.
NodeSet union_nodes(std::span<const Rank1Lattice> lattices);

/// For every lattice l and every j in [0, M_l), how often the node of sample
/// (l, j) occurs in the full multiset of samples over all lattices.
std::vector<std::vector<std::uint32_t>> sample_multiplicity(std::span<const Rank1Lattice> lattices);

/// Which mirrored frequencies count as alias free.
enum class AliasRule {
  /// J_l: the residue of h is shared with no other element of M(I).
  unique,
  /// The refined set: the residue class of h contains no element of M(I \ {|h|}).
  ring,
};

/// Covered set of a lattice: positions into I (ascending) of the vectors k
/// that have at least one alias free mirror image h in M({k}).
struct AliasReport {
  Rank1Lattice lattice;
  std::vector<std::uint32_t> covered;
  /// h . z mod M in mirror stream order; only filled on request.
  std::vector<std::uint32_t> residues;
};

/// Precomputed support structure of an index set for fast residue
/// enumeration over its mirrored set. Immutable and shareable across threads.
class MirrorTable {
 public:
  explicit MirrorTable(const IndexSet& set);

  const IndexSet& index_set() const noexcept { return set_; }
  std::size_t mirror_size() const noexcept { return offsets_.back(); }
  /// Mirror stream positions [offset(k), offset(k+1)) belong to source k.
  std::uint64_t offset(std::size_t k) const noexcept { return offsets_[k]; }
  int nonzeros(std::size_t k) const noexcept {
    return static_cast<int>(support_offsets_[k + 1] - support_offsets_[k]);
  }

  /// h . z mod M for every h of the mirror stream, in stream order.
  void residues(const Rank1Lattice& lattice, std::vector<std::uint32_t>& out) const;

  enum class Method { automatic, counting, sorting };

  /// Positions of I covered by the lattice under the given rule. `counting`
  /// uses an O(M) occupancy table, `sorting` sorts the residues; `automatic`
  /// picks counting unless M is much larger than |M(I)|.
  std::vector<std::uint32_t> covered(const Rank1Lattice& lattice, AliasRule rule,
                                     Method method = Method::automatic) const;

 private:
  IndexSet set_;
  std::vector<std::uint64_t> offsets_;
  std::vector<std::uint32_t> support_offsets_;
  std::vector<std::uint32_t> support_pos_;
  std::vector<std::int32_t> support_val_;
};

/// Algorithm for J_l: covered = |k| for all k in M(I) with a residue k . z mod M
/// not shared by any other element of M(I).
AliasReport determine_J(const IndexSet& set, const Rank1Lattice& lattice,
                        bool keep_residues = false);

/// Refined covered set: k in M(I) survives unless its residue class contains an
/// element of M(I \ {|k|}). Always a superset of determine_J's covered set.
AliasReport determine_J_ring(const IndexSet& set, const Rank1Lattice& lattice,
                             bool keep_residues = false);

}  // namespace chebdisc
