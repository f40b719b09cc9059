#pragma once

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <optional>
#include <span>
#include <vector>

namespace chebdisc {

/// Chebyshev degrees per coordinate, all entries nonnegative.
using FrequencyVector = std::vector<std::int32_t>;

/// Default guard against accidentally exponential generator requests.
inline constexpr std::size_t kDefaultCapacity = 100'000'000;

/// A finite set of frequency vectors in N_0^d.
///
/// Vectors are stored contiguously in lexicographic order without duplicates.
/// The storage order is the column order of every matrix built over the set,
/// and positions into it ("index positions") are how subsets are referenced
/// throughout the library.
class IndexSet {
 public:
  /// Builds a set from row-major entries (size must be a multiple of dim).
  /// Sorts and removes duplicates. Throws ArgumentError on negative entries,
  /// dim == 0, or an empty set.
  IndexSet(std::size_t dim, std::vector<std::int32_t> flat);
  IndexSet(std::size_t dim, const std::vector<FrequencyVector>& freqs);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return data_.size() / dim_; }

  std::span<const std::int32_t> operator[](std::size_t i) const noexcept {
    return {data_.data() + i * dim_, dim_};
  }
  FrequencyVector vector(std::size_t i) const;
  std::span<const std::int32_t> flat() const noexcept { return data_; }

  /// Number of nonzero entries of the i-th vector.
  int nonzeros(std::size_t i) const noexcept;

  /// Position of k in the storage order, if present.
  std::optional<std::size_t> find(std::span<const std::int32_t> k) const;
  bool contains(std::span<const std::int32_t> k) const { return find(k).has_value(); }

  /// The sub-set at the given (strictly increasing) positions; keeps the order.
  IndexSet subset(std::span<const std::uint32_t> positions) const;

  bool operator==(const IndexSet& other) const = default;

 private:
  struct Presorted {};
  IndexSet(Presorted, std::size_t dim, std::vector<std::int32_t> flat);

  std::size_t dim_;
  std::vector<std::int32_t> data_;
};

/// {k in N_0^d : |k|_1 <= n}.
IndexSet make_l1_ball(std::size_t d, int n, std::size_t capacity = kDefaultCapacity);

/// {k in N_0^d : prod_j max(1, k_j) <= n}.
IndexSet make_hyperbolic_cross(std::size_t d, int n, std::size_t capacity = kDefaultCapacity);

/// Union over all j in N_0^d with |j|_1 = n of the dyadic blocks
/// G_{j_1} x ... x G_{j_d}, G_0 = {0}, G_j = {0, ..., 2^(j-1)}. The result is
/// downward closed.
IndexSet make_dyadic_hyperbolic_cross(std::size_t d, int n,
                                      std::size_t capacity = kDefaultCapacity);

/// `count` distinct vectors with exactly `active` nonzero entries each, nonzero
/// values uniform in [1, max_degree]. Deterministic in `seed`.
IndexSet make_random_sparse(std::size_t d, std::size_t active, std::size_t count,
                            int max_degree, std::uint64_t seed);

/// |M(I)| = sum_k 2^{|k|_0}, without enumerating the mirrored set.
/// Throws CapacityError on 64-bit overflow.
std::uint64_t mirror_cardinality(const IndexSet& set);

/// N_I = max_k |k|_inf.
std::int32_t expansion(const IndexSet& set);

/// One element h of the mirrored set M(I), with the position of |h| in I.
struct SignedFrequency {
  std::span<const std::int32_t> entries;
  std::size_t source;
};

/// Enumerates M(I) = {(s_1 k_1, ..., s_d k_d) : k in I, s in {-1,1}^d} without
/// materializing it. Every element is produced exactly once: the sources are
/// visited in storage order and, for a source with nonzero positions
/// p_0 < p_1 < ..., the sign pattern b = 0, 1, ..., 2^{|k|_0}-1 flips the sign
/// at p_i iff bit i of b is set.
class MirrorStream {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = SignedFrequency;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = SignedFrequency;

    iterator() = default;
    SignedFrequency operator*() const { return {buffer_, source_}; }
    iterator& operator++();
    void operator++(int) { ++*this; }
    bool operator==(const iterator& other) const {
      return source_ == other.source_ && pattern_ == other.pattern_;
    }

   private:
    friend class MirrorStream;
    iterator(const IndexSet* set, std::size_t source);
    void load();

    const IndexSet* set_ = nullptr;
    std::size_t source_ = 0;
    std::uint64_t pattern_ = 0;
    std::vector<std::size_t> support_;
    std::vector<std::int32_t> buffer_;
  };

  explicit MirrorStream(const IndexSet& set) : set_(&set) {}
  iterator begin() const { return iterator(set_, 0); }
  iterator end() const { return iterator(set_, set_->size()); }

 private:
  const IndexSet* set_;
};

inline MirrorStream mirror_stream(const IndexSet& set) { return MirrorStream(set); }

}  // namespace chebdisc
