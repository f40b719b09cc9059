#include "chebdisc/indexset.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "chebdisc/error.hpp"
#include "chebdisc/rng.hpp"

namespace chebdisc {
namespace {

bool row_less(const std::int32_t* a, const std::int32_t* b, std::size_t d) {
  return std::lexicographical_compare(a, a + d, b, b + d);
}

void check_capacity(std::size_t size, std::size_t capacity) {
  if (size > capacity) {
    throw CapacityError("index set exceeds capacity of " + std::to_string(capacity) +
                        " vectors");
  }
}

// Depth-first enumeration in lexicographic order. `budget` is threaded through
// by the caller-supplied admissibility rule.
template <class Next>
void enumerate(std::size_t d, std::size_t capacity, std::vector<std::int32_t>& out,
               std::vector<std::int32_t>& prefix, long long budget, Next next_budget) {
  const std::size_t pos = prefix.size();
  if (pos == d) {
    check_capacity(out.size() / d + 1, capacity);
    out.insert(out.end(), prefix.begin(), prefix.end());
    return;
  }
  for (std::int32_t v = 0;; ++v) {
    const long long rest = next_budget(budget, v);
    if (rest < 0) break;
    prefix.push_back(v);
    enumerate(d, capacity, out, prefix, rest, next_budget);
    prefix.pop_back();
  }
}

// Smallest dyadic level j with k <= 2^(j-1) (level 0 holds only 0).
int dyadic_level(std::int32_t k) {
  if (k == 0) return 0;
  int j = 1;
  while ((std::int64_t{1} << (j - 1)) < k) ++j;
  return j;
}

}  // namespace

IndexSet::IndexSet(std::size_t dim, std::vector<std::int32_t> flat) : dim_(dim) {
  if (dim == 0) throw ArgumentError("index set dimension must be positive");
  if (flat.empty() || flat.size() % dim != 0) {
    throw ArgumentError("index set needs at least one vector of length " + std::to_string(dim));
  }
  if (std::any_of(flat.begin(), flat.end(), [](std::int32_t v) { return v < 0; })) {
    throw ArgumentError("frequency vectors must be nonnegative");
  }
  const std::size_t n = flat.size() / dim;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return row_less(flat.data() + a * dim, flat.data() + b * dim, dim);
  });
  data_.reserve(flat.size());
  for (std::size_t i : order) {
    const std::int32_t* row = flat.data() + i * dim;
    if (!data_.empty() && std::equal(row, row + dim, data_.end() - dim)) continue;
    data_.insert(data_.end(), row, row + dim);
  }
}

IndexSet::IndexSet(const std::size_t dim, const std::vector<FrequencyVector>& freqs)
    : IndexSet(dim, [&] {
        std::vector<std::int32_t> flat;
        flat.reserve(freqs.size() * dim);
        for (const auto& k : freqs) {
          if (k.size() != dim) throw ArgumentError("frequency vector has wrong length");
          flat.insert(flat.end(), k.begin(), k.end());
        }
        return flat;
      }()) {}

IndexSet::IndexSet(Presorted, std::size_t dim, std::vector<std::int32_t> flat)
    : dim_(dim), data_(std::move(flat)) {}

FrequencyVector IndexSet::vector(std::size_t i) const {
  auto k = (*this)[i];
  return {k.begin(), k.end()};
}

int IndexSet::nonzeros(std::size_t i) const noexcept {
  auto k = (*this)[i];
  return static_cast<int>(std::count_if(k.begin(), k.end(), [](std::int32_t v) { return v != 0; }));
}

std::optional<std::size_t> IndexSet::find(std::span<const std::int32_t> k) const {
  if (k.size() != dim_) return std::nullopt;
  std::size_t lo = 0;
  std::size_t hi = size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (row_less(data_.data() + mid * dim_, k.data(), dim_)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < size() && std::equal(k.begin(), k.end(), data_.data() + lo * dim_)) return lo;
  return std::nullopt;
}

IndexSet IndexSet::subset(std::span<const std::uint32_t> positions) const {
  if (positions.empty()) throw ArgumentError("subset must not be empty");
  std::vector<std::int32_t> flat;
  flat.reserve(positions.size() * dim_);
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (positions[i] >= size() || (i > 0 && positions[i] <= positions[i - 1])) {
      throw ArgumentError("subset positions must be increasing and in range");
    }
    auto k = (*this)[positions[i]];
    flat.insert(flat.end(), k.begin(), k.end());
  }
  return IndexSet(Presorted{}, dim_, std::move(flat));
}

IndexSet make_l1_ball(std::size_t d, int n, std::size_t capacity) {
  if (d == 0 || n < 0) throw ArgumentError("l1 ball needs d >= 1 and n >= 0");
  std::vector<std::int32_t> out;
  std::vector<std::int32_t> prefix;
  enumerate(d, capacity, out, prefix, n,
            [](long long budget, std::int32_t v) { return budget - v; });
  return IndexSet(d, std::move(out));
}

IndexSet make_hyperbolic_cross(std::size_t d, int n, std::size_t capacity) {
  if (d == 0 || n < 1) throw ArgumentError("hyperbolic cross needs d >= 1 and n >= 1");
  // budget = largest admissible product factor left for the remaining coordinates
  std::vector<std::int32_t> out;
  std::vector<std::int32_t> prefix;
  enumerate(d, capacity, out, prefix, n, [](long long budget, std::int32_t v) -> long long {
    const long long f = std::max<long long>(1, v);
    if (f > budget) return -1;
    return budget / f;
  });
  return IndexSet(d, std::move(out));
}

IndexSet make_dyadic_hyperbolic_cross(std::size_t d, int n, std::size_t capacity) {
  if (d == 0 || n < 0) throw ArgumentError("dyadic hyperbolic cross needs d >= 1 and n >= 0");
  // k lies in some block with |j|_1 = n iff the sum of the minimal dyadic levels
  // of its entries is at most n (surplus levels only enlarge a block).
  std::vector<std::int32_t> out;
  std::vector<std::int32_t> prefix;
  enumerate(d, capacity, out, prefix, n,
            [](long long budget, std::int32_t v) { return budget - dyadic_level(v); });
  return IndexSet(d, std::move(out));
}

IndexSet make_random_sparse(std::size_t d, std::size_t active, std::size_t count,
                            int max_degree, std::uint64_t seed) {
  if (active < 1 || active > d) throw ArgumentError("need 1 <= active <= d");
  if (max_degree < 1) throw ArgumentError("max_degree must be positive");
  if (count < 1) throw ArgumentError("count must be positive");
  // Number of admissible vectors: C(d, active) * max_degree^active.
  long double available = 1.0L;
  for (std::size_t i = 0; i < active; ++i) {
    available *= static_cast<long double>(d - i) / static_cast<long double>(i + 1);
    available *= static_cast<long double>(max_degree);
  }
  if (static_cast<long double>(count) > available + 0.5L) {
    throw ArgumentError("requested more random vectors than exist");
  }

  Rng rng(seed);
  std::set<FrequencyVector> drawn;
  std::vector<std::size_t> positions(d);
  while (drawn.size() < count) {
    std::iota(positions.begin(), positions.end(), 0);
    FrequencyVector k(d, 0);
    for (std::size_t i = 0; i < active; ++i) {
      const std::size_t pick = i + uniform_below(rng, d - i);
      std::swap(positions[i], positions[pick]);
      k[positions[i]] = 1 + static_cast<std::int32_t>(uniform_below(rng, max_degree));
    }
    drawn.insert(std::move(k));
  }
  return IndexSet(d, std::vector<FrequencyVector>(drawn.begin(), drawn.end()));
}

std::uint64_t mirror_cardinality(const IndexSet& set) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const int nnz = set.nonzeros(i);
    if (nnz >= 64) throw CapacityError("mirror cardinality overflows 64 bits");
    const std::uint64_t term = std::uint64_t{1} << nnz;
    if (total > ~std::uint64_t{0} - term) throw CapacityError("mirror cardinality overflows 64 bits");
    total += term;
  }
  return total;
}

std::int32_t expansion(const IndexSet& set) {
  auto flat = set.flat();
  return *std::max_element(flat.begin(), flat.end());
}

MirrorStream::iterator::iterator(const IndexSet* set, std::size_t source)
    : set_(set), source_(source) {
  load();
}

void MirrorStream::iterator::load() {
  pattern_ = 0;
  support_.clear();
  if (set_ == nullptr || source_ >= set_->size()) {
    buffer_.clear();
    return;
  }
  auto k = (*set_)[source_];
  buffer_.assign(k.begin(), k.end());
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] != 0) support_.push_back(i);
  }
}

MirrorStream::iterator& MirrorStream::iterator::operator++() {
  ++pattern_;
  if (pattern_ >= (std::uint64_t{1} << support_.size())) {
    ++source_;
    load();
    return *this;
  }
  auto k = (*set_)[source_];
  for (std::size_t i = 0; i < support_.size(); ++i) {
    const std::size_t p = support_[i];
    buffer_[p] = ((pattern_ >> i) & 1U) ? -k[p] : k[p];
  }
  return *this;
}

}  // namespace chebdisc
