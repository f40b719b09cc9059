#include "chebdisc/numtheory.hpp"

#include <algorithm>
#include <cmath>

#include "chebdisc/error.hpp"
#include "wide.hpp"

namespace chebdisc {
namespace {

using detail::u128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

std::vector<std::uint64_t> small_primes_upto(std::uint64_t limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint64_t> primes;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

constexpr std::uint64_t kSegment = 1U << 20;

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  // These witnesses are deterministic for all n < 2^64.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

std::uint64_t next_prime(double x) {
  if (!(x < 1.8e19)) throw CapacityError("next_prime argument out of range");
  if (x < 2.0) return 2;
  auto candidate = static_cast<std::uint64_t>(std::floor(x)) + 1;
  while (!is_prime(candidate)) ++candidate;
  return candidate;
}

PrimeRange primes_in(std::uint64_t lo, std::uint64_t hi) {
  if (lo < 3 || lo > hi) throw ArgumentError("primes_in requires 3 <= lo <= hi");
  PrimeRange range{lo, hi, {}};
  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(hi))) + 1;
  const std::vector<std::uint64_t> base = small_primes_upto(root);

  std::vector<bool> composite;
  for (std::uint64_t start = lo; start <= hi; start += kSegment) {
    const std::uint64_t stop = std::min(hi, start + kSegment - 1);
    composite.assign(stop - start + 1, false);
    for (std::uint64_t p : base) {
      if (p * p > stop) break;
      std::uint64_t first = std::max(p * p, (start + p - 1) / p * p);
      for (std::uint64_t j = first; j <= stop; j += p) composite[j - start] = true;
    }
    for (std::uint64_t v = start; v <= stop; ++v) {
      if (!composite[v - start] && v >= 2) range.primes.push_back(v);
    }
    if (stop == hi) break;
  }
  return range;
}

std::uint64_t residue(std::span<const std::int32_t> h, std::span<const std::int64_t> z,
                      std::uint64_t modulus) {
  if (h.size() != z.size()) throw ArgumentError("residue: dimension mismatch");
  if (modulus == 0) throw ArgumentError("residue: modulus must be positive");
  detail::i128 acc = 0;
  for (std::size_t i = 0; i < h.size(); ++i) acc += static_cast<detail::i128>(h[i]) * z[i];
  const auto m = static_cast<detail::i128>(modulus);
  acc %= m;
  if (acc < 0) acc += m;
  return static_cast<std::uint64_t>(acc);
}

}  // namespace chebdisc
