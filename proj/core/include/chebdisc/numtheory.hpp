#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace chebdisc {

/// All primes in [lo, hi], ascending.
struct PrimeRange {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::vector<std::uint64_t> primes;
};

/// Deterministic primality test for 64-bit integers.
bool is_prime(std::uint64_t n);

/// Smallest prime strictly greater than x.
std::uint64_t next_prime(double x);

/// Complete list of primes in [lo, hi] (segmented sieve). Requires 3 <= lo <= hi.
PrimeRange primes_in(std::uint64_t lo, std::uint64_t hi);

/// ((h . z) mod M + M) mod M, accumulated in 128 bits.
std::uint64_t residue(std::span<const std::int32_t> h, std::span<const std::int64_t> z,
                      std::uint64_t modulus);

}  // namespace chebdisc
