#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <random>

#include "chebdisc/error.hpp"
#include "chebdisc/numtheory.hpp"
#include "oracles.hpp"

using namespace chebdisc;

TEST(NextPrime, Examples) {
  EXPECT_EQ(next_prime(12), 13u);
  EXPECT_EQ(next_prime(2), 3u);
  EXPECT_EQ(next_prime(13), 17u);
  EXPECT_EQ(next_prime(12.5), 13u);
  EXPECT_EQ(next_prime(1), 2u);
}

TEST(NextPrime, MatchesSieve) {
  const std::size_t limit = 2'000'000;
  const auto prime = oracle::sieve(limit);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> dist(1.0, 1'900'000.0);
  for (int t = 0; t < 1000; ++t) {
    const double x = t < 500 ? std::floor(dist(rng)) : dist(rng);
    std::size_t expect = static_cast<std::size_t>(std::floor(x)) + 1;
    while (!prime[expect]) ++expect;
    ASSERT_EQ(next_prime(x), expect) << "x = " << x;
  }
}

TEST(NextPrime, AgreesWithPrimeRange) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> dist(3.0, 1e7);
  for (int t = 0; t < 1000; ++t) {
    const double x = dist(rng);
    const auto p = next_prime(x);
    const auto lo = static_cast<std::uint64_t>(std::ceil(x)) + (std::ceil(x) == x ? 1 : 0);
    const auto range = primes_in(lo, p);
    ASSERT_FALSE(range.primes.empty());
    EXPECT_EQ(range.primes.front(), p);
  }
}

TEST(PrimesIn, Examples) {
  EXPECT_EQ(primes_in(3, 13).primes, (std::vector<std::uint64_t>{3, 5, 7, 11, 13}));
  EXPECT_EQ(primes_in(3, 3).primes, (std::vector<std::uint64_t>{3}));
  EXPECT_THROW(primes_in(2, 10), ArgumentError);
  EXPECT_THROW(primes_in(10, 5), ArgumentError);
}

TEST(PrimesIn, CompleteAgainstSieve) {
  const std::size_t limit = 1'000'000;
  const auto prime = oracle::sieve(limit);
  const auto range = primes_in(3, limit);
  EXPECT_EQ(range.primes.size(), 78497u);
  std::vector<std::uint64_t> expect;
  for (std::size_t p = 3; p <= limit; ++p) {
    if (prime[p]) expect.push_back(p);
  }
  EXPECT_EQ(range.primes, expect);
  // a window spanning several sieve segments
  const auto big = oracle::sieve(13'000'000);
  const auto wide = primes_in(10'000'000, 13'000'000);
  std::size_t count = 0;
  for (std::size_t p = 10'000'000; p <= 13'000'000; ++p) count += big[p] ? 1 : 0;
  EXPECT_EQ(wide.primes.size(), count);
  for (auto p : wide.primes) ASSERT_TRUE(big[p]);
}

TEST(IsPrime, LargeValues) {
  EXPECT_TRUE(is_prime(2'147'483'647ULL));
  EXPECT_TRUE(is_prime(18'446'744'073'709'551'557ULL));
  EXPECT_FALSE(is_prime(3'215'031'751ULL));  // strong pseudoprime to bases 2, 3, 5, 7
  EXPECT_FALSE(is_prime(1));
  EXPECT_TRUE(is_prime(2));
}

TEST(Residue, Examples) {
  const std::vector<std::int32_t> h{1, -1};
  const std::vector<std::int64_t> z{1, 2};
  EXPECT_EQ(residue(h, z, 5), 4u);
  const std::vector<std::int32_t> zero{0, 0};
  EXPECT_EQ(residue(zero, z, 7), 0u);
}

TEST(Residue, MatchesBigIntegerOracle) {
  using boost::multiprecision::cpp_int;
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::int32_t> hv(-1024, 1024);
  std::uniform_int_distribution<std::int64_t> zv(0, 4'000'000'000LL);
  std::uniform_int_distribution<std::uint64_t> mv(1, 4'000'000'000ULL);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t d = 1 + t % 25;
    std::vector<std::int32_t> h(d);
    std::vector<std::int64_t> z(d);
    for (auto& v : h) v = hv(rng);
    for (auto& v : z) v = zv(rng);
    const auto m = mv(rng);
    cpp_int acc = 0;
    for (std::size_t i = 0; i < d; ++i) acc += cpp_int(h[i]) * cpp_int(z[i]);
    cpp_int expect = acc % m;
    if (expect < 0) expect += m;
    ASSERT_EQ(cpp_int(residue(h, z, m)), expect);
    // translation invariance
    auto shifted = z;
    shifted[t % d] += static_cast<std::int64_t>(m);
    ASSERT_EQ(residue(h, shifted, m), residue(h, z, m));
  }
}
