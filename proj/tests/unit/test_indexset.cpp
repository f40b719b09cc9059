#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "chebdisc/error.hpp"
#include "chebdisc/indexset.hpp"
#include "oracles.hpp"

using namespace chebdisc;

namespace {

bool in_l1(const FrequencyVector& k, int n) {
  long long s = 0;
  for (auto v : k) s += v;
  return s <= n;
}

bool in_hc(const FrequencyVector& k, int n) {
  long long p = 1;
  for (auto v : k) p *= std::max(1, v);
  return p <= n;
}

// Direct definition: k lies in some block G_{j_1} x ... x G_{j_d} with |j|_1 = n.
bool in_dhc(const FrequencyVector& k, int n) {
  int need = 0;
  for (auto v : k) {
    int j = 0;
    while (v > (j == 0 ? 0 : (1 << (j - 1)))) ++j;
    need += j;
  }
  return need <= n;
}

template <class Pred>
void check_membership(const IndexSet& set, Pred pred, int box, int draws) {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> value(0, box);
  for (int t = 0; t < draws; ++t) {
    FrequencyVector k(set.dim());
    for (auto& v : k) v = value(rng);
    EXPECT_EQ(set.contains(k), pred(k));
  }
  for (std::size_t i = 0; i < set.size(); ++i) EXPECT_TRUE(pred(set.vector(i)));
}

}  // namespace

TEST(IndexSet, SortsAndDeduplicates) {
  IndexSet set(2, std::vector<std::int32_t>{1, 0, 0, 1, 1, 0, 0, 0});
  ASSERT_EQ(set.size(), 3u);
  EXPECT_EQ(set.vector(0), (FrequencyVector{0, 0}));
  EXPECT_EQ(set.vector(1), (FrequencyVector{0, 1}));
  EXPECT_EQ(set.vector(2), (FrequencyVector{1, 0}));
  EXPECT_EQ(set.find(std::vector<std::int32_t>{0, 1}), 1u);
  EXPECT_FALSE(set.contains(std::vector<std::int32_t>{1, 1}));
}

TEST(IndexSet, RejectsInvalidInput) {
  EXPECT_THROW(IndexSet(2, std::vector<std::int32_t>{1, -1}), ArgumentError);
  EXPECT_THROW(IndexSet(2, std::vector<std::int32_t>{1, 2, 3}), ArgumentError);
  EXPECT_THROW(IndexSet(0, std::vector<std::int32_t>{}), ArgumentError);
  EXPECT_THROW(IndexSet(2, std::vector<std::int32_t>{}), ArgumentError);
}

TEST(IndexSet, SubsetKeepsOrder) {
  const auto set = make_l1_ball(2, 2);
  const std::vector<std::uint32_t> pos{1, 3, 4};
  const auto sub = set.subset(pos);
  ASSERT_EQ(sub.size(), 3u);
  for (std::size_t i = 0; i < pos.size(); ++i) EXPECT_EQ(sub.vector(i), set.vector(pos[i]));
  const std::vector<std::uint32_t> bad{3, 1};
  EXPECT_THROW(set.subset(bad), ArgumentError);
}

TEST(Generators, L1BallCardinalities) {
  EXPECT_EQ(make_l1_ball(2, 64).size(), 2145u);
  EXPECT_EQ(make_l1_ball(6, 4).size(), 210u);
  const auto zero = make_l1_ball(3, 0);
  ASSERT_EQ(zero.size(), 1u);
  EXPECT_EQ(zero.vector(0), (FrequencyVector{0, 0, 0}));
}

TEST(Generators, HyperbolicCrossCardinalities) {
  EXPECT_EQ(make_hyperbolic_cross(2, 256).size(), 1979u);
  EXPECT_EQ(make_hyperbolic_cross(6, 16).size(), 8684u);
  const auto cube = make_hyperbolic_cross(4, 1);
  EXPECT_EQ(cube.size(), 16u);
  for (std::size_t i = 0; i < cube.size(); ++i) {
    for (auto v : cube[i]) EXPECT_LE(v, 1);
  }
}

TEST(Generators, DyadicCrossCardinalities) {
  EXPECT_EQ(make_dyadic_hyperbolic_cross(3, 2).size(), 10u);
  EXPECT_EQ(make_dyadic_hyperbolic_cross(6, 1).size(), 7u);
  EXPECT_EQ(make_dyadic_hyperbolic_cross(6, 2).size(), 28u);
  EXPECT_EQ(make_dyadic_hyperbolic_cross(6, 4).size(), 264u);
  EXPECT_EQ(make_dyadic_hyperbolic_cross(6, 6).size(), 1995u);
  EXPECT_EQ(make_dyadic_hyperbolic_cross(5, 0).size(), 1u);
}

TEST(Generators, MembershipMatchesDefinition) {
  check_membership(make_l1_ball(3, 7), [](const auto& k) { return in_l1(k, 7); }, 9, 2000);
  check_membership(make_hyperbolic_cross(3, 12), [](const auto& k) { return in_hc(k, 12); }, 14, 2000);
  check_membership(make_dyadic_hyperbolic_cross(4, 5), [](const auto& k) { return in_dhc(k, 5); }, 17, 4000);
}

TEST(Generators, DyadicCrossIsDownwardClosed) {
  const auto set = make_dyadic_hyperbolic_cross(4, 5);
  for (std::size_t i = 0; i < set.size(); ++i) {
    auto k = set.vector(i);
    for (std::size_t j = 0; j < k.size(); ++j) {
      if (k[j] == 0) continue;
      auto lower = k;
      --lower[j];
      EXPECT_TRUE(set.contains(lower));
    }
  }
}

TEST(Generators, CapacityGuard) {
  EXPECT_THROW(make_l1_ball(6, 10, 100), CapacityError);
  EXPECT_NO_THROW(make_l1_ball(6, 4, 210));
}

TEST(Generators, RandomSparse) {
  const auto a = make_random_sparse(25, 2, 16, 1024, 99);
  const auto b = make_random_sparse(25, 2, 16, 1024, 99);
  EXPECT_EQ(a, b);
  ASSERT_EQ(a.size(), 16u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.nonzeros(i), 2);
    for (auto v : a[i]) EXPECT_LE(v, 1024);
  }
  const auto one = make_random_sparse(3, 3, 1, 1, 5);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one.vector(0), (FrequencyVector{1, 1, 1}));
  EXPECT_THROW(make_random_sparse(3, 3, 2, 1, 5), ArgumentError);
  EXPECT_THROW(make_random_sparse(3, 4, 1, 1, 5), ArgumentError);
  EXPECT_NE(make_random_sparse(25, 2, 16, 1024, 1), make_random_sparse(25, 2, 16, 1024, 2));
}

TEST(Mirror, CardinalityExamples) {
  EXPECT_EQ(mirror_cardinality(IndexSet(2, std::vector<std::int32_t>{0, 0})), 1u);
  EXPECT_EQ(mirror_cardinality(IndexSet(2, std::vector<std::int32_t>{0, 0, 1, 0, 1, 1})), 7u);
}

TEST(Mirror, CardinalityMatchesBruteForce) {
  for (const auto& set : {make_l1_ball(6, 4), make_hyperbolic_cross(3, 20), make_dyadic_hyperbolic_cross(6, 4),
                          make_random_sparse(8, 3, 50, 9, 3)}) {
    const auto brute = oracle::mirror_set(set);
    EXPECT_EQ(mirror_cardinality(set), brute.size());
    std::size_t streamed = 0;
    std::set<oracle::Vec> seen;
    std::set<FrequencyVector> sources;
    for (const auto& h : mirror_stream(set)) {
      ++streamed;
      seen.insert(oracle::Vec(h.entries.begin(), h.entries.end()));
      FrequencyVector abs_h;
      for (auto v : h.entries) abs_h.push_back(std::abs(v));
      EXPECT_EQ(abs_h, set.vector(h.source));
      sources.insert(abs_h);
    }
    EXPECT_EQ(streamed, brute.size());
    EXPECT_EQ(seen, brute);
    EXPECT_EQ(sources.size(), set.size());
  }
}

TEST(Mirror, StreamSmallExamples) {
  IndexSet one(2, std::vector<std::int32_t>{1, 1});
  std::set<oracle::Vec> got;
  for (const auto& h : mirror_stream(one)) got.insert(oracle::Vec(h.entries.begin(), h.entries.end()));
  EXPECT_EQ(got, (std::set<oracle::Vec>{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}));
  IndexSet two(2, std::vector<std::int32_t>{0, 0, 1, 0});
  EXPECT_EQ(std::distance(mirror_stream(two).begin(), mirror_stream(two).end()), 3);
}

TEST(Expansion, Examples) {
  EXPECT_EQ(expansion(IndexSet(2, std::vector<std::int32_t>{0, 0})), 0);
  EXPECT_EQ(expansion(make_l1_ball(2, 64)), 64);
  EXPECT_EQ(expansion(make_hyperbolic_cross(2, 256)), 256);
}
