#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "npset/density.hpp"

using namespace npset::density;
using npset::numth::u64;

namespace {

// Exact density of multiples: count over one full period lcm(gens).
Rational brute_density(const std::vector<u64>& gens) {
  u64 period = 1;
  for (u64 g : gens) period = std::lcm(period, g);
  u64 hits = 0;
  for (u64 n = 1; n <= period; ++n)
    hits += std::any_of(gens.begin(), gens.end(), [n](u64 g) { return n % g == 0; });
  return Rational(BigInt(hits), BigInt(period));
}

Rational dec(const char* s) {
  // "0.465673" -> 465673/10^6
  std::string t(s);
  const auto dot = t.find('.');
  const std::string frac = t.substr(dot + 1);
  std::string digits = t.substr(0, dot) + frac;
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));  // a leading 0 would mean octal
  return Rational(BigInt(digits), boost::multiprecision::pow(BigInt(10), frac.size()));
}

}  // namespace

TEST(Density, GeneratorSetRemovesMultiples) {
  const auto g = GeneratorSet::make({6, 3, 9, 10, 5, 3});
  EXPECT_EQ(g.generators, (std::vector<u64>{3, 5}));
  EXPECT_THROW(GeneratorSet::make({1, 4}), std::invalid_argument);
}

TEST(Density, ExactWithoutPruningMatchesPeriodCount) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 60; ++t) {
    std::vector<u64> gens;
    for (int i = 0; i < 1 + static_cast<int>(rng() % 5); ++i) gens.push_back(2 + rng() % 40);
    const auto set = GeneratorSet::make(gens);
    const auto rep = multiples_density(set, ~u64{0});
    ASSERT_EQ(rep.interval.lo, rep.interval.hi);
    ASSERT_EQ(rep.interval.lo, brute_density(set.generators));
    ASSERT_EQ(rep.pruned_branches, 0u);
  }
}

TEST(Density, PrunedEnclosureContainsExactValue) {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 60; ++t) {
    std::vector<u64> gens;
    for (int i = 0; i < 2 + static_cast<int>(rng() % 5); ++i) gens.push_back(2 + rng() % 30);
    const auto set = GeneratorSet::make(gens);
    const Rational exact = brute_density(set.generators);
    for (u64 cap : {10ull, 50ull, 200ull, 1000ull}) {
      const auto rep = multiples_density(set, cap);
      ASSERT_TRUE(rep.interval.contains(exact)) << t << " cap " << cap;
      ASSERT_LE(rep.interval.lo, rep.interval.hi);
    }
  }
}

TEST(Density, DecimalRounding) {
  EXPECT_EQ(to_decimal(Rational(1, 3), 4, false), "0.3333");
  EXPECT_EQ(to_decimal(Rational(1, 3), 4, true), "0.3334");
  EXPECT_EQ(to_decimal(Rational(1, 4), 2, true), "0.25");
  EXPECT_EQ(to_decimal(Rational(-1, 3), 2, false), "-0.34");
  EXPECT_EQ(rational_string(Rational(6, 8)), "3/4");
}

TEST(Density, TrivialSetAtTwo) {
  const auto iv = delta_trivial(2, 31);
  EXPECT_LT(iv.width(), Rational(1, 1000000));
  // 0.451699 is a six-digit rounding, so it may sit half a unit outside.
  const Rational half_unit(1, 2000000);
  EXPECT_LE(iv.lo - half_unit, dec("0.451699"));
  EXPECT_GE(iv.hi + half_unit, dec("0.451699"));
  EXPECT_LE(dec("0.4516991"), iv.lo);
  EXPECT_LE(iv.hi, dec("0.4516992"));
}

// The generators 2^k - 1 for distinct primes k are pairwise coprime, so the
// truncated product is exactly the density of their multiples.
TEST(Density, TrivialSetAgreesWithMultiplesDensity) {
  std::vector<u64> gens;
  for (unsigned k : {2u, 3u, 5u, 7u}) gens.push_back((u64{1} << k) - 1);
  const auto rep = multiples_density(GeneratorSet::make(gens), ~u64{0});
  EXPECT_EQ(rep.interval.lo, brute_density(gens));
  const auto iv = delta_trivial(2, 7);
  EXPECT_EQ(iv.lo, rep.interval.lo);
}

TEST(Density, SGeneratorsBelowCap) {
  const auto g = s2_generators(100000);
  EXPECT_EQ(g.generators, (std::vector<u64>{3, 7, 31, 73, 85, 127, 2047, 4369, 8191}));
  EXPECT_EQ(s2_generators(kDefaultCap).generators.size(), 26u);
}

TEST(Density, SSetInterval) {
  const auto rep = delta_S(kDefaultCap, kDefaultCap);
  const Rational target = dec("0.465673"), tol(1, 10000);
  EXPECT_LE(rep.interval.lo, target + tol);
  EXPECT_GE(rep.interval.hi, target - tol);
  EXPECT_LT(rep.interval.width(), Rational(1, 1000000000));
}

TEST(Density, N2LowerInterval) {
  const auto rep = delta_N2_lower(kDefaultCap, kDefaultCap);
  EXPECT_GE(rep.interval.lo, dec("0.46585"));
  EXPECT_LE(rep.interval.lo, dec("0.46600"));
  const Rational target = dec("0.465926"), tol(1, 10000);
  EXPECT_LE(rep.interval.lo, target + tol);
  EXPECT_GE(rep.interval.hi, target - tol);
}

TEST(Density, MonotoneInGenerators) {
  const auto s = delta_S(kDefaultCap, kDefaultCap);
  const auto n = delta_N2_lower(kDefaultCap, kDefaultCap);
  EXPECT_GE(n.interval.lo, s.interval.lo);
}

TEST(Density, SGeneratorsAtSmallCaps) {
  EXPECT_EQ(s2_generators(3).generators, (std::vector<u64>{3}));
  EXPECT_EQ(s2_generators(100).generators, (std::vector<u64>{3, 7, 31, 73, 85}));
  EXPECT_EQ(s2_generators(5000).generators, (std::vector<u64>{3, 7, 31, 73, 85, 127, 2047, 4369}));
  EXPECT_THROW(s2_generators(2), std::invalid_argument);
}

TEST(Density, SSetAtCapThreeIsOneThirdPlusTail) {
  const auto rep = delta_S(3, kDefaultCap);
  EXPECT_EQ(rep.interval.lo, Rational(1, 3));
  EXPECT_EQ(rep.interval.hi, Rational(1, 3) + s2_tail(3));
  EXPECT_LT(s2_tail(3), Rational(1, 2));
}

TEST(Density, NestedCapsGiveOverlappingIntervals) {
  RationalInterval prev = delta_S(3, kDefaultCap).interval;
  for (u64 cap : std::initializer_list<u64>{100, 5000, 1000000, kDefaultCap}) {
    const auto iv = delta_S(cap, kDefaultCap).interval;
    EXPECT_LE(prev.lo, iv.hi);
    EXPECT_LE(iv.lo, prev.hi);
    EXPECT_GE(iv.lo, prev.lo);
    prev = iv;
  }
}

TEST(Density, PermutationInvariantAndMonotoneAgainstSieve) {
  constexpr u64 kLimit = 10'000'000;
  std::mt19937_64 rng(33);
  for (int t = 0; t < 4; ++t) {
    std::vector<u64> gens;
    for (int i = 0; i < 6; ++i) gens.push_back(2 + rng() % 200);
    auto shuffled = gens;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto a = multiples_density(GeneratorSet::make(gens), 100000);
    const auto b = multiples_density(GeneratorSet::make(shuffled), 100000);
    ASSERT_EQ(a.interval.lo, b.interval.lo);
    ASSERT_EQ(a.interval.hi, b.interval.hi);

    std::vector<std::uint8_t> hit(kLimit + 1, 0);
    for (u64 g : gens)
      for (u64 m = g; m <= kLimit; m += g) hit[m] = 1;
    const u64 count = static_cast<u64>(std::count(hit.begin() + 1, hit.end(), 1));
    const Rational sieve = Rational(BigInt(count)) / BigInt(kLimit);
    const Rational slack = Rational(2) / 3163;  // about 2 / sqrt(10^7)
    ASSERT_LE(Rational(a.interval.lo - slack), sieve);
    ASSERT_GE(Rational(a.interval.hi + slack), sieve);

    const auto fewer = multiples_density(GeneratorSet::make({gens.begin() + 1, gens.end()}), 100000);
    ASSERT_LE(fewer.interval.lo, a.interval.hi);
  }
}

TEST(Density, ExtraGeneratorsMergeWithSSet) {
  const auto base = delta_N2_lower(kDefaultCap, kDefaultCap, GeneratorSet::make({}));
  const auto s = delta_S(kDefaultCap, kDefaultCap);
  EXPECT_EQ(base.interval.lo, s.interval.lo);
  EXPECT_EQ(base.interval.hi, s.interval.hi);
  // 3 is already an S-set member, so adding it changes nothing.
  const auto three = delta_N2_lower(kDefaultCap, kDefaultCap, GeneratorSet::make({3}));
  EXPECT_EQ(three.interval.lo, s.interval.lo);
}
