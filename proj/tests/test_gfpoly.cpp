#include <gtest/gtest.h>

#include <random>

#include "npset/gfpoly.hpp"

using namespace npset::gfpoly;
using npset::numth::u64;

namespace {

// Dense coefficients, low degree first, values in [0, p).
using Vec = std::vector<std::int64_t>;

Vec naive_mul(const Vec& a, const Vec& b, std::int64_t p) {
  if (a.empty() || b.empty()) return {};
  Vec out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + a[i] * b[j]) % p;
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

std::int64_t inv_mod(std::int64_t a, std::int64_t p) {
  std::int64_t r = 1;
  for (std::int64_t e = p - 2, b = a; e > 0; e >>= 1, b = b * b % p)
    if (e & 1) r = r * b % p;
  return r;
}

Vec naive_rem(Vec a, const Vec& b, std::int64_t p) {
  const std::int64_t inv = inv_mod(b.back(), p);
  while (a.size() >= b.size()) {
    const std::int64_t c = a.back() * inv % p;
    const std::size_t s = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[s + i] = ((a[s + i] - c * b[i]) % p + p) % p;
    while (!a.empty() && a.back() == 0) a.pop_back();
  }
  return a;
}

Vec naive_gcd(Vec a, Vec b, std::int64_t p) {
  while (!b.empty()) {
    Vec r = naive_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  const std::int64_t inv = inv_mod(a.back(), p);
  for (auto& c : a) c = c * inv % p;
  return a;
}

// (x + lambda)^n - 1 by repeated multiplication.
Vec naive_shifted(std::int64_t p, std::int64_t lambda, u64 n) {
  Vec acc{1};
  for (u64 i = 0; i < n; ++i) acc = naive_mul(acc, {lambda, 1}, p);
  acc[0] = ((acc[0] - 1) % p + p) % p;
  while (!acc.empty() && acc.back() == 0) acc.pop_back();
  return acc;
}

Vec to_vec(const GFpPoly& a) { return Vec(a.coeffs().begin(), a.coeffs().end()); }

GFpPoly random_poly(std::mt19937_64& rng, std::uint32_t p, std::size_t deg) {
  std::vector<std::int64_t> c(deg + 1);
  for (auto& v : c) v = static_cast<std::int64_t>(rng() % p);
  return GFpPoly(p, c);
}

}  // namespace

TEST(GFpPoly, RejectsCompositeModulus) {
  EXPECT_THROW(GFpPoly(4), std::invalid_argument);
  EXPECT_THROW(GFpPoly(1), std::invalid_argument);
  EXPECT_THROW(GFpPoly::from_residues(3, {0, 3}), std::invalid_argument);
}

TEST(GFpPoly, ReducesAndTrims) {
  const GFpPoly a(5, {7, -1, 0, 10});
  EXPECT_EQ(a.degree(), 1);
  EXPECT_EQ(a.to_string(), "4x+2");
  EXPECT_TRUE(GFpPoly(3, {3, 6}).is_zero());
}

TEST(GFpPoly, MixedFieldsRejected) {
  EXPECT_THROW(add(GFpPoly(3, {1}), GFpPoly(5, {1})), std::invalid_argument);
}

TEST(GFpPoly, RingLawsOnRandomInputs) {
  std::mt19937_64 rng(11);
  for (std::uint32_t p : {2u, 3u, 5u, 13u, 65521u}) {
    for (int t = 0; t < 30; ++t) {
      const auto a = random_poly(rng, p, rng() % 40), b = random_poly(rng, p, rng() % 40),
                 c = random_poly(rng, p, rng() % 40);
      ASSERT_EQ(mul(a, add(b, c)), add(mul(a, b), mul(a, c)));
      ASSERT_EQ(mul(a, b), mul(b, a));
      ASSERT_EQ(sub(add(a, b), b), a);
      ASSERT_EQ(to_vec(mul(a, b)), naive_mul(to_vec(a), to_vec(b), p));
    }
  }
}

TEST(GFpPoly, DivmodReconstructs) {
  std::mt19937_64 rng(12);
  for (std::uint32_t p : {2u, 3u, 7u, 251u}) {
    for (int t = 0; t < 50; ++t) {
      const auto a = random_poly(rng, p, rng() % 60);
      auto b = random_poly(rng, p, rng() % 20);
      if (b.is_zero()) continue;
      const auto [q, r] = divmod(a, b);
      ASSERT_LT(r.degree(), b.degree());
      ASSERT_EQ(add(mul(q, b), r), a);
    }
  }
  EXPECT_THROW(divmod(GFpPoly(3, {1}), GFpPoly(3)), std::domain_error);
}

TEST(GFpPoly, GcdAgreesWithNaiveEuclid) {
  std::mt19937_64 rng(13);
  for (std::uint32_t p : {2u, 3u, 5u, 11u}) {
    for (int t = 0; t < 60; ++t) {
      // A planted common factor keeps the gcd nontrivial.
      const auto common = random_poly(rng, p, 1 + rng() % 6);
      const auto a = mul(common, random_poly(rng, p, rng() % 30));
      const auto b = mul(common, random_poly(rng, p, rng() % 30));
      if (a.is_zero() || b.is_zero()) continue;
      ASSERT_EQ(to_vec(poly_gcd(a, b)), naive_gcd(to_vec(a), to_vec(b), p));
    }
  }
}

TEST(GF2Poly, BatchedGcdMatchesPlainOnLargeInputs) {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 40; ++t) {
    const auto common = random_poly(rng, 2, rng() % 300);
    const auto a = mul(common, random_poly(rng, 2, 200 + rng() % 3000));
    const auto b = mul(common, random_poly(rng, 2, 200 + rng() % 3000));
    const auto ga = GF2Poly::from_gfp(a), gb = GF2Poly::from_gfp(b);
    const auto fast = gcd(ga, gb), slow = gcd_plain(ga, gb);
    ASSERT_EQ(fast, slow);
    ASSERT_EQ(fast.to_gfp(), poly_gcd(a, b));
  }
}

TEST(GF2Poly, BatchedGcdMatchesPlainOnLocusInputs) {
  for (u64 n : {73ull, 85ull, 3133ull, 4369ull, 11275ull, 49981ull, 50001ull, 99999ull}) {
    const auto a = GF2Poly::x_pow_plus_one(n), b = GF2Poly::shifted_pow_plus_one(n);
    ASSERT_EQ(gcd(a, b), gcd_plain(a, b)) << n;
  }
}

TEST(GFpPoly, ShiftedPowerMatchesRepeatedMultiplication) {
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    for (std::uint32_t lambda = 0; lambda < p; ++lambda) {
      for (u64 n = 1; n < 60; ++n) {
        ASSERT_EQ(to_vec(shifted_power_minus_one(p, lambda, n)), naive_shifted(p, lambda, n))
            << p << " " << lambda << " " << n;
      }
    }
  }
  EXPECT_EQ(shifted_power_minus_one(2, 1, 3).to_string(), "x^3+x^2+x");
}

TEST(GFpPoly, PowmodMatchesRepeatedMultiplication) {
  std::mt19937_64 rng(15);
  for (std::uint32_t p : {2u, 3u, 7u}) {
    const auto m = add(GFpPoly::monomial(p, 9), random_poly(rng, p, 8));
    const auto base = random_poly(rng, p, 12);
    GFpPoly acc = GFpPoly::constant(p, 1);
    for (u64 e = 0; e < 40; ++e) {
      ASSERT_EQ(poly_powmod(base, e, m), divmod(acc, m).remainder) << p << " " << e;
      acc = divmod(mul(acc, base), m).remainder;
    }
  }
}

TEST(Locus, SmallCases) {
  EXPECT_EQ(common_root_locus(2, 3).to_string(), "x^2+x+1");
  EXPECT_EQ(common_root_locus(2, 5).degree(), 0);
  EXPECT_EQ(common_root_locus(3, 13).degree(), 3);
  EXPECT_THROW(common_root_locus(3, 12), std::invalid_argument);
  EXPECT_THROW(common_root_locus(4, 3), std::invalid_argument);
}

TEST(Locus, MatchesNaiveGcdOfAllShifts) {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    for (u64 n = 1; n < 90; ++n) {
      if (n % p == 0) continue;
      Vec g = naive_shifted(p, 0, n);
      for (std::uint32_t lambda = 1; lambda < p; ++lambda) g = naive_gcd(g, naive_shifted(p, lambda, n), p);
      ASSERT_EQ(to_vec(common_root_locus(p, n)), g) << p << " " << n;
    }
  }
}

// Every root of the locus satisfies all shifts, so it divides each of them.
TEST(Locus, DividesEveryShiftForTableEntries) {
  for (auto [p, n] : std::vector<std::pair<std::uint32_t, u64>>{{2, 73}, {2, 85}, {2, 3133}, {3, 121}, {3, 1093}}) {
    const auto g = common_root_locus(p, n);
    ASSERT_GE(g.degree(), 1);
    for (std::uint32_t lambda = 0; lambda < p; ++lambda) {
      ASSERT_TRUE(divmod(shifted_power_minus_one(p, lambda, n), g).remainder.is_zero());
    }
  }
}

TEST(GF2Poly, CarrylessMultiplyMatchesShiftAndAdd) {
  std::mt19937_64 rng(16);
  for (int t = 0; t < 20000; ++t) {
    const u64 a = rng(), b = rng() >> (rng() % 64);
    u64 lo = 0, hi = 0, plo = 0, phi = 0;
    detail::clmul64(a, b, lo, hi);
    detail::clmul64_portable(a, b, plo, phi);
    ASSERT_EQ(lo, plo);
    ASSERT_EQ(hi, phi);
  }
  u64 lo = 0, hi = 0;
  detail::clmul64(u64{1} << 63, u64{1} << 63, lo, hi);
  EXPECT_EQ(lo, 0u);
  EXPECT_EQ(hi, u64{1} << 62);
}
