#include <gtest/gtest.h>

#include <random>

#include "npset/errors.hpp"
#include "npset/gfq.hpp"

using namespace npset;
using namespace npset::gfq;
using numth::u64;

namespace {

// Test-side field: coordinate vectors multiplied as polynomials and reduced
// by the same modulus, with no shared code beyond the modulus itself.
struct NaiveField {
  std::uint32_t p;
  unsigned k;
  std::vector<std::uint32_t> mod;  // monic, low degree first, size k + 1

  std::vector<std::uint32_t> mul(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) const {
    std::vector<std::uint64_t> t(2 * k, 0);
    for (unsigned i = 0; i < k; ++i)
      for (unsigned j = 0; j < k; ++j) t[i + j] = (t[i + j] + std::uint64_t{a[i]} * b[j]) % p;
    for (unsigned s = 2 * k - 1; s >= k && s < 2 * k; --s) {
      const std::uint64_t c = t[s];
      if (c == 0) continue;
      for (unsigned i = 0; i <= k; ++i) t[s - k + i] = (t[s - k + i] + (p - c) * mod[i]) % p;
    }
    return {t.begin(), t.begin() + k};
  }
};

NaiveField naive_of(const FieldSpec& f) {
  NaiveField n{f.p(), f.k(), {}};
  for (unsigned i = 0; i <= f.k(); ++i) n.mod.push_back(f.modulus().coeff(i));
  return n;
}

// Literal count of (x, y_1..y_r) with y_j^d = x + j - 1.
u64 literal_solutions(const FieldSpec& f, u64 d, unsigned r) {
  std::vector<u64> roots(f.q(), 0);  // number of y with y^d = v
  for (u64 y = 0; y < f.q(); ++y) ++roots[f.pow({y}, d).code];
  u64 total = 0;
  for (u64 x = 0; x < f.q(); ++x) {
    u64 prod = 1;
    for (unsigned j = 0; j < r; ++j) prod *= roots[f.add_const({x}, j).code];
    total += prod;
  }
  return total;
}

std::vector<std::pair<std::uint32_t, unsigned>> small_fields() {
  return {{2, 1}, {2, 2}, {2, 3}, {2, 4}, {2, 6}, {3, 1}, {3, 2}, {3, 3}, {3, 4}, {5, 1}, {5, 2}, {5, 3}, {7, 2}};
}

}  // namespace

TEST(FieldSpec, SmallestIrreducibleInCanonicalOrder) {
  EXPECT_EQ(make_field(3, 3).modulus().to_string(), "x^3+2x^2+1");
  EXPECT_EQ(make_field(2, 4).modulus().to_string(), "x^4+x^3+1");
  EXPECT_EQ(make_field(5, 1).modulus().to_string(), "x");
}

TEST(FieldSpec, IrreducibleCountMatchesNecklaceFormula) {
  // Monic irreducibles of degree 4 over GF(3): (3^4 - 3^2)/4 = 18.
  int count = 0;
  for (u64 r = 0; r < 81; ++r) {
    std::vector<std::int64_t> c{static_cast<std::int64_t>(r % 3), static_cast<std::int64_t>(r / 3 % 3),
                                static_cast<std::int64_t>(r / 9 % 3), static_cast<std::int64_t>(r / 27), 1};
    count += is_irreducible(gfpoly::GFpPoly(3, c));
  }
  EXPECT_EQ(count, 18);
}

TEST(FieldSpec, MultiplicationAgreesWithNaiveField) {
  for (auto [p, k] : small_fields()) {
    const auto f = make_field(p, k);
    const auto nf = naive_of(f);
    for (u64 a = 0; a < f.q(); a += 1 + f.q() / 40)
      for (u64 b = 0; b < f.q(); ++b)
        ASSERT_EQ(f.coords(f.mul({a}, {b})), nf.mul(f.coords({a}), f.coords({b}))) << p << "^" << k;
  }
}

TEST(FieldSpec, FieldAxiomsOnRandomTriples) {
  std::mt19937_64 rng(21);
  for (auto [p, k] : std::vector<std::pair<std::uint32_t, unsigned>>{{2, 12}, {3, 7}, {5, 5}, {13, 3}, {251, 2}}) {
    const auto f = make_field(p, k);
    for (int t = 0; t < 500; ++t) {
      const FqElem a{rng() % f.q()}, b{rng() % f.q()}, c{rng() % f.q()};
      ASSERT_EQ(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
      ASSERT_EQ(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
      if (a.code != 0) ASSERT_EQ(f.pow(a, f.q() - 1), f.one());
    }
  }
}

TEST(FieldSpec, RankRoundTripsAndOrdersC0First) {
  const auto f = make_field(3, 2);
  for (u64 r = 0; r < f.q(); ++r) ASSERT_EQ(f.rank(f.unrank(r)), r);
  EXPECT_EQ(f.coords(f.unrank(1)), (std::vector<std::uint32_t>{0, 1}));
  EXPECT_EQ(f.coords(f.unrank(3)), (std::vector<std::uint32_t>{1, 0}));
}

TEST(FieldSpec, GeneratorHasFullOrder) {
  for (auto [p, k] : small_fields()) {
    const auto f = make_field(p, k);
    const auto g = find_generator(f);
    FqElem x = g;
    u64 order = 1;
    while (x != f.one()) {
      x = f.mul(x, g);
      ++order;
    }
    ASSERT_EQ(order, f.q() - 1) << p << "^" << k;
  }
}

TEST(Counts, PowerMapMatchesEulerCriterion) {
  for (auto [p, k] : small_fields()) {
    const auto f = make_field(p, k);
    for (u64 d : numth::divisors(f.q() - 1)) {
      const auto map = dth_power_map(f, d, find_generator(f));
      for (u64 c = 0; c < f.q(); ++c) ASSERT_EQ(map[c] != 0, is_nonzero_dth_power(f, {c}, d));
    }
  }
}

TEST(Counts, SolutionIdentityAgainstLiteralCount) {
  for (auto [p, k] : small_fields()) {
    const auto f = make_field(p, k);
    for (u64 d : numth::divisors(f.q() - 1)) {
      for (unsigned r = 1; r <= p; ++r) {
        const auto c = count_consecutive_dpowers(f, d, r);
        const auto n = count_system_solutions(f, d, r);
        const auto lit = literal_solutions(f, d, r);
        ASSERT_EQ(n, lit) << p << "^" << k << " d=" << d << " r=" << r;
        const BigInt dr = boost::multiprecision::pow(BigInt(d), r), dr1 = dr / d;
        ASSERT_EQ(n, dr * c.m + dr1 * c.m0);
      }
    }
  }
}

TEST(Counts, SharpnessWitnessAt16) {
  const auto f = make_field(2, 4);
  const auto c = count_consecutive_dpowers(f, 3, 2);
  EXPECT_EQ(c.m, 0u);
  EXPECT_EQ(c.m0, 2u);
  EXPECT_EQ(count_system_solutions(f, 3, 2), 6);
}

TEST(Counts, BoundaryCountAtFullRunLength) {
  for (auto [p, k] : small_fields()) {
    const auto f = make_field(p, k);
    for (u64 d : numth::divisors(f.q() - 1)) {
      const u64 n = (f.q() - 1) / d;
      ASSERT_EQ(count_consecutive_dpowers(f, d, p).m0, m0_predicted(p, n)) << p << "^" << k << " d=" << d;
    }
  }
}

TEST(Counts, Refusals) {
  OracleBounds tiny;
  tiny.enumeration = 100;
  const auto f = make_field(3, 5);
  EXPECT_THROW(count_consecutive_dpowers(f, 2, 3, tiny), OracleRefusal);
  EXPECT_THROW(count_consecutive_dpowers(f, 5, 3), std::invalid_argument);
  EXPECT_THROW(count_consecutive_dpowers(f, 2, 4), std::invalid_argument);
  OracleBounds small_char;
  small_char.character = 100;
  EXPECT_THROW(make_character(f, 2, small_char), OracleRefusal);
}

TEST(CharacterSum, EqualsSolutionCountThroughBothRoutes) {
  for (auto [p, k] : std::vector<std::pair<std::uint32_t, unsigned>>{{2, 4}, {2, 6}, {3, 2}, {3, 4}, {5, 2}, {7, 2}}) {
    const auto f = make_field(p, k);
    for (u64 d : numth::divisors(f.q() - 1)) {
      const auto chi = make_character(f, d);
      for (unsigned r = 1; r <= p; ++r) {
        const auto n = count_system_solutions(f, d, r);
        const auto lit = character_sum_count(chi, r);
        const auto fub = character_sum_count(chi, r, 0);
        ASSERT_EQ(fub.route, "fubini");
        ASSERT_TRUE(lit.exact.has_value());
        ASSERT_TRUE(fub.exact.has_value());
        ASSERT_EQ(*fub.exact, n) << p << "^" << k << " d=" << d << " r=" << r;
        if (lit.route == "tuples") ASSERT_EQ(*lit.exact, n);
        ASSERT_EQ(BigInt(std::llround(lit.value.real())), n);
        ASSERT_LT(std::abs(lit.value.imag()), 0.5);
      }
    }
  }
}

TEST(CharacterSum, CyclotomicPolynomials) {
  EXPECT_EQ(detail::cyclotomic(12), (std::vector<i128>{1, 0, -1, 0, 1}));
  EXPECT_EQ(detail::cyclotomic(1), (std::vector<i128>{-1, 1}));
  // 1 + z + z^2 at a cube root of unity is zero.
  EXPECT_EQ(detail::cyclotomic_value({1, 1, 1}, 3), i128{0});
  EXPECT_FALSE(detail::cyclotomic_value({0, 1, 0}, 3).has_value());
}

TEST(Weil, NoViolationsWhenExhaustive) {
  for (auto [p, k] : std::vector<std::pair<std::uint32_t, unsigned>>{{2, 4}, {2, 8}, {3, 3}, {3, 4}, {5, 3}}) {
    const auto f = make_field(p, k);
    for (u64 d : numth::divisors(f.q() - 1)) {
      if (d == 1) continue;
      const auto chi = make_character(f, d);
      for (unsigned r = 1; r <= p; ++r) {
        const auto w = weil_sweep(chi, r, u64{1} << 24, 0);
        if (!w.exhaustive) continue;
        ASSERT_EQ(w.violations, 0u) << p << "^" << k << " d=" << d << " r=" << r;
        ASSERT_LE(w.worst_ratio, 1.0 + 1e-9);
        ASSERT_EQ(*w.total->exact, count_system_solutions(f, d, r));
      }
    }
  }
}

TEST(Weil, SingleTermMatchesDirectSum) {
  const auto f = make_field(3, 3);
  const auto chi = make_character(f, 13);
  const auto rep = weil_term_report(chi, 3, {1, 2, 0});
  std::complex<double> s = 0;
  for (u64 c = 0; c < f.q(); ++c) {
    const FqElem a{c}, b = f.add_const({c}, 1);
    if (a.code == 0 || b.code == 0) continue;
    const double ang = 2 * std::numbers::pi * static_cast<double>(chi.exponent(a) + 2 * chi.exponent(b)) / 13.0;
    s += std::polar(1.0, ang);
  }
  EXPECT_NEAR(rep.sum_abs, std::abs(s), 1e-9);
  EXPECT_EQ(rep.w, 2u);
  EXPECT_TRUE(rep.ok);
  EXPECT_THROW(weil_term_report(chi, 3, {0, 0, 0}), std::invalid_argument);
}

TEST(Weil, SampledSweepIsDeterministicInSeed) {
  const auto f = make_field(2, 8);
  const auto chi = make_character(f, 255);
  const auto a = weil_sweep(chi, 2, 10, 500, 99), b = weil_sweep(chi, 2, 10, 500, 99);
  EXPECT_FALSE(a.exhaustive);
  EXPECT_EQ(a.checked, b.checked);
  EXPECT_EQ(a.worst_ratio, b.worst_ratio);
  EXPECT_EQ(a.violations, 0u);
}
