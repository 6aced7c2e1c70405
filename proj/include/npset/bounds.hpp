#pragma once

// Exact evaluation of the counting bounds and the sufficient conditions for
// membership. Every comparison "A <= C sqrt(q)" is settled by signs and
// squaring in big integers; no floating point reaches a verdict.

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "npset/engine.hpp"
#include "npset/gfq.hpp"
#include "npset/numth.hpp"

namespace npset::bounds {

using numth::BigInt;
using numth::u64;
using Rational = boost::multiprecision::cpp_rational;

enum class Form {
  thm_sequence,
  eq_lower,
  thm_n_large_strong,
  thm_n_large_weak,
  cor_n_large,
  cor_k_large,
  lemma_system,
  eq_weak,
};

inline const char* to_string(Form f) {
  switch (f) {
    case Form::thm_sequence: return "thm-sequence";
    case Form::eq_lower: return "eq-lower";
    case Form::thm_n_large_strong: return "thm-n-large-strong";
    case Form::thm_n_large_weak: return "thm-n-large-weak";
    case Form::cor_n_large: return "cor-n-large";
    case Form::cor_k_large: return "cor-k-large";
    case Form::lemma_system: return "lemma-system";
    case Form::eq_weak: return "eq-weak";
  }
  return "?";
}

// For the sqrt forms the verdict compares lhs against rhs_coeff * sqrt(q).
// cor-n-large and cor-k-large compare lhs >= rhs_coeff outright.
struct BoundReport {
  Form form = Form::thm_sequence;
  u64 p = 0;
  BigInt q = 0, d = 0, n = 0;
  unsigned r = 0;
  BigInt lhs = 0;
  BigInt rhs_coeff = 0;
  bool verdict = false;
  bool equality = false;   // the two sides coincide
  bool applicable = true;  // false only for the weak form when (p - 1) | n
};

// sign(A - C sqrt(q)) for q >= 1.
inline int sign_linear_sqrt(const BigInt& a, const BigInt& c, const BigInt& q) {
  if (q < 1) throw std::invalid_argument("sqrt comparison needs q >= 1");
  if (c == 0) return a.sign();
  const BigInt lhs = a * a, rhs = c * c * q;
  const int mag = lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
  if (c > 0) return a <= 0 ? -1 : mag;
  return a >= 0 ? 1 : -mag;
}

inline BigInt ipow(const BigInt& b, unsigned e) { return boost::multiprecision::pow(b, e); }

inline BigInt abs_big(const BigInt& v) { return v < 0 ? BigInt(-v) : v; }

inline void require_divides(const BigInt& d, const BigInt& qm1, const char* what) {
  if (d < 1 || qm1 % d != 0) throw std::invalid_argument(std::string(what) + " must divide q - 1");
}

// q = p^k with k >= 1; returns k.
inline unsigned require_prime_power(u64 p, const BigInt& q) {
  numth::require_prime(p);
  BigInt t = q;
  unsigned k = 0;
  while (t > 1 && t % p == 0) {
    t /= p;
    ++k;
  }
  if (t != 1 || k == 0) throw std::invalid_argument("q is not a power of p");
  return k;
}

// |M + (M0 + 1)/d - (q + 1)/d^r| <= (r - 1 - (r + 1)/d + 2/d^r) sqrt(q), times d^r.
inline BoundReport sequence_bound_holds(const BigInt& q, const BigInt& d, unsigned r, const BigInt& m,
                                        const BigInt& m0) {
  require_divides(d, q - 1, "d");
  if (r < 1) throw std::invalid_argument("r must be at least 1");
  BoundReport b;
  b.form = Form::thm_sequence;
  b.q = q;
  b.d = d;
  b.r = r;
  const BigInt dr = ipow(d, r), dr1 = ipow(d, r - 1);
  b.lhs = abs_big(dr * m + dr1 * (m0 + 1) - (q + 1));
  b.rhs_coeff = BigInt(r - 1) * dr - BigInt(r + 1) * dr1 + 2;
  const int s = sign_linear_sqrt(b.lhs, b.rhs_coeff, q);
  b.verdict = s <= 0;
  b.equality = s == 0;
  return b;
}

// Lower bound for M at r = p, as rational_part + sqrt_coeff * sqrt(q).
struct LowerBound {
  Rational rational_part;
  Rational sqrt_coeff;
  double approx = 0.0;
  bool positive = false;
  BoundReport report;  // d^p times the bound is lhs - rhs_coeff sqrt(q)
};

inline LowerBound eq_lower_value(u64 p, const BigInt& q, const BigInt& d, const BigInt& m0) {
  require_prime_power(p, q);
  require_divides(d, q - 1, "d");
  const auto pp = static_cast<unsigned>(p);
  LowerBound out;
  const BigInt dp = ipow(d, pp), dp1 = ipow(d, pp - 1);
  out.rational_part = Rational(q + 1, dp) - Rational(m0 + 1, d);
  out.sqrt_coeff = -(Rational(BigInt(p - 1)) - Rational(BigInt(p + 1), d) + Rational(BigInt(2), dp));
  out.approx = static_cast<double>(out.rational_part) +
               static_cast<double>(out.sqrt_coeff) * std::sqrt(static_cast<double>(q));
  auto& b = out.report;
  b.form = Form::eq_lower;
  b.p = p;
  b.q = q;
  b.d = d;
  b.r = pp;
  b.lhs = q + 1 - (m0 + 1) * dp1;
  b.rhs_coeff = BigInt(p - 1) * dp - BigInt(p + 1) * dp1 + 2;
  const int s = sign_linear_sqrt(b.lhs, b.rhs_coeff, q);
  b.verdict = s > 0;
  b.equality = s == 0;
  out.positive = b.verdict;
  return out;
}

struct NLargeReport {
  BoundReport strong;
  BoundReport weak;
};

// q + 1 - (p + 1) d^{p-1} > ((pd - p - d - 1) d^{p-1} + 2) sqrt(q), and the
// weak form with d^{p-1} in place of (p + 1) d^{p-1}.
inline NLargeReport thm_n_large_holds(u64 p, const BigInt& q, const BigInt& n) {
  require_prime_power(p, q);
  require_divides(n, q - 1, "n");
  const BigInt d = (q - 1) / n;
  const auto pp = static_cast<unsigned>(p);
  const BigInt dp1 = ipow(d, pp - 1);
  // pd - p - d - 1 = (p - 1)(d - 1) - 2 is >= -2, and equals -2 or -1 only
  // when d = 1 or p = 2, d = 2, where the +2 keeps the coefficient >= 0.
  const BigInt c = (BigInt(p) * d - p - d - 1) * dp1 + 2;
  auto fill = [&](Form f, const BigInt& a) {
    BoundReport b;
    b.form = f;
    b.p = p;
    b.q = q;
    b.d = d;
    b.n = n;
    b.r = pp;
    b.lhs = a;
    b.rhs_coeff = c;
    const int s = sign_linear_sqrt(a, c, q);
    b.verdict = s > 0;
    b.equality = s == 0;
    return b;
  };
  NLargeReport out{fill(Form::thm_n_large_strong, q + 1 - BigInt(p + 1) * dp1),
                   fill(Form::thm_n_large_weak, q + 1 - dp1)};
  out.weak.applicable = n % (p - 1) != 0;
  return out;
}

// n^{2p} >= (p - 1)^2 (q - 1)^{2p - 1}.
inline BoundReport cor_n_large_holds(u64 p, const BigInt& q, const BigInt& n) {
  require_prime_power(p, q);
  require_divides(n, q - 1, "n");
  const auto pp = static_cast<unsigned>(p);
  BoundReport b;
  b.form = Form::cor_n_large;
  b.p = p;
  b.q = q;
  b.n = n;
  b.d = (q - 1) / n;
  b.lhs = ipow(n, 2 * pp);
  b.rhs_coeff = BigInt(p - 1) * (p - 1) * ipow(q - 1, 2 * pp - 1);
  b.verdict = b.lhs >= b.rhs_coeff;
  b.equality = b.lhs == b.rhs_coeff;
  return b;
}

struct KLargeReport {
  BoundReport bound;
  bool order_divides_k = false;  // (p^k - 1)/d is then an integer and the conclusion applies
};

// p^{k-2} >= d^{2p}; false for k < 2.
inline KLargeReport cor_k_large_holds(u64 p, u64 d, u64 k) {
  numth::require_prime(p);
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (d < 1 || std::gcd(p, d) != 1) throw std::invalid_argument("d must be positive and prime to p");
  KLargeReport out;
  auto& b = out.bound;
  b.form = Form::cor_k_large;
  b.p = p;
  b.d = d;
  b.r = static_cast<unsigned>(p);
  b.lhs = k >= 2 ? ipow(BigInt(p), static_cast<unsigned>(k - 2)) : BigInt(0);
  b.rhs_coeff = ipow(BigInt(d), static_cast<unsigned>(2 * p));
  b.verdict = k >= 2 && b.lhs >= b.rhs_coeff;
  b.equality = k >= 2 && b.lhs == b.rhs_coeff;
  out.order_divides_k = k % numth::mult_order(p, d) == 0;
  return out;
}

// 2g - 2 = (rd - r - d - 1) d^{r-1}.
inline BigInt genus_complete_intersection(u64 d, unsigned r) {
  if (d < 1 || r < 2) throw std::invalid_argument("genus needs d >= 1 and r >= 2");
  const BigInt twice = (BigInt(r) * d - r - d - 1) * ipow(BigInt(d), r - 1) + 2;
  if (twice < 0 || twice % 2 != 0) {
    throw std::invalid_argument("(d, r) does not give a curve of non-negative genus");
  }
  return twice / 2;
}

struct SystemReport {
  BoundReport bound;
  BigInt n_solutions = 0;
  bool genus_matches = false;  // bound coefficient == 2 g (r >= 2 only)
};

inline SystemReport lemma_system_check(const BigInt& q, u64 d, unsigned r, const BigInt& n_solutions) {
  require_divides(d, q - 1, "d");
  SystemReport out;
  out.n_solutions = n_solutions;
  auto& b = out.bound;
  b.form = Form::lemma_system;
  b.q = q;
  b.d = d;
  b.r = r;
  const BigInt dr1 = ipow(BigInt(d), r - 1);
  b.lhs = abs_big(n_solutions + dr1 - q - 1);
  b.rhs_coeff = (BigInt(r) * d - r - d - 1) * dr1 + 2;
  const int s = sign_linear_sqrt(b.lhs, b.rhs_coeff, q);
  b.verdict = s <= 0;
  b.equality = s == 0;
  out.genus_matches = r >= 2 && b.rhs_coeff == 2 * genus_complete_intersection(d, r);
  return out;
}

inline SystemReport lemma_system_check(const gfq::FieldSpec& f, u64 d, unsigned r,
                                       const gfq::OracleBounds& ob = gfq::OracleBounds::from_env()) {
  auto out = lemma_system_check(BigInt(f.q()), d, r, gfq::count_system_solutions(f, d, r, ob));
  out.bound.p = f.p();
  return out;
}

// |N - q| <= ((dr - r - d) d^{r-1} + 1) sqrt(q).
inline BoundReport eq_weak_check(const BigInt& q, u64 d, unsigned r, const BigInt& n_solutions) {
  require_divides(d, q - 1, "d");
  BoundReport b;
  b.form = Form::eq_weak;
  b.q = q;
  b.d = d;
  b.r = r;
  b.lhs = abs_big(n_solutions - q);
  b.rhs_coeff = (BigInt(d) * r - r - d) * ipow(BigInt(d), r - 1) + 1;
  const int s = sign_linear_sqrt(b.lhs, b.rhs_coeff, q);
  b.verdict = s <= 0;
  b.equality = s == 0;
  return b;
}

inline BoundReport eq_weak_check(const gfq::FieldSpec& f, u64 d, unsigned r,
                                 const gfq::OracleBounds& ob = gfq::OracleBounds::from_env()) {
  auto b = eq_weak_check(BigInt(f.q()), d, r, gfq::count_system_solutions(f, d, r, ob));
  b.p = f.p();
  return b;
}

struct Prediction {
  u64 p = 0, n = 0, k = 0;
  BigInt q = 0, d = 0;
  bool trivial = false;
  bool cor_n_large = false;
  bool thm_strong = false;
  bool thm_weak = false;
  bool thm_weak_applicable = false;
  bool any_sufficient = false;
};

// All predicates at q = p^k for a divisor n of q - 1. n = 1 is never a
// member; at q = 2 the corollary's inequality degenerates to 1 >= 1, so it is
// reported but not counted as sufficient there.
inline Prediction predict_at(u64 p, u64 k, u64 n) {
  numth::require_prime(p);
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  Prediction out;
  out.p = p;
  out.n = n;
  out.k = k;
  out.q = ipow(BigInt(p), static_cast<unsigned>(k));
  require_divides(n, out.q - 1, "n");
  out.d = (out.q - 1) / n;
  out.trivial = engine::is_trivial_member(p, n);
  out.cor_n_large = cor_n_large_holds(p, out.q, n).verdict;
  const auto thm = thm_n_large_holds(p, out.q, n);
  out.thm_strong = thm.strong.verdict;
  out.thm_weak = thm.weak.verdict;
  out.thm_weak_applicable = thm.weak.applicable;
  out.any_sufficient =
      n > 1 && (out.trivial || out.cor_n_large || out.thm_strong || (out.thm_weak_applicable && out.thm_weak));
  return out;
}

// At the smallest field containing the n-th roots of unity.
inline Prediction predict(u64 p, u64 n) {
  numth::require_prime(p);
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (std::gcd(p, n) != 1) throw std::invalid_argument("n must be prime to p");
  return predict_at(p, numth::mult_order(p, n), n);
}

}  // namespace npset::bounds
