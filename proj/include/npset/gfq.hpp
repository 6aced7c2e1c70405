#pragma once

// Explicit finite fields GF(p^k) and the brute-force oracles built on them:
// power-residue maps, consecutive-residue counts, solution counts of
// y_j^d = x + j - 1, and multiplicative character sums.
//
// Elements are stored as codes sum c_i p^i, where c_i is the coefficient of
// x^i in the modulus basis. The canonical ordering compares (c_0, c_1, ...)
// lexicographically, c_0 first; rank() maps a code to its position in it.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "npset/errors.hpp"
#include "npset/gfpoly.hpp"
#include "npset/numth.hpp"

namespace npset::gfq {

using numth::BigInt;
using numth::u64;
using i128 = __int128;

// Refusal ceilings on q. NPSET_ORACLE_BOUND overrides the enumeration one.
struct OracleBounds {
  u64 enumeration = u64{1} << 26;
  u64 character = u64{1} << 20;

  static OracleBounds from_env() {
    OracleBounds b;
    if (const char* env = std::getenv("NPSET_ORACLE_BOUND"); env != nullptr && *env != '\0') {
      char* end = nullptr;
      const unsigned long long v = std::strtoull(env, &end, 10);
      if (end == nullptr || *end != '\0' || v == 0) {
        throw std::invalid_argument(std::string("NPSET_ORACLE_BOUND is not a positive integer: ") + env);
      }
      b.enumeration = v;
    }
    return b;
  }
};

struct FqElem {
  u64 code = 0;
  friend bool operator==(FqElem, FqElem) = default;
};

class FieldSpec {
 public:
  FieldSpec(std::uint32_t p, unsigned k, gfpoly::GFpPoly modulus) : p_(p), k_(k), modulus_(std::move(modulus)) {
    if (modulus_.modulus() != p || modulus_.degree() != static_cast<long>(k) || !modulus_.is_monic()) {
      throw std::invalid_argument("field modulus must be monic of degree k over GF(p)");
    }
    q_ = numth::checked_pow(p, k);
    if (q_ == 0 || q_ > (u64{1} << 62)) throw std::invalid_argument("field too large for 64-bit element codes");
    for (unsigned i = 0; i < k; ++i) low_.push_back(modulus_.coeff(i));
    if (p == 2) {
      for (unsigned i = 0; i < k; ++i) bits_ |= u64{low_[i]} << i;
    }
  }

  std::uint32_t p() const { return p_; }
  unsigned k() const { return k_; }
  u64 q() const { return q_; }
  const gfpoly::GFpPoly& modulus() const { return modulus_; }

  std::vector<std::uint32_t> coords(FqElem a) const {
    std::vector<std::uint32_t> c(k_);
    for (unsigned i = 0; i < k_; ++i, a.code /= p_) c[i] = static_cast<std::uint32_t>(a.code % p_);
    return c;
  }
  FqElem from_coords(const std::vector<std::uint32_t>& c) const {
    if (c.size() != k_) throw std::invalid_argument("coordinate vector has wrong length");
    u64 code = 0;
    for (unsigned i = k_; i-- > 0;) {
      if (c[i] >= p_) throw std::invalid_argument("coordinate out of range");
      code = code * p_ + c[i];
    }
    return {code};
  }

  // Position in the canonical ordering (c_0 most significant), and back.
  u64 rank(FqElem a) const {
    u64 r = 0;
    for (unsigned i = 0; i < k_; ++i, a.code /= p_) r = r * p_ + a.code % p_;
    return r;
  }
  FqElem unrank(u64 r) const {
    u64 code = 0;
    for (unsigned i = 0; i < k_; ++i, r /= p_) code = code * p_ + r % p_;
    return {code};
  }

  FqElem zero() const { return {0}; }
  FqElem one() const { return {1}; }

  FqElem add(FqElem a, FqElem b) const {
    if (p_ == 2) return {a.code ^ b.code};
    u64 out = 0, scale = 1;
    for (unsigned i = 0; i < k_; ++i, scale *= p_, a.code /= p_, b.code /= p_) {
      out += ((a.code % p_ + b.code % p_) % p_) * scale;
    }
    return {out};
  }

  // a + j for j in GF(p): only the constant coordinate moves.
  FqElem add_const(FqElem a, std::uint32_t j) const {
    const u64 c0 = a.code % p_;
    return {a.code - c0 + (c0 + j) % p_};
  }

  FqElem mul(FqElem a, FqElem b) const {
    if (p_ == 2) return {mul2(a.code, b.code)};
    std::vector<u64> x(k_), y(k_), prod(2 * k_ - 1, 0);
    for (unsigned i = 0; i < k_; ++i, a.code /= p_, b.code /= p_) {
      x[i] = a.code % p_;
      y[i] = b.code % p_;
    }
    for (unsigned i = 0; i < k_; ++i) {
      if (x[i] == 0) continue;
      for (unsigned j = 0; j < k_; ++j) prod[i + j] = (prod[i + j] + x[i] * y[j]) % p_;
    }
    for (unsigned t = 2 * k_ - 1; t-- > k_;) {
      const u64 c = prod[t];
      if (c == 0) continue;
      prod[t] = 0;
      for (unsigned i = 0; i < k_; ++i) prod[t - k_ + i] = (prod[t - k_ + i] + (p_ - c) * low_[i]) % p_;
    }
    u64 out = 0;
    for (unsigned i = k_; i-- > 0;) out = out * p_ + prod[i];
    return {out};
  }

  FqElem pow(FqElem a, u64 e) const {
    FqElem r = one();
    while (e != 0) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

 private:
  u64 mul2(u64 a, u64 b) const {
    u64 lo = 0, hi = 0;
    gfpoly::detail::clmul64(a, b, lo, hi);
    for (unsigned t = 2 * k_ - 1; t-- > k_;) {
      const bool set = t >= 64 ? ((hi >> (t - 64)) & 1) : ((lo >> t) & 1);
      if (!set) continue;
      const unsigned s = t - k_;
      // Clear x^t and add x^s * (modulus - x^k).
      if (t >= 64) hi ^= u64{1} << (t - 64); else lo ^= u64{1} << t;
      lo ^= bits_ << s;
      if (s != 0) hi ^= bits_ >> (64 - s);
    }
    return lo;
  }

  std::uint32_t p_;
  unsigned k_;
  gfpoly::GFpPoly modulus_;
  u64 q_ = 0;
  std::vector<std::uint32_t> low_;
  u64 bits_ = 0;
};

// Ben-Or: f of degree k is irreducible iff gcd(x^{p^i} - x, f) = 1 for i <= k/2.
inline bool is_irreducible(const gfpoly::GFpPoly& f) {
  const long k = f.degree();
  if (k < 1) return false;
  if (k == 1) return true;
  const std::uint32_t p = f.modulus();
  const auto x = gfpoly::GFpPoly::monomial(p, 1);
  auto frob = x;
  for (long i = 1; 2 * i <= k; ++i) {
    frob = gfpoly::poly_powmod(frob, p, f);
    if (gfpoly::poly_gcd(gfpoly::sub(frob, x), f).degree() > 0) return false;
  }
  return true;
}

// Smallest monic irreducible of degree k in the canonical ordering.
inline FieldSpec make_field(std::uint32_t p, unsigned k) {
  numth::require_prime(p);
  if (k < 1) throw std::invalid_argument("field degree must be at least 1");
  const u64 count = numth::checked_pow(p, k);
  if (count == 0 || count > (u64{1} << 62)) throw std::invalid_argument("field too large");
  for (u64 r = 0; r < count; ++r) {
    std::vector<gfpoly::GFpPoly::Coeff> c(k + 1);
    u64 rest = r;
    for (unsigned i = k; i-- > 0; rest /= p) c[i] = static_cast<gfpoly::GFpPoly::Coeff>(rest % p);
    c[k] = 1;
    auto f = gfpoly::GFpPoly::from_residues(p, std::move(c));
    if (is_irreducible(f)) return FieldSpec(p, k, std::move(f));
  }
  throw std::logic_error("no irreducible polynomial found");  // unreachable
}

inline void require_oracle_size(const FieldSpec& f, u64 ceiling, const char* what) {
  if (f.q() > ceiling) {
    throw OracleRefusal(std::string(what) + ": q = " + std::to_string(f.q()) + " exceeds the oracle bound " +
                        std::to_string(ceiling));
  }
}

inline void require_divides(u64 d, u64 qm1) {
  if (d == 0 || qm1 % d != 0) {
    throw std::invalid_argument("d = " + std::to_string(d) + " does not divide q - 1 = " + std::to_string(qm1));
  }
}

inline void require_run_length(unsigned r, std::uint32_t p) {
  if (r < 1 || r > p) throw std::invalid_argument("run length r must satisfy 1 <= r <= p");
}

inline bool is_primitive(const FieldSpec& f, FqElem g, const std::vector<u64>& primes) {
  if (g.code == 0) return false;
  for (u64 l : primes)
    if (f.pow(g, (f.q() - 1) / l) == f.one()) return false;
  return true;
}

inline FqElem find_generator(const FieldSpec& f, const numth::FactorOptions& opt = {}) {
  if (f.q() == 2) return f.one();
  const auto primes = numth::factorize(f.q() - 1, opt).primes();
  for (u64 r = 1; r < f.q(); ++r) {
    const FqElem g = f.unrank(r);
    if (is_primitive(f, g, primes)) return g;
  }
  throw std::logic_error("multiplicative group has no generator");  // unreachable
}

inline bool is_nonzero_dth_power(const FieldSpec& f, FqElem a, u64 d) {
  require_divides(d, f.q() - 1);
  return a.code != 0 && f.pow(a, (f.q() - 1) / d) == f.one();
}

// Indicator over codes of the nonzero d-th powers, i.e. the subgroup <g^d>.
inline std::vector<std::uint8_t> dth_power_map(const FieldSpec& f, u64 d, FqElem g) {
  require_divides(d, f.q() - 1);
  std::vector<std::uint8_t> map(f.q(), 0);
  const FqElem h = f.pow(g, d);
  FqElem x = f.one();
  for (u64 i = 0, n = (f.q() - 1) / d; i < n; ++i) {
    map[x.code] = 1;
    x = f.mul(x, h);
  }
  return map;
}

struct ConsecutiveCounts {
  u64 m = 0;
  u64 m0 = 0;
};

inline ConsecutiveCounts count_consecutive_dpowers(const FieldSpec& f, const std::vector<std::uint8_t>& dpow,
                                                   unsigned r) {
  require_run_length(r, f.p());
  ConsecutiveCounts out;
  for (u64 c = 0; c < f.q(); ++c) {
    bool ok = true;
    for (unsigned j = 0; j < r && ok; ++j) ok = dpow[f.add_const({c}, j).code] != 0;
    out.m += ok;
  }
  // Starts in GF(p) whose run passes through 0, with 0 counted as a power.
  for (std::uint32_t xi = 0; xi < f.p(); ++xi) {
    bool hits_zero = false, ok = true;
    for (unsigned j = 0; j < r && ok; ++j) {
      const u64 v = (xi + j) % f.p();
      hits_zero |= v == 0;
      ok = v == 0 || dpow[v] != 0;
    }
    out.m0 += hits_zero && ok;
  }
  return out;
}

inline ConsecutiveCounts count_consecutive_dpowers(const FieldSpec& f, u64 d, unsigned r,
                                                   const OracleBounds& bounds = OracleBounds::from_env()) {
  require_run_length(r, f.p());
  require_divides(d, f.q() - 1);
  require_oracle_size(f, bounds.enumeration, "count_consecutive_dpowers");
  return count_consecutive_dpowers(f, dth_power_map(f, d, find_generator(f)), r);
}

// M_0 for r = p: p when (p - 1) | n, else 0.
inline u64 m0_predicted(u64 p, u64 n) { return n % (p - 1) == 0 ? p : 0; }

// N = #{(x, y_1..y_r) : y_j^d = x + j - 1}, tallied by the number of
// coordinates with d roots so the big-integer work is O(r).
inline BigInt count_system_solutions(const FieldSpec& f, const std::vector<std::uint8_t>& dpow, u64 d, unsigned r) {
  require_run_length(r, f.p());
  std::vector<u64> tally(r + 1, 0);
  for (u64 c = 0; c < f.q(); ++c) {
    unsigned powers = 0;
    bool ok = true;
    for (unsigned j = 0; j < r && ok; ++j) {
      const u64 v = f.add_const({c}, j).code;
      if (v == 0) continue;
      if (dpow[v]) ++powers; else ok = false;
    }
    if (ok) ++tally[powers];
  }
  BigInt n = 0;
  for (unsigned a = 0; a <= r; ++a) n += BigInt(tally[a]) * boost::multiprecision::pow(BigInt(d), a);
  return n;
}

inline BigInt count_system_solutions(const FieldSpec& f, u64 d, unsigned r,
                                     const OracleBounds& bounds = OracleBounds::from_env()) {
  require_run_length(r, f.p());
  require_divides(d, f.q() - 1);
  require_oracle_size(f, bounds.enumeration, "count_system_solutions");
  return count_system_solutions(f, dth_power_map(f, d, find_generator(f)), d, r);
}

// A character of exact order d: chi(g^a) = exp(2 pi i a / d), chi(0) = 0.
struct CharacterSpec {
  FieldSpec field;
  FqElem generator;
  u64 d = 1;
  std::vector<std::uint32_t> dlog;  // indexed by code; dlog[0] unused

  std::uint32_t exponent(FqElem a) const { return static_cast<std::uint32_t>(dlog[a.code] % d); }
};

inline CharacterSpec make_character(const FieldSpec& f, u64 d, const OracleBounds& bounds = OracleBounds::from_env()) {
  require_divides(d, f.q() - 1);
  require_oracle_size(f, bounds.character, "character table");
  CharacterSpec chi{f, find_generator(f), d, std::vector<std::uint32_t>(f.q(), 0)};
  FqElem x = f.one();
  for (u64 a = 0; a + 1 < f.q(); ++a) {
    chi.dlog[x.code] = static_cast<std::uint32_t>(a);
    x = f.mul(x, chi.generator);
  }
  return chi;
}

namespace detail {

inline std::vector<std::complex<double>> root_table(u64 d) {
  std::vector<std::complex<double>> z(d);
  for (u64 e = 0; e < d; ++e) z[e] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(d));
  return z;
}

inline std::vector<i128> poly_div_exact(std::vector<i128> a, const std::vector<i128>& b) {
  const std::size_t db = b.size() - 1;
  std::vector<i128> quo(a.size() - db, 0);
  for (std::size_t t = a.size(); t-- > db;) {
    const i128 c = a[t] / b[db];
    quo[t - db] = c;
    for (std::size_t i = 0; i <= db; ++i) a[t - db + i] -= c * b[i];
  }
  return quo;
}

// Phi_d via x^d - 1 = prod_{m | d} Phi_m.
inline std::vector<i128> cyclotomic(u64 d) {
  std::vector<i128> phi(d + 1, 0);
  phi[0] = -1;
  phi[d] = 1;
  for (u64 m = 1; m < d; ++m) {
    if (d % m != 0) continue;
    phi = poly_div_exact(std::move(phi), cyclotomic(m));
  }
  return phi;
}

// sum_e h[e] zeta_d^e as an integer when it is one, by reduction mod Phi_d.
inline std::optional<i128> cyclotomic_value(std::vector<i128> h, u64 d) {
  const auto phi = cyclotomic(d);
  const std::size_t deg = phi.size() - 1;
  for (std::size_t t = h.size(); t-- > deg;) {
    const i128 c = h[t];
    if (c == 0) continue;
    for (std::size_t i = 0; i <= deg; ++i) h[t - deg + i] -= c * phi[i];
  }
  for (std::size_t i = 1; i < std::min(deg, h.size()); ++i)
    if (h[i] != 0) return std::nullopt;
  return h.empty() ? i128{0} : h[0];
}

// Per-point exponent tables L_j(xi) = dlog(xi + j) mod d for j < r. Points
// where some xi + j vanishes are moved to the tail with that L set to 0.
struct ShiftTables {
  std::vector<u64> points;              // codes, generic points first
  std::vector<std::vector<std::uint32_t>> logs;  // logs[j][idx]
  std::vector<unsigned> zero_shift;     // for tail entries: the j with xi + j = 0
  std::size_t generic = 0;
};

inline ShiftTables shift_tables(const CharacterSpec& chi, unsigned r) {
  const auto& f = chi.field;
  ShiftTables t;
  t.logs.assign(r, {});
  std::vector<u64> tail;
  for (u64 c = 0; c < f.q(); ++c) {
    bool special = false;
    for (unsigned j = 0; j < r; ++j) special |= f.add_const({c}, j).code == 0;
    if (special) tail.push_back(c); else t.points.push_back(c);
  }
  t.generic = t.points.size();
  for (u64 c : tail) {
    t.points.push_back(c);
    for (unsigned j = 0; j < r; ++j)
      if (f.add_const({c}, j).code == 0) t.zero_shift.push_back(j);
  }
  for (unsigned j = 0; j < r; ++j) {
    t.logs[j].reserve(t.points.size());
    for (u64 c : t.points) {
      const u64 v = f.add_const({c}, j).code;
      t.logs[j].push_back(v == 0 ? 0u : chi.exponent({v}));
    }
  }
  return t;
}

}  // namespace detail

struct CharacterSum {
  std::complex<double> value;
  std::optional<BigInt> exact;  // set when the cyclotomic reduction is a pure integer
  std::string route;            // "tuples" (literal enumeration) or "fubini"
  u64 tuples = 0;
};

// Literal enumeration of every exponent tuple costs about q * d^r steps;
// above this the sum over tuples is taken first, per point, in Z[x]/(x^d - 1).
inline constexpr u64 kLiteralTupleBudget = u64{1} << 30;
inline constexpr long double kFubiniBudget = 68719476736.0L;  // 2^36

namespace detail {

// Visits every tuple in [0, d)^r in odometer order, maintaining the integer
// histogram of chi-exponents over all points; calls visit(tuple, hist).
template <class Visit>
void for_each_tuple(const CharacterSpec& chi, unsigned r, const ShiftTables& t, Visit&& visit) {
  const u64 d = chi.d;
  const std::size_t np = t.points.size();
  std::vector<std::uint32_t> e(np, 0);
  std::vector<u64> tuple(r, 0);
  std::vector<u64> hist(d, 0);
  for (;;) {
    std::fill(hist.begin(), hist.end(), 0);
    for (std::size_t i = 0; i < t.generic; ++i) ++hist[e[i]];
    for (std::size_t i = t.generic; i < np; ++i)
      if (tuple[t.zero_shift[i - t.generic]] == 0) ++hist[e[i]];
    visit(tuple, hist);
    unsigned j = 0;
    while (j < r && tuple[j] + 1 == d) tuple[j++] = 0;
    if (j == r) return;
    ++tuple[j];
    for (unsigned s = 0; s <= j; ++s) {
      const auto& lg = t.logs[s];
      for (std::size_t i = 0; i < np; ++i) {
        const std::uint32_t v = e[i] + lg[i];
        e[i] = v >= d ? static_cast<std::uint32_t>(v - d) : v;
      }
    }
  }
}

inline u64 saturating_tuple_cost(u64 q, u64 d, unsigned r) {
  long double c = static_cast<long double>(q);
  for (unsigned i = 0; i < r; ++i) c *= static_cast<long double>(d);
  return c > 1.8e19L ? ~u64{0} : static_cast<u64>(c);
}

inline CharacterSum finish(const std::vector<i128>& hist, u64 d, const char* route, u64 tuples) {
  // Histogram entries reach 1e17 on the larger fields, so doubles lose the
  // units digit to cancellation; the sum is taken at 50 digits instead.
  using F = boost::multiprecision::cpp_bin_float_50;
  const F tau = 2 * boost::math::constants::pi<F>() / F(d);
  F re = 0, im = 0;
  for (u64 e = 0; e < d; ++e) {
    if (hist[e] == 0) continue;
    const bool neg = hist[e] < 0;
    const auto mag = static_cast<unsigned __int128>(neg ? -hist[e] : hist[e]);
    F h = F(static_cast<u64>(mag >> 64)) * F(18446744073709551616.0) + F(static_cast<u64>(mag));
    if (neg) h = -h;
    const F a = tau * F(e);
    re += h * cos(a);
    im += h * sin(a);
  }
  CharacterSum out;
  out.value = {static_cast<double>(re), static_cast<double>(im)};
  if (auto v = cyclotomic_value(hist, d)) {
    // i128 -> BigInt through two 64-bit halves.
    const bool neg = *v < 0;
    const auto mag = static_cast<unsigned __int128>(neg ? -*v : *v);
    BigInt b = BigInt(static_cast<u64>(mag >> 64));
    b <<= 64;
    b += static_cast<u64>(mag);
    out.exact = neg ? BigInt(-b) : b;
  }
  out.route = route;
  out.tuples = tuples;
  return out;
}

}  // namespace detail

// sum over (i_1..i_r) in [0,d)^r of sum_xi chi(xi^{i_1} (xi+1)^{i_2} ...),
// with 0^0 = 1 and chi(0) = 0.
inline CharacterSum character_sum_count(const CharacterSpec& chi, unsigned r,
                                        u64 literal_budget = kLiteralTupleBudget) {
  require_run_length(r, chi.field.p());
  const u64 d = chi.d;
  const auto t = detail::shift_tables(chi, r);
  std::vector<i128> total(d, 0);
  if (detail::saturating_tuple_cost(chi.field.q(), d, r) <= literal_budget) {
    u64 count = 0;
    detail::for_each_tuple(chi, r, t, [&](const std::vector<u64>&, const std::vector<u64>& hist) {
      for (u64 e = 0; e < d; ++e) total[e] += hist[e];
      ++count;
    });
    return detail::finish(total, d, "tuples", count);
  }
  if (static_cast<long double>(chi.field.q()) * r * d * d > kFubiniBudget) {
    throw OracleRefusal("character sum over q = " + std::to_string(chi.field.q()) + ", d = " + std::to_string(d) +
                        " exceeds the evaluation budget");
  }
  // Per point: prod_j sum_{i<d} x^{i L_j} (or 1 where xi + j = 0), in Z[x]/(x^d - 1).
  std::vector<i128> acc(d), factor(d), next(d);
  for (std::size_t i = 0; i < t.points.size(); ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    acc[0] = 1;
    for (unsigned j = 0; j < r; ++j) {
      const bool vanishes = i >= t.generic && t.zero_shift[i - t.generic] == j;
      if (vanishes) continue;
      std::fill(factor.begin(), factor.end(), 0);
      for (u64 a = 0, e = 0; a < d; ++a, e = (e + t.logs[j][i]) % d) ++factor[e];
      std::fill(next.begin(), next.end(), 0);
      for (u64 a = 0; a < d; ++a) {
        if (acc[a] == 0) continue;
        for (u64 b = 0; b < d; ++b)
          if (factor[b] != 0) next[(a + b) % d] += acc[a] * factor[b];
      }
      acc.swap(next);
    }
    for (u64 e = 0; e < d; ++e) total[e] += acc[e];
  }
  return detail::finish(total, d, "fubini", 0);
}

struct WeilTerm {
  double sum_abs = 0.0;
  unsigned w = 0;
  double bound = 0.0;
  bool ok = false;
};

inline WeilTerm weil_term_report(const CharacterSpec& chi, unsigned r, const std::vector<u64>& tuple) {
  require_run_length(r, chi.field.p());
  if (tuple.size() != r) throw std::invalid_argument("tuple length must equal r");
  WeilTerm out;
  for (u64 i : tuple) {
    if (i >= chi.d) throw std::invalid_argument("tuple exponents must lie in [0, d)");
    out.w += i != 0;
  }
  if (out.w == 0) throw std::invalid_argument("the zero tuple has no Weil bound");
  const auto& f = chi.field;
  const auto z = detail::root_table(chi.d);
  std::complex<double> s = 0;
  for (u64 c = 0; c < f.q(); ++c) {
    u64 e = 0;
    bool zero = false;
    for (unsigned j = 0; j < r && !zero; ++j) {
      if (tuple[j] == 0) continue;
      const u64 v = f.add_const({c}, j).code;
      if (v == 0) zero = true; else e = (e + tuple[j] * chi.exponent({v})) % chi.d;
    }
    if (!zero) s += z[e];
  }
  out.sum_abs = std::abs(s);
  out.bound = (out.w - 1) * std::sqrt(static_cast<double>(f.q()));
  out.ok = out.sum_abs <= out.bound + 1e-6;
  return out;
}

struct WeilSweep {
  u64 checked = 0;
  u64 violations = 0;
  bool exhaustive = false;
  double worst_ratio = 0.0;  // max |S| / ((w-1) sqrt q) over w >= 2
  std::optional<CharacterSum> total;  // literal sum over all tuples, when exhaustive
};

// Every nonzero tuple when q * d^r <= budget. Otherwise all single-entry
// tuples plus `samples` uniformly drawn ones, which cannot certify the rest.
inline WeilSweep weil_sweep(const CharacterSpec& chi, unsigned r, u64 budget, u64 samples,
                            u64 seed = numth::kDefaultSeed) {
  require_run_length(r, chi.field.p());
  WeilSweep out;
  const u64 d = chi.d;
  if (d == 1) {
    out.exhaustive = true;
    return out;
  }
  const double sq = std::sqrt(static_cast<double>(chi.field.q()));
  const auto z = detail::root_table(d);
  auto judge = [&](unsigned w, double sum_abs) {
    ++out.checked;
    const double bound = (w - 1) * sq;
    if (sum_abs > bound + 1e-6) ++out.violations;
    if (w >= 2) out.worst_ratio = std::max(out.worst_ratio, sum_abs / bound);
  };
  if (detail::saturating_tuple_cost(chi.field.q(), d, r) <= budget) {
    out.exhaustive = true;
    const auto t = detail::shift_tables(chi, r);
    std::vector<i128> total(d, 0);
    u64 count = 0;
    detail::for_each_tuple(chi, r, t, [&](const std::vector<u64>& tuple, const std::vector<u64>& hist) {
      ++count;
      std::complex<double> s = 0;
      for (u64 e = 0; e < d; ++e) {
        total[e] += hist[e];
        if (hist[e] != 0) s += static_cast<double>(hist[e]) * z[e];
      }
      unsigned w = 0;
      for (u64 i : tuple) w += i != 0;
      if (w != 0) judge(w, std::abs(s));
    });
    out.total = detail::finish(total, d, "tuples", count);
    return out;
  }
  std::vector<u64> tuple(r, 0);
  for (unsigned j = 0; j < r; ++j) {
    for (u64 i = 1; i < d; ++i) {
      std::fill(tuple.begin(), tuple.end(), 0);
      tuple[j] = i;
      const auto rep = weil_term_report(chi, r, tuple);
      judge(rep.w, rep.sum_abs);
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<u64> dist(0, d - 1);
  for (u64 s = 0; s < samples; ++s) {
    for (auto& i : tuple) i = dist(rng);
    if (std::all_of(tuple.begin(), tuple.end(), [](u64 i) { return i == 0; })) continue;
    const auto rep = weil_term_report(chi, r, tuple);
    judge(rep.w, rep.sum_abs);
  }
  return out;
}

}  // namespace npset::gfq
