#pragma once

// Dense univariate polynomials over GF(p), p < 2^16, and the gcd-based
// common-root locus gcd_{lambda in GF(p)} ((x + lambda)^n - 1).
//
// GF(2) gets its own bit-packed representation (GF2Poly) because the
// membership sweeps run Euclid on degree ~10^5 operands.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#if defined(__PCLMUL__) && defined(__SSE4_1__)
#include <immintrin.h>
#define NPSET_HAVE_PCLMUL 1
#endif

#include "npset/numth.hpp"

namespace npset::gfpoly {

using u64 = std::uint64_t;

// Arithmetic in Z/pZ for p < 2^16 with a division-free reduction of
// products t < p^2 (t - p * floor(t * m / 2^s), exact because 2^s > p^3).
class Zp {
 public:
  explicit Zp(std::uint32_t p) : p_(p) {
    if (p < 2 || p >= (1u << 16) || !numth::is_prime(p)) {
      throw std::invalid_argument("GF(p) polynomials need a prime p < 65536, got " + std::to_string(p));
    }
    const u64 cube = u64{p} * p * p;
    shift_ = static_cast<unsigned>(std::bit_width(cube));
    magic_ = static_cast<std::uint32_t>(((u64{1} << shift_) + p - 1) / p);
    fast_ = (u64{p} << shift_) + u64{p} * p < (u64{1} << 32);
  }

  std::uint32_t p() const { return p_; }
  std::uint32_t reduce(std::uint32_t t) const {
    return fast_ ? t - p_ * static_cast<std::uint32_t>((u64{t} * magic_) >> shift_) : t % p_;
  }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    const std::uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return a >= b ? a - b : a + p_ - b; }
  std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : p_ - a; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return reduce(a * b); }
  std::uint32_t pow(std::uint32_t a, u64 e) const {
    return static_cast<std::uint32_t>(numth::powmod(a, e, p_));
  }
  std::uint32_t inv(std::uint32_t a) const {
    if (a % p_ == 0) throw std::domain_error("inverse of zero in GF(p)");
    return pow(a, p_ - 2);
  }

  // dst[i] += c * src[i] for i < len.
  void axpy(std::uint16_t* dst, const std::uint16_t* src, std::size_t len, std::uint32_t c) const {
    if (fast_) {
      const std::uint32_t p = p_, m = magic_;
      const unsigned s = shift_;
      for (std::size_t i = 0; i < len; ++i) {
        const std::uint32_t t = dst[i] + c * src[i];
        dst[i] = static_cast<std::uint16_t>(t - p * ((t * m) >> s));
      }
    } else {
      for (std::size_t i = 0; i < len; ++i) dst[i] = static_cast<std::uint16_t>((dst[i] + c * src[i]) % p_);
    }
  }

 private:
  std::uint32_t p_;
  std::uint32_t magic_ = 0;
  unsigned shift_ = 0;
  bool fast_ = false;
};

// Coefficients in [0, p), index = degree, no trailing zeros (empty == 0).
class GFpPoly {
 public:
  using Coeff = std::uint16_t;

  explicit GFpPoly(std::uint32_t p = 2) : p_(p) { validate(p); }

  // Arbitrary integer coefficients, reduced into [0, p).
  GFpPoly(std::uint32_t p, const std::vector<std::int64_t>& coeffs) : p_(p) {
    validate(p);
    c_.reserve(coeffs.size());
    const auto mod = static_cast<std::int64_t>(p);
    for (auto v : coeffs) c_.push_back(static_cast<Coeff>(((v % mod) + mod) % mod));
    trim();
  }

  static GFpPoly from_residues(std::uint32_t p, std::vector<Coeff> coeffs) {
    GFpPoly out(p);
    for (auto v : coeffs) {
      if (v >= p) throw std::invalid_argument("coefficient out of range for GF(" + std::to_string(p) + ")");
    }
    out.c_ = std::move(coeffs);
    out.trim();
    return out;
  }
  static GFpPoly monomial(std::uint32_t p, std::size_t deg, std::uint32_t coeff = 1) {
    std::vector<Coeff> c(deg + 1, 0);
    c[deg] = static_cast<Coeff>(coeff % p);
    return from_residues(p, std::move(c));
  }
  static GFpPoly constant(std::uint32_t p, std::uint32_t value) { return monomial(p, 0, value); }

  std::uint32_t modulus() const { return p_; }
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  Coeff coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
  Coeff lead() const { return c_.empty() ? 0 : c_.back(); }
  std::span<const Coeff> coeffs() const { return c_; }

  // Descending degree, unit coefficients suppressed: "x^3+2x+1".
  std::string to_string() const {
    if (c_.empty()) return "0";
    std::string out;
    for (long i = degree(); i >= 0; --i) {
      const auto c = c_[static_cast<std::size_t>(i)];
      if (c == 0) continue;
      if (!out.empty()) out += '+';
      if (c != 1 || i == 0) out += std::to_string(c);
      if (i >= 1) out += 'x';
      if (i >= 2) out += '^' + std::to_string(i);
    }
    return out;
  }

  friend bool operator==(const GFpPoly&, const GFpPoly&) = default;

 private:
  static void validate(std::uint32_t p) { static_cast<void>(Zp(p)); }
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::uint32_t p_;
  std::vector<Coeff> c_;
};

inline void require_same_field(const GFpPoly& a, const GFpPoly& b) {
  if (a.modulus() != b.modulus()) {
    throw std::invalid_argument("polynomial modulus mismatch: " + std::to_string(a.modulus()) + " vs " +
                                std::to_string(b.modulus()));
  }
}

namespace detail {

using Coeffs = std::vector<GFpPoly::Coeff>;

inline void trim(Coeffs& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

inline void scale(Coeffs& c, std::uint32_t s, const Zp& f) {
  for (auto& v : c) v = static_cast<GFpPoly::Coeff>(f.mul(v, s));
}

inline void make_monic(Coeffs& c, const Zp& f) {
  if (!c.empty() && c.back() != 1) scale(c, f.inv(c.back()), f);
}

// a <- a mod b, b monic and nonzero.
inline void rem_monic(Coeffs& a, const Coeffs& b, const Zp& f) {
  const std::size_t db = b.size() - 1;
  while (a.size() >= b.size()) {
    const std::uint32_t lead = a.back();
    if (lead != 0) f.axpy(a.data() + (a.size() - 1 - db), b.data(), db + 1, f.neg(lead));
    a.pop_back();
    trim(a);
  }
}

// Schoolbook; each accumulator collects fewer than 2^31 products below 2^32.
inline Coeffs mul(const Coeffs& a, const Coeffs& b, const Zp& f) {
  if (a.empty() || b.empty()) return {};
  std::vector<u64> acc(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    const u64 ai = a[i];
    for (std::size_t j = 0; j < b.size(); ++j) acc[i + j] += ai * b[j];
  }
  Coeffs out(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) out[i] = static_cast<GFpPoly::Coeff>(acc[i] % f.p());
  trim(out);
  return out;
}

inline Coeffs gcd_monic(Coeffs a, Coeffs b, const Zp& f) {
  if (a.size() < b.size()) std::swap(a, b);
  while (!b.empty()) {
    make_monic(b, f);
    rem_monic(a, b, f);
    std::swap(a, b);
  }
  make_monic(a, f);
  return a;
}

}  // namespace detail

inline GFpPoly add(const GFpPoly& a, const GFpPoly& b) {
  require_same_field(a, b);
  const Zp f(a.modulus());
  detail::Coeffs out(std::max(a.coeffs().size(), b.coeffs().size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<GFpPoly::Coeff>(f.add(a.coeff(i), b.coeff(i)));
  return GFpPoly::from_residues(a.modulus(), std::move(out));
}

inline GFpPoly sub(const GFpPoly& a, const GFpPoly& b) {
  require_same_field(a, b);
  const Zp f(a.modulus());
  detail::Coeffs out(std::max(a.coeffs().size(), b.coeffs().size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<GFpPoly::Coeff>(f.sub(a.coeff(i), b.coeff(i)));
  return GFpPoly::from_residues(a.modulus(), std::move(out));
}

inline GFpPoly mul(const GFpPoly& a, const GFpPoly& b) {
  require_same_field(a, b);
  const Zp f(a.modulus());
  detail::Coeffs ac(a.coeffs().begin(), a.coeffs().end()), bc(b.coeffs().begin(), b.coeffs().end());
  return GFpPoly::from_residues(a.modulus(), detail::mul(ac, bc, f));
}

inline GFpPoly make_monic(const GFpPoly& a) {
  const Zp f(a.modulus());
  detail::Coeffs c(a.coeffs().begin(), a.coeffs().end());
  detail::make_monic(c, f);
  return GFpPoly::from_residues(a.modulus(), std::move(c));
}

struct DivMod {
  GFpPoly quotient;
  GFpPoly remainder;
};

inline DivMod divmod(const GFpPoly& a, const GFpPoly& b) {
  require_same_field(a, b);
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  const std::uint32_t p = a.modulus();
  const Zp f(p);
  const std::uint32_t inv_lead = f.inv(b.lead());
  detail::Coeffs r(a.coeffs().begin(), a.coeffs().end());
  const detail::Coeffs bc(b.coeffs().begin(), b.coeffs().end());
  const std::size_t db = bc.size() - 1;
  detail::Coeffs q(r.size() >= bc.size() ? r.size() - db : 0, 0);
  while (r.size() >= bc.size()) {
    const std::size_t shift = r.size() - 1 - db;
    const std::uint32_t c = f.mul(r.back(), inv_lead);
    q[shift] = static_cast<GFpPoly::Coeff>(c);
    if (c != 0) f.axpy(r.data() + shift, bc.data(), db + 1, f.neg(c));
    r.pop_back();
    detail::trim(r);
  }
  return {GFpPoly::from_residues(p, std::move(q)), GFpPoly::from_residues(p, std::move(r))};
}

// ---------------------------------------------------------------------------
// GF(2), bit-packed.

namespace detail {

inline void clmul64_portable(u64 a, u64 b, u64& lo, u64& hi) {
  lo = hi = 0;
  while (b != 0) {
    const int i = std::countr_zero(b);
    lo ^= a << i;
    if (i != 0) hi ^= a >> (64 - i);
    b &= b - 1;
  }
}

inline void clmul64(u64 a, u64 b, u64& lo, u64& hi) {
#ifdef NPSET_HAVE_PCLMUL
  const __m128i r = _mm_clmulepi64_si128(_mm_cvtsi64_si128(static_cast<long long>(a)),
                                         _mm_cvtsi64_si128(static_cast<long long>(b)), 0);
  lo = static_cast<u64>(_mm_cvtsi128_si64(r));
  hi = static_cast<u64>(_mm_extract_epi64(r, 1));
#else
  clmul64_portable(a, b, lo, hi);
#endif
}

inline long poly_deg64(u64 v) { return v == 0 ? -1 : 63 - std::countl_zero(v); }

}  // namespace detail

class GF2Poly {
 public:
  GF2Poly() = default;

  static GF2Poly from_gfp(const GFpPoly& a) {
    if (a.modulus() != 2) throw std::invalid_argument("GF2Poly::from_gfp needs p = 2");
    GF2Poly out;
    for (std::size_t i = 0; i < a.coeffs().size(); ++i)
      if (a.coeffs()[i]) out.flip(i);
    out.normalize();
    return out;
  }

  // x^n + 1
  static GF2Poly x_pow_plus_one(u64 n) {
    GF2Poly out;
    out.flip(n);
    out.flip(0);
    out.normalize();
    return out;
  }

  // (x + 1)^n + 1: the coefficient of x^j in (x+1)^n is 1 iff j is a
  // bit-submask of n (Lucas), so only the submasks are visited.
  static GF2Poly shifted_pow_plus_one(u64 n) {
    GF2Poly out;
    out.w_.assign(n / 64 + 1, 0);
    for (u64 s = n;; s = (s - 1) & n) {
      out.flip(s);
      if (s == 0) break;
    }
    out.flip(0);
    out.normalize();
    return out;
  }

  GFpPoly to_gfp() const {
    std::vector<GFpPoly::Coeff> c(static_cast<std::size_t>(deg_ + 1), 0);
    for (long i = 0; i <= deg_; ++i) c[static_cast<std::size_t>(i)] = bit(static_cast<std::size_t>(i));
    return GFpPoly::from_residues(2, std::move(c));
  }

  long degree() const { return deg_; }
  bool is_zero() const { return deg_ < 0; }
  bool bit(std::size_t i) const { return i / 64 < w_.size() && ((w_[i / 64] >> (i % 64)) & 1); }
  std::span<const u64> words() const { return w_; }

  friend GF2Poly gcd(GF2Poly a, GF2Poly b);
  friend GF2Poly gcd_plain(GF2Poly a, GF2Poly b);
  friend bool operator==(const GF2Poly& a, const GF2Poly& b) { return a.deg_ == b.deg_ && a.w_ == b.w_; }

 private:
  void flip(u64 i) {
    if (i / 64 >= w_.size()) w_.resize(i / 64 + 1, 0);
    w_[i / 64] ^= u64{1} << (i % 64);
  }
  void normalize() {
    while (!w_.empty() && w_.back() == 0) w_.pop_back();
    deg_ = w_.empty() ? -1 : static_cast<long>(64 * (w_.size() - 1)) + detail::poly_deg64(w_.back());
  }
  // 64 coefficients starting at position pos.
  u64 window(long pos) const {
    const auto word = static_cast<std::size_t>(pos / 64);
    const unsigned sh = static_cast<unsigned>(pos % 64);
    u64 v = word < w_.size() ? w_[word] >> sh : 0;
    if (sh != 0 && word + 1 < w_.size()) v |= w_[word + 1] << (64 - sh);
    return v;
  }
  // this ^= other * x^s
  void add_shifted(const GF2Poly& other, long s) {
    const auto ws = static_cast<std::size_t>(s / 64);
    const unsigned bs = static_cast<unsigned>(s % 64);
    const std::size_t need = static_cast<std::size_t>((other.deg_ + s) / 64 + 1);
    if (w_.size() < need) w_.resize(need, 0);
    const u64* src = other.w_.data();
    u64* dst = w_.data() + ws;
    const std::size_t n = other.w_.size();
    if (bs == 0) {
      for (std::size_t i = 0; i < n; ++i) dst[i] ^= src[i];
    } else {
      dst[0] ^= src[0] << bs;
      for (std::size_t i = 1; i < n; ++i) dst[i] ^= (src[i] << bs) | (src[i - 1] >> (64 - bs));
      if (ws + n < w_.size()) dst[n] ^= src[n - 1] >> (64 - bs);
    }
    normalize();
  }

  std::vector<u64> w_;
  long deg_ = -1;
};

// Textbook Euclid; kept as the reference for the batched version below.
inline GF2Poly gcd_plain(GF2Poly a, GF2Poly b) {
  if (a.deg_ < b.deg_) std::swap(a, b);
  while (!b.is_zero()) {
    while (a.deg_ >= b.deg_) a.add_shifted(b, a.deg_ - b.deg_);
    std::swap(a, b);
  }
  return a;
}

// Euclid batched over the leading 64 coefficients: elimination steps are
// planned on the top words and accumulated in a 2x2 matrix of polynomials of
// degree < 64, which is then applied to the full operands with carry-less
// multiplication. A step is planned only while both leading bits lie above
// the band that the low-order words can still disturb, so every applied
// matrix strictly lowers the leading degree. Any product of such matrices is
// unimodular, which is all the gcd needs.
inline GF2Poly gcd(GF2Poly a, GF2Poly b) {
  std::vector<u64> na, nb;
  for (;;) {
    if (a.deg_ < b.deg_) std::swap(a, b);
    if (b.is_zero()) break;
    if (a.deg_ < 128) {
      a.add_shifted(b, a.deg_ - b.deg_);
      continue;
    }
    const long pos = a.deg_ - 63;
    u64 wa = a.window(pos), wb = b.deg_ >= pos ? b.window(pos) : 0;
    u64 m00 = 1, m01 = 0, m10 = 0, m11 = 1;
    long band = 0;
    int steps = 0;
    while (wb != 0) {
      long da = detail::poly_deg64(wa), db = detail::poly_deg64(wb);
      if (da < db) {
        std::swap(wa, wb);
        std::swap(m00, m10);
        std::swap(m01, m11);
        std::swap(da, db);
      }
      if (db < band) break;
      const long s = da - db;
      wa ^= wb << s;
      m00 ^= m10 << s;
      m01 ^= m11 << s;
      band = std::max({band, detail::poly_deg64(m00), detail::poly_deg64(m01)});
      ++steps;
    }
    if (steps == 0) {
      a.add_shifted(b, a.deg_ - b.deg_);
      continue;
    }
    const std::size_t len = std::max(a.w_.size(), b.w_.size());
    na.assign(len + 1, 0);
    nb.assign(len + 1, 0);
    const u64* pa = a.w_.data();
    const u64* pb = b.w_.data();
    const std::size_t alen = a.w_.size(), blen = b.w_.size();
    for (std::size_t i = 0; i < len; ++i) {
      const u64 ai = i < alen ? pa[i] : 0;
      const u64 bi = i < blen ? pb[i] : 0;
      u64 l0, h0, l1, h1;
      detail::clmul64(m00, ai, l0, h0);
      detail::clmul64(m01, bi, l1, h1);
      na[i] ^= l0 ^ l1;
      na[i + 1] ^= h0 ^ h1;
      detail::clmul64(m10, ai, l0, h0);
      detail::clmul64(m11, bi, l1, h1);
      nb[i] ^= l0 ^ l1;
      nb[i + 1] ^= h0 ^ h1;
    }
    a.w_.swap(na);
    b.w_.swap(nb);
    a.normalize();
    b.normalize();
  }
  return a;
}

// ---------------------------------------------------------------------------

inline GFpPoly poly_gcd(const GFpPoly& a, const GFpPoly& b) {
  require_same_field(a, b);
  if (a.is_zero() && b.is_zero()) throw std::invalid_argument("poly_gcd of two zero polynomials");
  if (a.modulus() == 2) return gcd(GF2Poly::from_gfp(a), GF2Poly::from_gfp(b)).to_gfp();
  const Zp f(a.modulus());
  return GFpPoly::from_residues(a.modulus(),
                                detail::gcd_monic({a.coeffs().begin(), a.coeffs().end()},
                                                  {b.coeffs().begin(), b.coeffs().end()}, f));
}

inline GFpPoly poly_powmod(const GFpPoly& base, u64 e, const GFpPoly& modulus) {
  require_same_field(base, modulus);
  if (modulus.degree() < 1) throw std::invalid_argument("poly_powmod needs a modulus of degree >= 1");
  const std::uint32_t p = base.modulus();
  const Zp f(p);
  detail::Coeffs m(modulus.coeffs().begin(), modulus.coeffs().end());
  detail::make_monic(m, f);
  detail::Coeffs b(base.coeffs().begin(), base.coeffs().end());
  detail::rem_monic(b, m, f);
  detail::Coeffs result{1};
  while (e != 0) {
    if (e & 1) {
      result = detail::mul(result, b, f);
      detail::rem_monic(result, m, f);
    }
    e >>= 1;
    if (e != 0) {
      b = detail::mul(b, b, f);
      detail::rem_monic(b, m, f);
    }
  }
  return GFpPoly::from_residues(p, std::move(result));
}

// (x + lambda)^n - 1. Binomials mod p come from Lucas' theorem, so only the
// j whose base-p digits are bounded by those of n are visited.
inline GFpPoly shifted_power_minus_one(std::uint32_t p, std::uint32_t lambda, u64 n) {
  if (n == 0) throw std::invalid_argument("shifted_power_minus_one needs n >= 1");
  const Zp f(p);
  if (lambda >= p) throw std::invalid_argument("lambda must be a residue in [0, p)");

  std::vector<std::uint32_t> fact(p), inv_fact(p);
  fact[0] = 1;
  for (std::uint32_t i = 1; i < p; ++i) fact[i] = f.mul(fact[i - 1], i);
  inv_fact[p - 1] = f.inv(fact[p - 1]);
  for (std::uint32_t i = p - 1; i > 0; --i) inv_fact[i - 1] = f.mul(inv_fact[i], i);
  auto small_binom = [&](std::uint32_t a, std::uint32_t b) {
    return f.mul(fact[a], f.mul(inv_fact[b], inv_fact[a - b]));
  };

  std::vector<std::uint32_t> digits;
  std::vector<u64> place;
  for (u64 m = n, pw = 1; m != 0; m /= p, pw *= p) {
    digits.push_back(static_cast<std::uint32_t>(m % p));
    place.push_back(pw);
  }

  std::vector<GFpPoly::Coeff> c(n + 1, 0);
  // lambda^(n-j): lambda^e = lambda^(e mod (p-1)) for lambda != 0.
  auto lambda_pow = [&](u64 e) -> std::uint32_t {
    if (lambda == 0) return e == 0 ? 1 : 0;
    return f.pow(lambda, e % (p - 1));
  };
  // Depth-first over digit choices j_i in [0, n_i].
  struct Frame {
    std::size_t digit;
    u64 j;
    std::uint32_t binom;
  };
  std::vector<Frame> stack{{0, 0, 1}};
  while (!stack.empty()) {
    const Frame fr = stack.back();
    stack.pop_back();
    if (fr.digit == digits.size()) {
      const std::uint32_t term = f.mul(fr.binom, lambda_pow(n - fr.j));
      c[fr.j] = static_cast<GFpPoly::Coeff>(term);
      continue;
    }
    for (std::uint32_t d = 0; d <= digits[fr.digit]; ++d) {
      stack.push_back({fr.digit + 1, fr.j + d * place[fr.digit], f.mul(fr.binom, small_binom(digits[fr.digit], d))});
    }
  }
  c[0] = static_cast<GFpPoly::Coeff>(f.sub(c[0], 1));
  return GFpPoly::from_residues(p, std::move(c));
}

// G = gcd over lambda in GF(p) of ((x + lambda)^n - 1), monic. Its roots are
// exactly the xi with (xi + lambda)^n = 1 for every lambda.
inline GFpPoly common_root_locus(std::uint32_t p, u64 n) {
  numth::require_prime(p);
  if (n == 0) throw std::invalid_argument("common_root_locus needs n >= 1");
  if (n % p == 0) throw std::invalid_argument("common_root_locus needs gcd(n, p) = 1");
  if (p == 2) return gcd(GF2Poly::x_pow_plus_one(n), GF2Poly::shifted_pow_plus_one(n)).to_gfp();

  const Zp f(p);
  GFpPoly g = poly_gcd(shifted_power_minus_one(p, 0, n), shifted_power_minus_one(p, 1, n));
  const GFpPoly one = GFpPoly::constant(p, 1);
  for (std::uint32_t lambda = 2; lambda < p && g.degree() >= 1; ++lambda) {
    const GFpPoly shifted = GFpPoly::from_residues(p, {static_cast<GFpPoly::Coeff>(lambda), 1});
    g = poly_gcd(g, sub(poly_powmod(shifted, n, g), one));
  }
  return g;
}

}  // namespace npset::gfpoly
