#pragma once

// Elementary integer number theory on 64-bit values: modular arithmetic,
// multiplicative orders, factorization and the relative-size measure.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "npset/errors.hpp"

namespace npset::numth {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using BigInt = boost::multiprecision::cpp_int;

inline constexpr u64 kDefaultSeed = 0x6e70736574ULL;

inline u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline u64 powmod(u64 base, u64 e, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (e != 0) {
    if (e & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    e >>= 1;
  }
  return result;
}

// Deterministic Miller-Rabin for the full 64-bit range.
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % small == 0) return n == small;
  }
  u64 odd = n - 1;
  int twos = 0;
  while ((odd & 1) == 0) {
    odd >>= 1;
    ++twos;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = powmod(a, odd, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < twos; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

inline void require_prime(u64 p) {
  if (!is_prime(p)) throw std::invalid_argument("p = " + std::to_string(p) + " is not prime");
}

// p^k, or nullopt-style sentinel 0 when it does not fit in 64 bits.
inline u64 checked_pow(u64 base, unsigned k) {
  u128 acc = 1;
  for (unsigned i = 0; i < k; ++i) {
    acc *= base;
    if (acc > static_cast<u128>(~u64{0})) return 0;
  }
  return static_cast<u64>(acc);
}

// value == prod(prime^exponent)
struct FactoredInt {
  u64 value = 1;
  std::map<u64, unsigned> factors;

  u64 product() const {
    u64 acc = 1;
    for (auto [prime, e] : factors)
      for (unsigned i = 0; i < e; ++i) acc *= prime;
    return acc;
  }
  std::vector<u64> primes() const {
    std::vector<u64> out;
    for (const auto& kv : factors) out.push_back(kv.first);
    return out;
  }
  std::string to_string() const {
    std::string out;
    for (auto [prime, e] : factors) {
      if (!out.empty()) out += "*";
      out += std::to_string(prime);
      if (e > 1) out += "^" + std::to_string(e);
    }
    return out.empty() ? "1" : out;
  }
};

struct FactorOptions {
  u64 seed = kDefaultSeed;
  u64 trial_limit = 1'000'000;
  // Brent cycle steps per rho attempt, and attempts per cofactor.
  u64 rho_steps = u64{1} << 26;
  unsigned rho_attempts = 32;
};

namespace detail {

inline u64 brent_rho(u64 n, std::mt19937_64& rng, const FactorOptions& opt) {
  if (n % 2 == 0) return 2;
  std::uniform_int_distribution<u64> dist(1, n - 1);
  for (unsigned attempt = 0; attempt < opt.rho_attempts; ++attempt) {
    const u64 c = dist(rng);
    u64 y = dist(rng), x = y, saved = y;
    u64 g = 1, acc = 1;
    constexpr u64 kBatch = 128;
    u64 steps = 0;
    for (u64 r = 1; g == 1 && steps < opt.rho_steps; r <<= 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = (mulmod(y, y, n) + c) % n;
      for (u64 k = 0; k < r && g == 1; k += kBatch) {
        saved = y;
        const u64 lim = std::min(kBatch, r - k);
        for (u64 i = 0; i < lim; ++i) {
          y = (mulmod(y, y, n) + c) % n;
          acc = mulmod(acc, x > y ? x - y : y - x, n);
        }
        g = std::gcd(acc, n);
        steps += lim;
      }
    }
    if (g == n) {
      // Batched gcd overshot; replay one step at a time.
      do {
        saved = (mulmod(saved, saved, n) + c) % n;
        g = std::gcd(x > saved ? x - saved : saved - x, n);
      } while (g == 1);
    }
    if (g != 1 && g != n) return g;
  }
  return 0;
}

inline void split(u64 n, std::map<u64, unsigned>& out, std::mt19937_64& rng, const FactorOptions& opt) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  // Perfect squares defeat nothing, but catching them is cheap.
  u64 root = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
  while (static_cast<u128>(root) * root > n) --root;
  while (static_cast<u128>(root + 1) * (root + 1) <= n) ++root;
  if (root * root == n) {
    split(root, out, rng, opt);
    split(root, out, rng, opt);
    return;
  }
  const u64 f = brent_rho(n, rng, opt);
  if (f == 0) throw FactorizationFailure("rho failed to split " + std::to_string(n));
  split(f, out, rng, opt);
  split(n / f, out, rng, opt);
}

}  // namespace detail

// Trial division up to opt.trial_limit, then Brent's variant of Pollard rho
// with a seeded generator so that runs are reproducible.
inline FactoredInt factorize(u64 m, const FactorOptions& opt = {}) {
  if (m < 2) throw std::invalid_argument("factorize requires m >= 2");
  FactoredInt result;
  result.value = m;
  u64 rest = m;
  for (u64 d : {2ULL, 3ULL, 5ULL}) {
    while (rest % d == 0) {
      ++result.factors[d];
      rest /= d;
    }
  }
  // 6k +- 1 wheel.
  for (u64 d = 7, step = 4; d <= opt.trial_limit && d * d <= rest; d += step, step = 6 - step) {
    while (rest % d == 0) {
      ++result.factors[d];
      rest /= d;
    }
  }
  if (rest > 1) {
    std::mt19937_64 rng(opt.seed);
    detail::split(rest, result.factors, rng, opt);
  }
  return result;
}

inline std::vector<u64> divisors(const FactoredInt& f) {
  std::vector<u64> out{1};
  for (auto [prime, e] : f.factors) {
    const std::size_t base = out.size();
    u64 pw = 1;
    for (unsigned i = 1; i <= e; ++i) {
      pw *= prime;
      for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * pw);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<u64> divisors(u64 m, const FactorOptions& opt = {}) {
  if (m == 0) throw std::invalid_argument("divisors requires m >= 1");
  if (m == 1) return {1};
  return divisors(factorize(m, opt));
}

// Least k >= 1 with p^k == 1 (mod n), by iterated multiplication.
// mult_order(p, 1) == 1.
inline u64 mult_order(u64 p, u64 n) {
  if (n == 0) throw std::invalid_argument("mult_order requires n >= 1");
  if (std::gcd(p, n) != 1) {
    throw std::invalid_argument("mult_order requires gcd(p, n) = 1 (p = " + std::to_string(p) +
                                ", n = " + std::to_string(n) + ")");
  }
  if (n == 1) return 1;
  const u64 base = p % n;
  u64 x = base;
  u64 k = 1;
  while (x != 1) {
    x = mulmod(x, base, n);
    ++k;
  }
  return k;
}

// Order of p modulo a big n, by iterated multiplication.
inline u64 mult_order(u64 p, const BigInt& n) {
  if (n < 1) throw std::invalid_argument("mult_order requires n >= 1");
  if (boost::multiprecision::gcd(BigInt(p), n) != 1) throw std::invalid_argument("mult_order requires gcd(p, n) = 1");
  if (n == 1) return 1;
  const BigInt base = BigInt(p) % n;
  BigInt x = base;
  u64 k = 1;
  while (x != 1) {
    x = x * base % n;
    ++k;
  }
  return k;
}

// log(n) / log(p^k - 1) with k = ord_n(p).
struct RelativeSize {
  BigInt n = 0;
  u64 p = 0;
  u64 k = 0;
  double value = 0.0;
};

// Natural log of x >= 1, through the top 64 bits once x outgrows a double.
inline double log_big(const BigInt& x) {
  const auto bits = boost::multiprecision::msb(x) + 1;
  if (bits <= 1000) return std::log(static_cast<double>(x));
  const auto shift = bits - 64;
  return std::log(static_cast<double>(BigInt(x >> shift))) + static_cast<double>(shift) * std::log(2.0);
}

// log(p^k - 1), forming p^k only while it is at most 4096 bits; beyond that
// k log p + log1p(-p^-k), whose error is far below 1e-12 relative.
inline double log_prime_power_minus_one(u64 p, u64 k) {
  const double lp = std::log(static_cast<double>(p));
  if (static_cast<double>(k) * std::log2(static_cast<double>(p)) <= 4096.0) {
    return log_big(boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(k)) - 1);
  }
  return static_cast<double>(k) * lp + std::log1p(-std::exp(-static_cast<double>(k) * lp));
}

inline RelativeSize relative_size(u64 p, const BigInt& n) {
  if (n < 2) throw std::invalid_argument("relative_size requires n >= 2");
  RelativeSize out;
  out.n = n;
  out.p = p;
  out.k = mult_order(p, n);
  out.value = log_big(n) / log_prime_power_minus_one(p, out.k);
  return out;
}

inline RelativeSize relative_size(u64 p, u64 n) {
  if (n < 2) throw std::invalid_argument("relative_size requires n >= 2");
  RelativeSize out;
  out.n = n;
  out.p = p;
  out.k = mult_order(p, n);
  out.value = log_big(BigInt(n)) / log_prime_power_minus_one(p, out.k);
  return out;
}

}  // namespace npset::numth
