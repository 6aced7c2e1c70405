#pragma once

// Densities of sets of multiples, as exact rational enclosures.

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "npset/numth.hpp"

namespace npset::density {

using numth::BigInt;
using numth::u128;
using numth::u64;
using Rational = boost::multiprecision::cpp_rational;

struct RationalInterval {
  Rational lo;
  Rational hi;

  Rational width() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
};

// Decimal rendering with `digits` fractional digits, rounded down or up.
inline std::string to_decimal(const Rational& x, unsigned digits, bool round_up) {
  const BigInt scale = boost::multiprecision::pow(BigInt(10), digits);
  const BigInt num = boost::multiprecision::numerator(x) * scale;
  const BigInt den = boost::multiprecision::denominator(x);
  BigInt q = num / den;  // truncates toward zero
  const bool exact = q * den == num;
  if (!exact) {
    if (round_up && x > 0) q += 1;
    if (!round_up && x < 0) q -= 1;
  }
  const bool neg = q < 0;
  std::string s = (neg ? BigInt(-q) : q).str();
  if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
  if (digits > 0) s.insert(s.size() - digits, ".");
  return neg ? "-" + s : s;
}

inline std::string rational_string(const Rational& x) {
  return boost::multiprecision::numerator(x).str() + "/" + boost::multiprecision::denominator(x).str();
}

enum class Provenance { explicit_list, trivial_set, s_set, minimal_table };

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::explicit_list: return "explicit";
    case Provenance::trivial_set: return "trivial-set";
    case Provenance::s_set: return "S-set";
    case Provenance::minimal_table: return "minimal-table";
  }
  return "?";
}

// Ascending, no element dividing another.
struct GeneratorSet {
  std::vector<u64> generators;
  Provenance provenance = Provenance::explicit_list;

  static GeneratorSet make(std::vector<u64> gens, Provenance prov = Provenance::explicit_list) {
    for (u64 g : gens)
      if (g < 2) throw std::invalid_argument("generators must be at least 2");
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    GeneratorSet out;
    out.provenance = prov;
    for (u64 g : gens) {
      const bool covered = std::any_of(out.generators.begin(), out.generators.end(), [g](u64 h) { return g % h == 0; });
      if (!covered) out.generators.push_back(g);
    }
    return out;
  }

  static GeneratorSet merge(const GeneratorSet& a, const GeneratorSet& b, Provenance prov) {
    auto all = a.generators;
    all.insert(all.end(), b.generators.begin(), b.generators.end());
    return make(std::move(all), prov);
  }
};

struct DensityReport {
  RationalInterval interval;
  std::size_t generators_used = 0;
  u64 nodes = 0;
  u64 pruned_branches = 0;
};

// Inclusion-exclusion sum over nonempty T of (-1)^{|T|+1} / lcm(T), by DFS
// over index-increasing subsets. A child whose lcm L exceeds prune_cap is
// cut together with its subtree; that subtree sums to sign * theta / L with
// theta in [0, 1] (the density of multiples of L avoiding the remaining
// generators), which is what gets added to the enclosure.
inline DensityReport multiples_density(const GeneratorSet& gens, u64 prune_cap) {
  const auto& g = gens.generators;
  for (u64 v : g)
    if (v < 2) throw std::invalid_argument("generators must be at least 2");
  DensityReport rep;
  rep.generators_used = g.size();
  if (g.empty()) return rep;
  BigInt den = 1;
  for (u64 v : g) den = boost::multiprecision::lcm(den, BigInt(v));
  BigInt exact = 0, cut_pos = 0, cut_neg = 0;
  auto share = [&](u128 l) {
    BigInt lb = BigInt(static_cast<u64>(l >> 64));
    lb <<= 64;
    lb += static_cast<u64>(l);
    return BigInt(den / lb);
  };
  auto lcm128 = [](u128 a, u64 b) {
    u128 x = a, y = b;
    while (y != 0) {
      const u128 t = x % y;
      x = y;
      y = t;
    }
    return a / x * b;
  };
  // Iterative DFS; frames hold (lcm, next index, sign).
  struct Frame {
    u128 lcm;
    std::size_t next;
    int sign;
  };
  std::vector<Frame> stack;
  auto visit = [&](u128 l, std::size_t next, int sign) {
    ++rep.nodes;
    if (sign > 0) exact += share(l); else exact -= share(l);
    stack.push_back({l, next, sign});
  };
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] > prune_cap) {
      ++rep.pruned_branches;
      cut_pos += share(g[i]);
      continue;
    }
    visit(g[i], i + 1, +1);
    while (!stack.empty()) {
      auto& top = stack.back();
      if (top.next >= g.size()) {
        stack.pop_back();
        continue;
      }
      const std::size_t j = top.next++;
      const u128 l = lcm128(top.lcm, g[j]);
      const int sign = -top.sign;
      if (l > prune_cap) {
        ++rep.pruned_branches;
        if (sign > 0) cut_pos += share(l); else cut_neg += share(l);
        continue;
      }
      visit(l, j + 1, sign);
    }
  }
  rep.interval.lo = Rational(exact - cut_neg, den);
  rep.interval.hi = Rational(exact + cut_pos, den);
  return rep;
}

// (1 - prod_{k prime <= K}(1 - (p-1)/(p^k-1))) / (p-1), widened by the tail:
// 1 - prod_{k > K}(1 - x_k) <= sum_{k > K} x_k <= 2 / p^K.
inline RationalInterval delta_trivial(u64 p, unsigned K) {
  numth::require_prime(p);
  if (K < 2) throw std::invalid_argument("truncation index must be at least 2");
  Rational prod = 1;
  for (unsigned k = 2; k <= K; ++k) {
    if (!numth::is_prime(k)) continue;
    const BigInt pk = boost::multiprecision::pow(BigInt(p), k);
    prod *= 1 - Rational(BigInt(p - 1), pk - 1);
  }
  const Rational tail = Rational(BigInt(2), boost::multiprecision::pow(BigInt(p), K));
  const Rational pm1 = Rational(BigInt(p - 1));
  return {(1 - prod) / pm1, (1 - prod * (1 - tail)) / pm1};
}

namespace detail {

// (2^{m s} - 1) / (2^s - 1).
inline BigInt mersenne_ratio(unsigned ms, unsigned s) {
  const BigInt one = 1;
  return ((one << ms) - 1) / ((one << s) - 1);
}

// Calls f(value, exponent difference ms - s) for every member of the S-set
// with ms - s <= max_gap.
template <class F>
void for_each_s_member(unsigned max_gap, F&& f) {
  f(BigInt(3), 2u);
  for (unsigned a = 1; 3u * (1u << a) <= max_gap; ++a) {
    const unsigned s = 1u << a;
    f(mersenne_ratio(4 * s, s), 3 * s);
  }
  for (unsigned r = 3; r - 1 <= max_gap; r += 2) {
    if (!numth::is_prime(r)) continue;
    for (unsigned long long s = 1; s * (r - 1) <= max_gap; s *= r) {
      f(mersenne_ratio(static_cast<unsigned>(s * r), static_cast<unsigned>(s)), static_cast<unsigned>(s * (r - 1)));
    }
  }
}

}  // namespace detail

// Members of {3} u {(2^{2^{a+2}}-1)/(2^{2^a}-1) : a >= 1}
// u {(2^{r^{b+1}}-1)/(2^{r^b}-1) : r odd prime, b >= 0} not exceeding cap.
inline GeneratorSet s2_generators(u64 cap) {
  if (cap < 3) throw std::invalid_argument("cap must be at least 3");
  std::vector<u64> out;
  // A member with exponent gap E exceeds 2^E, so E < 64 covers every cap.
  detail::for_each_s_member(64, [&](const BigInt& v, unsigned) {
    if (v <= cap) out.push_back(static_cast<u64>(v));
  });
  return GeneratorSet::make(std::move(out), Provenance::s_set);
}

// Upper bound for the sum of 1/g over S-set members g > cap: exact terms for
// gaps E <= 600, then sum_{E > 600} (E + 1) 2^{-E} < 2^{-590}, since at most
// E + 1 members share a gap E and each exceeds 2^E.
inline Rational s2_tail(u64 cap) {
  Rational tail = 0;
  detail::for_each_s_member(600, [&](const BigInt& v, unsigned) {
    if (v > cap) tail += Rational(BigInt(1), v);
  });
  return tail + Rational(BigInt(1), BigInt(1) << 590);
}

inline DensityReport delta_S(u64 cap, u64 prune_cap) {
  auto rep = multiples_density(s2_generators(cap), prune_cap);
  rep.interval.hi += s2_tail(cap);
  return rep;
}

// Minimal elements of N_2 below 200000.
inline const std::vector<u64>& n2_minimal_table() {
  static const std::vector<u64> table{3,     7,     31,    73,    85,     127,    2047,   3133,   4369,
                                      8191,  11275, 49981, 60787, 76627, 121369, 131071, 140911, 178481};
  return table;
}

inline DensityReport delta_N2_lower(u64 cap, u64 prune_cap, const GeneratorSet& extra) {
  const auto gens = GeneratorSet::merge(s2_generators(cap), extra, Provenance::explicit_list);
  auto rep = multiples_density(gens, prune_cap);
  rep.interval.hi += s2_tail(cap);
  return rep;
}

inline DensityReport delta_N2_lower(u64 cap, u64 prune_cap) {
  return delta_N2_lower(cap, prune_cap, GeneratorSet::make(n2_minimal_table(), Provenance::minimal_table));
}

inline constexpr u64 kDefaultCap = 1'000'000'000'000'000'000ULL;

}  // namespace npset::density
