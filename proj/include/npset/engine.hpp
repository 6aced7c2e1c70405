#pragma once

// Membership in N_p: n is a member iff some xi satisfies (xi + l)^n = 1 for
// every l in GF(p). Decided either by the degree of the common-root locus or
// by counting consecutive d-th powers in GF(p^k). Also the minimal-element
// sweep and its JSON-lines verdict cache.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "npset/errors.hpp"
#include "npset/gfpoly.hpp"
#include "npset/gfq.hpp"
#include "npset/numth.hpp"

namespace npset::engine {

using numth::BigInt;
using numth::u64;

inline constexpr const char* kEngineVersion = "npset-engine/1";

enum class Method { automatic, gcd, field, closure, trivial_shortcut };
enum class Classification { trivial, nontrivial, non_member };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::automatic: return "auto";
    case Method::gcd: return "gcd";
    case Method::field: return "field";
    case Method::closure: return "closure";
    case Method::trivial_shortcut: return "trivial-shortcut";
  }
  return "?";
}

inline const char* to_string(Classification c) {
  switch (c) {
    case Classification::trivial: return "trivial";
    case Classification::nontrivial: return "nontrivial";
    case Classification::non_member: return "non-member";
  }
  return "?";
}

inline std::optional<Method> parse_method(const std::string& s) {
  if (s == "auto") return Method::automatic;
  if (s == "gcd") return Method::gcd;
  if (s == "field") return Method::field;
  return std::nullopt;
}

inline u64 p_part_reduce(u64 p, u64 n) {
  if (n == 0) throw std::invalid_argument("n must be positive");
  while (n % p == 0) n /= p;
  return n;
}

// Multiple of p^k - 1 for some k >= 2.
inline bool is_trivial_member(u64 p, u64 n) {
  for (numth::u128 pk = numth::u128{p} * p; pk - 1 <= n; pk *= p)
    if (n % static_cast<u64>(pk - 1) == 0) return true;
  return false;
}

struct MembershipVerdict {
  u64 p = 0;
  u64 n = 0;
  bool member = false;
  Method method = Method::gcd;
  std::optional<u64> witness_count;  // deg G or M; absent for the trivial shortcut
  u64 k = 0;
  BigInt q = 0;
  BigInt d = 0;
  u64 n_reduced = 0;
  Classification classification = Classification::non_member;
};

struct Decision {
  bool member = false;
  u64 witness_count = 0;
};

// Coprime n only.
inline Decision decide_gcd(u64 p, u64 n) {
  const auto g = gfpoly::common_root_locus(static_cast<std::uint32_t>(p), n);
  return {g.degree() >= 1, static_cast<u64>(g.degree())};
}

inline Decision decide_field(u64 p, u64 n, u64 k, const gfq::OracleBounds& ob) {
  const u64 q = numth::checked_pow(p, static_cast<unsigned>(std::min<u64>(k, 64)));
  if (q == 0 || q > ob.enumeration) {
    throw OracleRefusal("field method: q = " + std::to_string(p) + "^" + std::to_string(k) +
                        " exceeds the oracle bound " + std::to_string(ob.enumeration));
  }
  const auto f = gfq::make_field(static_cast<std::uint32_t>(p), static_cast<unsigned>(k));
  const auto counts = gfq::count_consecutive_dpowers(f, (q - 1) / n, static_cast<unsigned>(p), ob);
  return {counts.m >= 1, counts.m};
}

inline MembershipVerdict is_member(u64 p, u64 n, Method method = Method::automatic,
                                   const gfq::OracleBounds& ob = gfq::OracleBounds::from_env()) {
  numth::require_prime(p);
  if (p >= (1u << 16)) throw std::invalid_argument("p must be below 65536");
  if (n == 0) throw std::invalid_argument("n must be positive");
  MembershipVerdict v;
  v.p = p;
  v.n = n;
  v.n_reduced = p_part_reduce(p, n);
  v.k = numth::mult_order(p, v.n_reduced);
  v.q = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(v.k));
  v.d = (v.q - 1) / v.n_reduced;
  const bool trivial = is_trivial_member(p, v.n_reduced);
  if (method == Method::automatic && trivial) {
    v.member = true;
    v.method = Method::trivial_shortcut;
  } else if (method == Method::field) {
    const auto dec = decide_field(p, v.n_reduced, v.k, ob);
    v.member = dec.member;
    v.witness_count = dec.witness_count;
    v.method = Method::field;
  } else {
    const auto dec = decide_gcd(p, v.n_reduced);
    v.member = dec.member;
    v.witness_count = dec.witness_count;
    v.method = Method::gcd;
  }
  v.classification = !v.member ? Classification::non_member
                               : (trivial ? Classification::trivial : Classification::nontrivial);
  return v;
}

// A member with no member among n / l, l prime: by closure under multiples
// that rules out every proper divisor.
inline bool is_minimal(u64 p, u64 n, const numth::FactorOptions& opt = {}) {
  const auto ob = gfq::OracleBounds::from_env();
  if (!is_member(p, n, Method::automatic, ob).member) return false;
  if (n == 1) return false;
  for (u64 l : numth::factorize(n, opt).primes())
    if (n / l > 1 && is_member(p, n / l, Method::automatic, ob).member) return false;
  return true;
}

struct Witnesses {
  gfpoly::GFpPoly locus;
  long degree = 0;
};

inline Witnesses witnesses(u64 p, u64 n) {
  auto g = gfpoly::common_root_locus(static_cast<std::uint32_t>(p), n);
  const long deg = g.degree();
  return {std::move(g), deg};
}

// "2^5-1" or "(2^9-1)/7", with k the order of p mod n.
inline std::string factor_form(u64 p, u64 n) {
  const u64 k = numth::mult_order(p, n);
  const BigInt pk1 = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(k)) - 1;
  const std::string base = std::to_string(p) + "^" + std::to_string(k) + "-1";
  if (pk1 == n) return base;
  return "(" + base + ")/" + BigInt(pk1 / n).str();
}

// One cached decision. witness_count is absent for shortcut verdicts.
struct CachedVerdict {
  u64 p = 0;
  u64 n = 0;
  bool member = false;
  std::optional<u64> witness_count;
  std::string method;
};

// Append-only JSON lines keyed by (p, n). A record from another engine
// version, or an unreadable line, raises CacheMismatch.
class VerdictCache {
 public:
  VerdictCache(std::filesystem::path path, bool resume) : path_(std::move(path)) {
    if (resume && std::filesystem::exists(path_)) load();
    out_.open(path_, resume ? std::ios::app : std::ios::trunc);
    if (!out_) throw std::runtime_error("cannot open cache file " + path_.string());
  }

  std::optional<CachedVerdict> find(u64 p, u64 n) const {
    const auto it = entries_.find({p, n});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  void append(const CachedVerdict& v) {
    nlohmann::ordered_json j;
    j["p"] = v.p;
    j["n"] = v.n;
    j["member"] = v.member;
    j["witness_count"] = v.witness_count ? nlohmann::ordered_json(*v.witness_count) : nlohmann::ordered_json();
    j["method"] = v.method;
    j["engine_version"] = kEngineVersion;
    out_ << j.dump() << '\n';
    out_.flush();
    entries_[{v.p, v.n}] = v;
  }

  std::size_t size() const { return entries_.size(); }

 private:
  void load() {
    std::ifstream in(path_);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const auto where = path_.string() + ":" + std::to_string(lineno);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception&) {
        throw CacheMismatch("unreadable cache record at " + where);
      }
      if (!j.contains("engine_version") || j["engine_version"] != kEngineVersion) {
        throw CacheMismatch("cache record at " + where + " was written by another engine version");
      }
      try {
        CachedVerdict v;
        v.p = j.at("p").get<u64>();
        v.n = j.at("n").get<u64>();
        v.member = j.at("member").get<bool>();
        if (!j.at("witness_count").is_null()) v.witness_count = j["witness_count"].get<u64>();
        v.method = j.at("method").get<std::string>();
        entries_[{v.p, v.n}] = v;
      } catch (const nlohmann::json::exception&) {
        throw CacheMismatch("malformed cache record at " + where);
      }
    }
  }

  std::filesystem::path path_;
  std::ofstream out_;
  std::map<std::pair<u64, u64>, CachedVerdict> entries_;
};

struct MinimalRow {
  u64 n = 0;
  Classification classification = Classification::nontrivial;
  u64 witness_count = 0;
};

struct SweepOptions {
  unsigned jobs = 0;  // 0: hardware concurrency
  std::size_t block = 1024;
  VerdictCache* cache = nullptr;
  std::function<void(const MinimalRow&)> on_row;
  std::function<void(u64 /*done up to*/)> on_block;
};

// Ascending over n <= bound prime to p. A candidate divisible by a minimal
// element already found is a non-minimal member and is skipped; any member
// divisor of a remaining candidate would itself be such a multiple, so each
// remaining candidate is minimal exactly when it is a member. Blocks are
// decided in parallel and committed in order, re-applying the skip rule.
inline std::vector<MinimalRow> minimal_elements(u64 p, u64 bound, const SweepOptions& opt = {}) {
  numth::require_prime(p);
  if (bound < 2) throw std::invalid_argument("bound must be at least 2");
  unsigned jobs = opt.jobs != 0 ? opt.jobs : std::max(1u, std::thread::hardware_concurrency());
  const std::size_t block = std::max<std::size_t>(1, opt.block);
  std::vector<MinimalRow> found;
  auto divisible_by_found = [&](u64 n) {
    return std::any_of(found.begin(), found.end(), [n](const MinimalRow& r) { return n % r.n == 0; });
  };
  std::vector<u64> todo;
  std::vector<std::optional<Decision>> decided;
  for (u64 lo = 2; lo <= bound; lo += block) {
    const u64 hi = std::min<u64>(bound + 1, lo + block);
    todo.clear();
    for (u64 n = lo; n < hi; ++n)
      if (n % p != 0 && !divisible_by_found(n)) todo.push_back(n);
    decided.assign(todo.size(), std::nullopt);
    for (std::size_t i = 0; i < todo.size(); ++i) {
      if (!opt.cache) break;
      if (auto c = opt.cache->find(p, todo[i]); c && c->witness_count) decided[i] = Decision{c->member, *c->witness_count};
    }
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t i; (i = next.fetch_add(1)) < todo.size();)
        if (!decided[i]) decided[i] = decide_gcd(p, todo[i]);
    };
    if (jobs <= 1 || todo.size() <= 1) {
      work();
    } else {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(work);
    }
    for (std::size_t i = 0; i < todo.size(); ++i) {
      const u64 n = todo[i];
      if (opt.cache && !opt.cache->find(p, n)) {
        opt.cache->append({p, n, decided[i]->member, decided[i]->witness_count, to_string(Method::gcd)});
      }
      if (!decided[i]->member || divisible_by_found(n)) continue;
      MinimalRow row{n, is_trivial_member(p, n) ? Classification::trivial : Classification::nontrivial,
                     decided[i]->witness_count};
      found.push_back(row);
      if (opt.on_row) opt.on_row(row);
    }
    if (opt.on_block) opt.on_block(hi - 1);
  }
  return found;
}

}  // namespace npset::engine
