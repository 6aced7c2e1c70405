// Decide a few memberships two ways and print the counting bound behind them.

#include <iostream>

#include "npset/bounds.hpp"
#include "npset/engine.hpp"
#include "npset/gfq.hpp"

int main() {
  using namespace npset;
  for (auto [p, n] : {std::pair<unsigned, unsigned>{2, 73}, {2, 5}, {3, 13}, {5, 781}}) {
    const auto by_gcd = engine::is_member(p, n, engine::Method::gcd);
    const auto by_field = engine::is_member(p, n, engine::Method::field);
    std::cout << "p=" << p << " n=" << n << ": " << engine::to_string(by_gcd.classification)
              << ", locus degree " << *by_gcd.witness_count << ", M = " << *by_field.witness_count
              << " over GF(" << by_gcd.q << ")\n";
  }

  // The bound is sharp at q = 16, d = 3, r = 2.
  const auto f = gfq::make_field(2, 4);
  const auto c = gfq::count_consecutive_dpowers(f, 3, 2);
  const auto rep = bounds::sequence_bound_holds(16, 3, 2, c.m, c.m0);
  std::cout << "q=16 d=3 r=2: M=" << c.m << " M0=" << c.m0 << ", |A| = " << rep.lhs << ", C = " << rep.rhs_coeff
            << (rep.equality ? " (equality)" : "") << '\n';
}
