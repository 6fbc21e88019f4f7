// Norms of a few vectors and the standard/modified/auxiliary chain.
#include <iostream>

#include "schreier/schreier.hpp"

using namespace schreier;

int main() {
  auto sys = SchreierSystem::create();
  Rational half(1, 2);
  SparseVector<Rational> x{{3, 1}, {4, 1}, {5, 1}};
  auto r = norm_admissible<Rational>(sys->schreier_ref(Ordinal::finite(1)), half, x);
  std::cout << "|e3+e4+e5| in S(1), theta 1/2: " << r.value << " (witness depth " << r.stats.depth << ")\n";

  SparseVector<Rational> y{{2, 1}, {3, -1}, {5, Rational(1, 2)}, {7, 1}, {8, Rational(-3, 2)}};
  for (const char* o : {"1", "2", "w"}) {
    auto e = check_equivalence<Rational>(*sys, parse_ordinal(o), half, y);
    std::cout << "xi=" << o << ": " << e.n_std << " <= " << e.n_mod << " <= " << e.n_aux << " <= 3*" << e.n_std
              << (e.holds() ? "" : "  FAILS") << "\n";
  }

  auto f = flat_average_search(sys->schreier_ref(Ordinal::finite(1)), half, 2, Rational(1));
  if (f) std::cout << "flat average on [2," << f->n << "] has norm " << f->value << "\n";
}
