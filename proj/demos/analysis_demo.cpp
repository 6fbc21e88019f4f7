// Analysis tree of a maximal S_2 set and a rearrangement in S_1.
#include <iostream>

#include "schreier/schreier.hpp"

using namespace schreier;

int main() {
  auto sys = SchreierSystem::create();
  auto t = analysis_tree(*sys, Ordinal::finite(2), FinSet::interval(2, 7));
  for (const auto& n : t.nodes()) std::cout << n.set.to_string() << "  order " << n.order.to_string() << "\n";

  auto w = replacement_window(t, 4);
  std::cout << "window for 4: (" << w.m1 << ", " << (w.m2 ? std::to_string(*w.m2) : "inf") << ")\n";

  for (const auto& p : rearrange(*sys, Ordinal::finite(1), {FinSet{2, 5}, FinSet{3, 4}})) std::cout << p.to_string() << " ";
  std::cout << "\n";

  // limit order: alpha(w, n) for the first few n
  Ordinal w0 = Ordinal::omega();
  for (int n = 1; n <= 5; ++n) std::cout << "alpha(w," << n << ") = " << sys->alpha(w0, n).to_string() << "\n";
}
