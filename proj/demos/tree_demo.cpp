// Two interleaved allowable trees turned into consecutive admissible ones.
#include <iostream>

#include "schreier/schreier.hpp"

using namespace schreier;

int main() {
  auto sys = SchreierSystem::create();
  auto s1 = sys->schreier(Ordinal::finite(1));
  std::vector<CodeTree> in{CodeTree::from_nodes({{2}, {2, 2}, {2, 4}}), CodeTree::from_nodes({{3}, {3, 3}, {3, 5}})};
  auto r = allowable_to_admissible(in, 1, s1);
  for (const auto& t : r.trees) {
    std::cout << t.to_string() << "  psi:";
    for (const auto& [i, c] : psi(t, Rational(1, 2)).entries) std::cout << " " << c << "*e" << i;
    std::cout << "\n";
  }
  auto bad = check_conversion(in, r, s1, Rational(1, 2));
  std::cout << (bad.empty() ? "all conclusions hold" : bad.front()) << "\n";
}
