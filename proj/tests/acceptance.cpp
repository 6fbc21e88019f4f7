// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>

#include "oracles.hpp"

using namespace schreier;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s %d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), s);
  std::fflush(stdout);
}

std::shared_ptr<SchreierSystem> make_system() { return SchreierSystem::create({}); }

Rational Q(const char* s) { return parse_rational(s); }

// 1: S_xi = SM_xi by exhaustive enumeration
Outcome modified_equality() {
  auto sys = make_system();
  std::size_t total = 0;
  std::vector<std::pair<const char*, int>> cases{{"1", 12}, {"2", 12}, {"3", 12}, {"w", 12},
                                                 {"w+1", 12}, {"w*2", 12}, {"w^2", 10}};
  for (auto [xi, n] : cases) {
    auto r = verify_modified_equals(*sys, parse_ordinal(xi), n);
    if (!r.equal())
      return {false, std::string("xi=") + xi + ": " + std::to_string(r.only_standard.size() + r.only_modified.size()) +
                         " sets differ"};
    total += r.standard_count;
  }
  return {true, std::to_string(total) + " sets over 7 orders, zero symmetric difference"};
}

// 2: rearrangement
Outcome rearrangement() {
  auto sys = make_system();
  std::size_t oracle_checked = 0;
  for (const char* xi : {"1", "2", "w"}) {
    Ordinal x = parse_ordinal(xi);
    const auto& f = sys->schreier_ref(x);
    for (std::size_t i = 0; i < 500; ++i) {
      auto rng = rnd::case_rng(2, i);
      int ground = rnd::pick(rng, 4, 14);
      auto parts = rnd::rearrange_instance(rng, f, ground);
      auto out = rearrange(*sys, x, parts);
      auto bad = oracle::rearrangement_defects(f, parts, out);
      if (!bad.empty()) return {false, std::string("xi=") + xi + " case " + std::to_string(i) + ": " + bad};
      if (union_all(parts).size() <= 10) {
        if (!oracle::rearrangement_exists(f, parts))
          return {false, std::string("xi=") + xi + " case " + std::to_string(i) + ": oracle finds no rearrangement"};
        ++oracle_checked;
      }
    }
  }
  return {true, "1500 instances valid, " + std::to_string(oracle_checked) + " confirmed by the partition oracle"};
}

// 3: n_std <= n_mod <= n_aux <= 3 n_std
Outcome equivalence() {
  auto sys = make_system();
  for (const char* xi : {"1", "2", "w"}) {
    auto fam = EquivalenceFamilies::of(*sys, parse_ordinal(xi));
    for (const char* th : {"1/2", "1/3"})
      for (std::size_t i = 0; i < 300; ++i) {
        auto rng = rnd::case_rng(3, i);
        auto x = rnd::vector(rng, 10, 16);
        auto r = check_equivalence<Rational>(fam, Q(th), x);
        if (!r.holds())
          return {false, std::string("xi=") + xi + " theta=" + th + " case " + std::to_string(i) + ": chain broken"};
      }
  }
  return {true, "1800 vectors, exact chain holds"};
}

// 4: (S[A2])[A3] inside (S)^3
Outcome composition_inclusion() {
  auto sys = make_system();
  std::size_t checked = 0;
  for (const char* xi : {"1", "2", "w"}) {
    auto r = check_composition_inclusion(*sys, parse_ordinal(xi), 10);
    if (!r.ok()) return {false, std::string("xi=") + xi + ": counterexample " + r.counterexamples.front().to_string()};
    checked += r.checked;
  }
  return {true, std::to_string(checked) + " sets checked, zero counterexamples"};
}

// 5: allowable tree families to admissible ones
Outcome tree_conversion() {
  auto sys = make_system();
  const Rational theta = Q("1/2");
  for (const char* xi : {"1", "2"}) {
    auto f = sys->schreier(parse_ordinal(xi));
    auto fa2 = compose(f, cardinality(2));
    for (std::size_t i = 0; i < 300; ++i) {
      auto rng = rnd::case_rng(5, i);
      auto tf = rnd::tree_family(rng, *f, 3, 14, 24);
      auto r = allowable_to_admissible(tf.trees, tf.s, f);
      std::string where = std::string("xi=") + xi + " case " + std::to_string(i) + ": ";
      std::map<int, Rational> lhs, rhs;
      std::size_t singles = 0;
      for (const auto& t : tf.trees) {
        singles += t.length() == 1;
        for (auto& [j, c] : oracle::psi_of(t.nodes(), theta)) lhs[j] += c;
      }
      std::vector<int> roots;
      for (std::size_t k = 0; k < r.trees.size(); ++k) {
        if (!oracle::tree_valid(r.trees[k].nodes(), *fa2, true)) return {false, where + "output tree not admissible"};
        if (k && r.trees[k - 1].support().max() >= r.trees[k].support().min())
          return {false, where + "supports not increasing"};
        for (auto& [j, c] : oracle::psi_of(r.trees[k].nodes(), theta)) rhs[j] += c;
        roots.push_back(r.trees[k].root());
      }
      if (lhs != rhs) return {false, where + "psi sums differ"};
      if (r.trees.size() > tf.trees.size() + singles) return {false, where + "too many trees"};
      if (r.output_blocks.size() > tf.s || union_all(r.output_blocks) != FinSet::from_unsorted(roots))
        return {false, where + "root blocks"};
      for (std::size_t b = 0; b < r.output_blocks.size(); ++b) {
        if (!fa2->contains(r.output_blocks[b])) return {false, where + "block outside F[A2]"};
        if (b && r.output_blocks[b - 1].max() >= r.output_blocks[b].min()) return {false, where + "blocks overlap"};
      }
    }
  }
  return {true, "600 families admissible and ordered, psi sums equal exactly, root blocks valid"};
}

// 6: every functional of the modified norming set codes back
Outcome surjectivity() {
  auto sys = make_system();
  const auto& s1 = sys->schreier_ref(Ordinal::finite(1));
  const Rational theta = Q("1/2");
  auto levels = oracle::modified_levels(s1, 8, 3);
  for (const auto& fn : levels.back()) {
    Functional<Rational> f;
    for (auto [i, l] : fn) f.entries[i] = rational_pow(theta, l);
    auto t = tree_of_functional(f, s1, theta);
    if (!oracle::tree_valid(t.nodes(), s1, false)) return {false, "invalid tree " + t.to_string()};
    if (oracle::psi_of(t.nodes(), theta) != f.entries) return {false, "psi does not invert at " + t.to_string()};
  }
  return {true, std::to_string(levels.back().size()) + " functionals inverted exactly"};
}

// 7: l1 lower bound on normalized disjoint blocks
Outcome ell1() {
  auto sys = make_system();
  Rational worst = 1;
  for (const char* xi : {"1", "2"}) {
    const auto& f = sys->schreier_ref(parse_ordinal(xi));
    for (std::size_t i = 0; i < 200; ++i) {
      auto rng = rnd::case_rng(7, i);
      auto inst = oracle::ell1_instance(rng, f, Q("1/2"));
      auto r = ell1_lower_bound_check(*sys, parse_ordinal(xi), Q("1/2"), inst.ys, inst.a);
      if (!r.holds) return {false, std::string("xi=") + xi + " case " + std::to_string(i) + ": bound fails"};
      if (r.bound > 0 && r.ratio < worst) worst = r.ratio;
    }
  }
  return {true, "400 block families, smallest ratio " + format_rational(worst) + " >= 1/6"};
}

// 8: interval DP against full-subset brute force
Outcome dp_vs_brute() {
  auto sys = make_system();
  const auto& s1 = sys->schreier_ref(Ordinal::finite(1));
  const Rational theta = Q("1/2");
  const Rational coefs[] = {Q("1"), Q("-1"), Q("1/2"), Q("-1/2")};
  std::set<std::map<int, Rational>> seen;
  for (std::size_t i = 0; i < 1000; ++i) {
    auto rng = rnd::case_rng(8, i);
    std::map<int, Rational> x;
    for (int j = 1; j <= 8; ++j)
      if (rnd::pick(rng, 0, 1)) x[j] = coefs[rnd::pick(rng, 0, 3)];
    seen.insert(x);
    Rational dp = norm_admissible<Rational>(s1, theta, x).value;
    Rational bf = oracle::admissible(s1, theta, x);
    if (dp != bf)
      return {false, "case " + std::to_string(i) + ": dp " + format_rational(dp) + " vs " + format_rational(bf)};
  }
  return {true, "1000 vectors (" + std::to_string(seen.size()) + " distinct), exact agreement"};
}

// 9: a convex combination on [2, n] of norm below 1
Outcome flat_average() {
  auto sys = make_system();
  const auto& s1 = sys->schreier_ref(Ordinal::finite(1));
  auto r = flat_average_search(s1, Q("1/2"), 2, Q("1"));
  if (!r) return {false, "no witness within the budget"};
  Rational mass = 0;
  for (auto& [j, p] : r->weights) {
    if (j < 2 || p < 0) return {false, "weights are not convex on [2, n]"};
    mass += p;
  }
  if (mass != 1) return {false, "weights do not sum to 1"};
  if (norm_admissible<Rational>(s1, Q("1/2"), r->weights).value != r->value || !(r->value < 1))
    return {false, "reported value is wrong"};
  return {true, "value " + format_rational(r->value) + " at n = " + std::to_string(r->n) + " (k = 1 only)"};
}

}  // namespace

int main() {
  criterion(1, "S_xi equals SM_xi", modified_equality);
  criterion(2, "rearrangement into consecutive members", rearrangement);
  criterion(3, "three-norm equivalence chain", equivalence);
  criterion(4, "(S[A2])[A3] inside S^3", composition_inclusion);
  criterion(5, "allowable to admissible tree families", tree_conversion);
  criterion(6, "tree coding is surjective", surjectivity);
  criterion(7, "l1 lower bound on normalized blocks", ell1);
  criterion(8, "interval DP equals brute force", dp_vs_brute);
  criterion(9, "flat average below 1 for k = 1", flat_average);
  return failures == 0 ? 0 : 1;
}
