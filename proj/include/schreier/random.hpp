#pragma once

// Seeded random instances used by the suites and the tests.

#include <algorithm>
#include <random>
#include <vector>

#include "schreier/trees.hpp"

namespace schreier::rnd {

using Rng = std::mt19937_64;

// One generator per case so results do not depend on scheduling.
inline Rng case_rng(std::uint64_t seed, std::size_t i) {
  std::seed_seq s{seed, static_cast<std::uint64_t>(i)};
  return Rng(s);
}

inline int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// coefficients p/q with 0 < |p| <= 3, q <= 4
inline SparseVector<Rational> vector(Rng& rng, int max_support, int max_index) {
  SparseVector<Rational> x;
  int k = pick(rng, 1, std::min(max_support, max_index));
  while (static_cast<int>(x.size()) < k) {
    int p = pick(rng, -3, 3);
    if (p == 0) continue;
    Rational c(p, pick(rng, 1, 4));
    c.canonicalize();
    x[pick(rng, 1, max_index)] = c;
  }
  return x;
}

// 2-4 disjoint members of f inside [2, 15], ground set <= max_ground
inline std::vector<FinSet> rearrange_instance(Rng& rng, const Family& f, int max_ground) {
  int n = pick(rng, 2, 4);
  std::vector<int> pool;
  for (int x = 2; x <= 15; ++x) pool.push_back(x);
  std::shuffle(pool.begin(), pool.end(), rng);
  int g = pick(rng, n, std::max(n, max_ground));
  std::vector<std::vector<int>> ps(static_cast<std::size_t>(n));
  for (int i = 0; i < g; ++i)
    ps[static_cast<std::size_t>(i < n ? i : pick(rng, 0, n - 1))].push_back(pool[static_cast<std::size_t>(i)]);
  std::vector<FinSet> parts;
  for (auto& p : ps) {
    FinSet s = FinSet::from_unsorted(p);
    while (!f.contains(s)) s.pop_back();
    parts.push_back(s);
  }
  return parts;
}

// Allowable tree with length <= depth on u (all of u when depth allows);
// blocks need not be consecutive.
inline TreeNode allowable_tree(Rng& rng, const Family& f, const FinSet& u, int depth) {
  TreeNode n{u.min(), {}};
  if (depth <= 1 || u.size() == 1) return n;
  if (depth == 2) {
    // children are leaves: keep a member of f
    FinSet kids;
    for (int x : u.elements()) {
      FinSet k2 = kids.with(x);
      if (f.contains(k2)) kids = std::move(k2);
    }
    for (int x : kids.elements()) n.children.push_back({x, {}});
    return n;
  }
  int k = pick(rng, 1, std::min<int>(4, static_cast<int>(u.size())));
  std::vector<std::vector<int>> bl(static_cast<std::size_t>(k));
  bl[0].push_back(u.min());
  for (std::size_t i = 1; i < u.size(); ++i) bl[static_cast<std::size_t>(pick(rng, 0, k - 1))].push_back(u[i]);
  std::vector<FinSet> blocks;
  for (auto& b : bl)
    if (!b.empty()) blocks.push_back(FinSet::from_sorted(b));
  std::sort(blocks.begin(), blocks.end(), [](const FinSet& a, const FinSet& b) { return a.min() < b.min(); });
  // fold surplus blocks into earlier ones; their minima stay put
  while (!f.contains(minima(blocks))) {
    FinSet last = blocks.back();
    blocks.pop_back();
    auto& into = blocks[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(blocks.size()) - 1))];
    into = set_union(into, last);
  }
  for (const auto& b : blocks) n.children.push_back(allowable_tree(rng, f, b, b.size() == 1 ? 1 : pick(rng, 2, depth - 1)));
  return n;
}

struct TreeFamily {
  std::vector<CodeTree> trees;
  std::size_t s = 1;  // least number of consecutive f-blocks covering the roots
};

// 1-4 trees with disjoint supports, ground set <= max_support inside [2, max_index]
inline TreeFamily tree_family(Rng& rng, const Family& f, int max_depth, int max_support = 14, int max_index = 24) {
  std::vector<int> pool;
  for (int x = 2; x <= std::max(max_index, 3); ++x) pool.push_back(x);
  std::shuffle(pool.begin(), pool.end(), rng);
  int g = pick(rng, 1, std::min<int>(max_support, static_cast<int>(pool.size())));
  int l = pick(rng, 1, std::min(4, g));
  std::vector<std::vector<int>> ps(static_cast<std::size_t>(l));
  for (int i = 0; i < g; ++i)
    ps[static_cast<std::size_t>(i < l ? i : pick(rng, 0, l - 1))].push_back(pool[static_cast<std::size_t>(i)]);
  TreeFamily out;
  std::vector<int> roots;
  for (auto& p : ps) {
    FinSet u = FinSet::from_unsorted(p);
    int depth = u.size() == 1 ? 1 : pick(rng, 2, std::max(2, max_depth));
    out.trees.push_back(to_code_tree(allowable_tree(rng, f, u, depth)));
    roots.push_back(out.trees.back().root());
  }
  out.s = greedy_consecutive_blocks(f, FinSet::from_unsorted(roots))->size();
  return out;
}

}  // namespace schreier::rnd
