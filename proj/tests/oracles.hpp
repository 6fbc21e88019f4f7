#pragma once

// Brute-force reference implementations. Exponential on purpose; keep inputs tiny.

#include <functional>
#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "schreier/schreier.hpp"

namespace oracle {

using schreier::FinSet;
using schreier::Rational;

inline FinSet from_mask(const std::vector<int>& idx, unsigned mask) {
  FinSet s;
  for (std::size_t i = 0; i < idx.size(); ++i)
    if (mask >> i & 1u) s.push_back_unchecked(idx[i]);
  return s;
}

// Norm over every family of subsets (E_1 < ... < E_n or arbitrary disjoint),
// straight from the definition, memoized over subsets only.
class BruteNorm {
 public:
  BruteNorm(const schreier::Family& f, Rational theta, const std::map<int, Rational>& x, bool disjoint)
      : f_(f), theta_(theta), disjoint_(disjoint) {
    for (auto& [i, c] : x)
      if (c != 0) {
        idx_.push_back(i);
        val_.push_back(abs(c));
      }
    memo_.assign(1u << idx_.size(), -1);
  }

  Rational value() { return idx_.empty() ? Rational(0) : norm((1u << idx_.size()) - 1); }

 private:
  const schreier::Family& f_;
  Rational theta_;
  bool disjoint_;
  std::vector<int> idx_;
  std::vector<Rational> val_;
  std::vector<Rational> memo_;

  Rational norm(unsigned mask) {
    if (memo_[mask] >= 0) return memo_[mask];
    Rational sup = 0;
    std::vector<int> el;
    for (std::size_t i = 0; i < idx_.size(); ++i)
      if (mask >> i & 1u) {
        el.push_back(static_cast<int>(i));
        if (val_[i] > sup) sup = val_[i];
      }
    Rational best = 0;
    std::vector<unsigned> blocks;
    std::function<void(std::size_t)> go = [&](std::size_t t) {
      if (t == el.size()) {
        if (blocks.empty() || (blocks.size() == 1 && blocks[0] == mask)) return;
        std::vector<int> mins;
        for (unsigned b : blocks) mins.push_back(idx_[static_cast<std::size_t>(__builtin_ctz(b))]);
        if (!f_.contains(FinSet::from_unsorted(mins))) return;
        Rational s = 0;
        for (unsigned b : blocks) s += norm(b);
        if (s > best) best = s;
        return;
      }
      unsigned bit = 1u << el[t];
      go(t + 1);  // skip
      if (disjoint_) {
        for (auto& b : blocks) {
          b |= bit;
          go(t + 1);
          b &= ~bit;
        }
      } else if (!blocks.empty()) {
        // successive sets: only the last block may grow
        blocks.back() |= bit;
        go(t + 1);
        blocks.back() &= ~bit;
      }
      blocks.push_back(bit);
      go(t + 1);
      blocks.pop_back();
    };
    go(0);
    Rational r = theta_ * best > sup ? Rational(theta_ * best) : sup;
    memo_[mask] = r;
    return r;
  }
};

inline Rational admissible(const schreier::Family& f, Rational theta, const std::map<int, Rational>& x) {
  return BruteNorm(f, theta, x, false).value();
}

inline Rational allowable(const schreier::Family& f, Rational theta, const std::map<int, Rational>& x) {
  return BruteNorm(f, theta, x, true).value();
}

inline std::vector<FinSet> by_minima(std::vector<FinSet> parts) {
  std::sort(parts.begin(), parts.end(), [](const FinSet& a, const FinSet& b) { return a.min() < b.min(); });
  return parts;
}

// Some ordered split of the union into parts.size() consecutive members of f
// with min A_i <= min A'_i.
inline bool rearrangement_exists(const schreier::Family& f, std::vector<FinSet> parts) {
  parts = by_minima(std::move(parts));
  std::vector<int> u = schreier::union_all(parts).elements();
  const std::size_t n = parts.size();
  std::function<bool(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t k) {
    if (k == n) return i == u.size();
    if (u.size() - i < n - k) return false;
    if (u[i] < parts[k].min()) return false;
    for (std::size_t j = i + 1; j + (n - k - 1) <= u.size(); ++j) {
      FinSet piece = FinSet::from_sorted({u.begin() + static_cast<long>(i), u.begin() + static_cast<long>(j)});
      if (!f.contains(piece)) break;  // hereditary: longer pieces fail too
      if (go(j, k + 1)) return true;
    }
    return false;
  };
  return go(0, 0);
}

// empty when out is a valid rearrangement of parts
inline std::string rearrangement_defects(const schreier::Family& f, std::vector<FinSet> parts,
                                         const std::vector<FinSet>& out) {
  parts = by_minima(std::move(parts));
  if (out.size() != parts.size()) return "wrong number of parts";
  if (schreier::union_all(out) != schreier::union_all(parts)) return "union changed";
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].empty()) return "empty part";
    if (i && out[i - 1].max() >= out[i].min()) return "parts not consecutive";
    if (!f.contains(out[i])) return "part " + out[i].to_string() + " not in family";
    if (parts[i].min() > out[i].min()) return "minimum decreased at part " + std::to_string(i);
  }
  return {};
}

// Normalized vectors y_1..y_k with disjoint (interleaved) supports whose
// minima are the first k elements of the ground range, plus coefficients.
struct Ell1Instance {
  std::vector<std::map<int, Rational>> ys;
  std::vector<Rational> a;
};

inline Ell1Instance ell1_instance(schreier::rnd::Rng& rng, const schreier::Family& f, const Rational& theta) {
  using schreier::rnd::pick;
  int k = pick(rng, 1, 4);
  int start = pick(rng, k, k + 3);
  int ground = pick(rng, k, 10);
  std::vector<std::map<int, Rational>> ys(static_cast<std::size_t>(k));
  auto coef = [&] {
    Rational c(pick(rng, 1, 3) * (pick(rng, 0, 1) ? 1 : -1), pick(rng, 1, 4));
    c.canonicalize();
    return c;
  };
  for (int i = 0; i < ground; ++i) {
    auto j = static_cast<std::size_t>(i < k ? i : pick(rng, 0, k - 1));
    ys[j][start + i] = coef();
  }
  Ell1Instance out;
  for (auto& y : ys) {
    Rational n = schreier::norm_admissible<Rational>(f, theta, y).value;
    for (auto& [i, c] : y) c /= n;
    out.ys.push_back(y);
    Rational c = pick(rng, 0, 5) ? coef() : Rational(0);
    out.a.push_back(c);
  }
  return out;
}

// (T1)-(T5) straight from the sequence definitions.
using Seq = std::vector<int>;

inline bool prefix_of(const Seq& s, const Seq& t) {
  return s.size() <= t.size() && std::equal(s.begin(), s.end(), t.begin());
}

inline std::set<int> support_of(const std::set<Seq>& tree, const Seq& s) {
  std::set<int> out;
  for (const auto& t : tree) {
    if (!prefix_of(s, t)) continue;
    bool terminal = true;
    for (const auto& u : tree) terminal &= !(u.size() > t.size() && prefix_of(t, u));
    if (terminal) out.insert(t.back());
  }
  return out;
}

inline bool tree_valid(const std::set<Seq>& tree, const schreier::Family& f, bool admissible) {
  if (tree.empty()) return false;
  int root = tree.begin()->front();
  for (const auto& t : tree) {
    if (t.empty() || t.front() != root) return false;                     // T2
    if (t.size() > 1 && !tree.count(Seq(t.begin(), t.end() - 1))) return false;  // T1
    std::vector<int> kids;
    for (const auto& u : tree)
      if (u.size() == t.size() + 1 && prefix_of(t, u)) kids.push_back(u.back());
    if (!kids.empty()) {                                                  // T3
      Seq self = t;
      self.push_back(t.back());
      if (!tree.count(self) || !f.contains(FinSet::from_unsorted(kids))) return false;
    }
  }
  for (const auto& s : tree)
    for (const auto& t : tree) {
      if (prefix_of(s, t) || prefix_of(t, s)) continue;
      auto a = support_of(tree, s), b = support_of(tree, t);
      for (int x : a)
        if (b.count(x)) return false;  // T4
      if (admissible && std::lexicographical_compare(s.begin(), s.end(), t.begin(), t.end()) && *a.rbegin() >= *b.begin())
        return false;  // T5
    }
  return true;
}

// terminal t carries theta^(|t|-1) at t's last label
inline std::map<int, Rational> psi_of(const std::set<Seq>& tree, const Rational& theta) {
  std::map<int, Rational> out;
  for (const auto& t : tree) {
    bool terminal = true;
    for (const auto& u : tree) terminal &= !(u.size() > t.size() && prefix_of(t, u));
    if (!terminal) continue;
    Rational c = 1;
    for (std::size_t j = 1; j < t.size(); ++j) c *= theta;
    out[t.back()] += c;
  }
  return out;
}

// Nonnegative norming functionals as (index, level) lists; level j means
// coefficient theta^j. Generated forward from the recursive definition:
// P_0 = {e*_s}, P_{l+1} = P_l plus theta * sum of members of P_l with
// pairwise disjoint supports whose minima form a member of F.
using LevelFn = std::vector<std::pair<int, int>>;

inline std::vector<std::set<LevelFn>> modified_levels(const schreier::Family& f, int max_index, int max_level) {
  std::vector<std::set<LevelFn>> p(static_cast<std::size_t>(max_level) + 1);
  for (int s = 1; s <= max_index; ++s) p[0].insert({{s, 0}});
  for (int l = 1; l <= max_level; ++l) {
    p[static_cast<std::size_t>(l)] = p[static_cast<std::size_t>(l) - 1];
    std::vector<LevelFn> prev(p[static_cast<std::size_t>(l) - 1].begin(), p[static_cast<std::size_t>(l) - 1].end());
    std::sort(prev.begin(), prev.end(), [](const LevelFn& a, const LevelFn& b) { return a.front().first < b.front().first; });
    std::vector<int> used(static_cast<std::size_t>(max_index) + 1, 0);
    std::vector<std::pair<int, int>> acc;
    FinSet mins;
    auto& out = p[static_cast<std::size_t>(l)];
    std::function<void(std::size_t)> go = [&](std::size_t from) {
      for (std::size_t c = from; c < prev.size(); ++c) {
        const LevelFn& g = prev[c];
        int m = g.front().first;
        if (!mins.empty() && m <= mins.max()) continue;
        bool clash = false;
        for (auto [i, lv] : g) clash |= used[static_cast<std::size_t>(i)] != 0;
        if (clash) continue;
        FinSet m2 = mins;
        m2.push_back_unchecked(m);
        if (!f.contains(m2)) continue;
        std::swap(mins, m2);
        for (auto [i, lv] : g) {
          used[static_cast<std::size_t>(i)] = 1;
          acc.emplace_back(i, lv + 1);
        }
        LevelFn h = acc;
        std::sort(h.begin(), h.end());
        out.insert(h);
        go(c + 1);
        acc.resize(acc.size() - g.size());
        for (auto [i, lv] : g) used[static_cast<std::size_t>(i)] = 0;
        std::swap(mins, m2);
      }
    };
    go(0);
  }
  return p;
}

}  // namespace oracle
