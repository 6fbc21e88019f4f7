#pragma once

// Implicit Tsirelson-type norms on finitely supported vectors:
//   |x| = max(|x|_inf, theta * sup sum |E_i x|)
// over admissible (consecutive) or allowable (disjoint) families (E_i)
// whose minima form a member of F.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <type_traits>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "schreier/family.hpp"
#include "schreier/rational.hpp"

namespace schreier {

template <class S = Rational>
using SparseVector = std::map<int, S>;

enum class NormMode { admissible, allowable };

inline const char* to_string(NormMode m) { return m == NormMode::admissible ? "admissible" : "allowable"; }

// Witness structure: a leaf carries a signed coordinate functional, an inner
// node is theta times the sum of its children.
struct WitnessNode {
  int index = 0;
  int sign = 1;
  std::vector<WitnessNode> children;
  bool leaf() const { return children.empty(); }
};

template <class S = Rational>
struct Functional {
  std::map<int, S> entries;
  // levels[j]: indices with coefficient +-theta^j; levels[0] is only used by e*_n
  std::vector<FinSet> levels;
  std::map<int, int> signs;

  S apply(const SparseVector<S>& x) const {
    S total = 0;
    for (const auto& [i, c] : entries)
      if (auto it = x.find(i); it != x.end()) total += c * it->second;
    return total;
  }
};

struct NormStats {
  std::uint64_t nodes = 0;
  std::uint64_t prunes = 0;
  std::size_t memo_entries = 0;
  int depth = 0;
};

template <class S = Rational>
struct NormResult {
  S value;
  Functional<S> witness;
  WitnessNode structure;
  NormMode mode = NormMode::admissible;
  NormStats stats;
};

struct NormLimits {
  std::size_t admissible_cap = 24;
  std::size_t allowable_cap = 14;
};

namespace detail {

template <class S>
void check_theta(const S& theta) {
  require(theta > 0 && theta < 1, ErrorKind::invalid_argument, "theta must lie strictly between 0 and 1");
}

// F-membership of subsets of the support, keyed by position masks.
class MinSetOracle {
 public:
  MinSetOracle(const Family& f, const std::vector<int>& idx) : f_(f), idx_(idx) {
    if (idx.size() <= 20) dense_.assign(std::size_t(1) << idx.size(), -1);
  }

  bool operator()(std::uint32_t mask) {
    if (!dense_.empty()) {
      auto& slot = dense_[mask];
      if (slot < 0) slot = compute(mask) ? 1 : 0;
      return slot == 1;
    }
    auto it = sparse_.find(mask);
    if (it != sparse_.end()) return it->second;
    bool r = compute(mask);
    sparse_.emplace(mask, r);
    return r;
  }

 private:
  const Family& f_;
  const std::vector<int>& idx_;
  std::vector<std::int8_t> dense_;
  std::unordered_map<std::uint32_t, bool> sparse_;

  bool compute(std::uint32_t mask) const {
    FinSet s;
    for (std::uint32_t m = mask; m; m &= m - 1) s.push_back_unchecked(idx_[static_cast<std::size_t>(std::countr_zero(m))]);
    return f_.contains(s);
  }
};

template <class S>
void fill_functional(const WitnessNode& w, const S& theta, const S& scale, std::size_t depth, Functional<S>& out,
                     int& max_depth) {
  if (w.leaf()) {
    out.entries[w.index] = w.sign > 0 ? scale : S(-scale);
    out.signs[w.index] = w.sign;
    if (out.levels.size() <= depth) out.levels.resize(depth + 1);
    out.levels[depth] = out.levels[depth].with(w.index);
    max_depth = std::max(max_depth, static_cast<int>(depth));
    return;
  }
  S next = scale * theta;
  for (const auto& c : w.children) fill_functional(c, theta, next, depth + 1, out, max_depth);
}

template <class S>
Functional<S> functional_of(const WitnessNode& w, const S& theta, NormStats& stats) {
  Functional<S> f;
  int depth = 0;
  fill_functional<S>(w, theta, S(1), 0, f, depth);
  stats.depth = depth;
  return f;
}

template <class S>
class AdmissibleEngine {
 public:
  AdmissibleEngine(const Family& f, const S& theta, const SparseVector<S>& x)
      : theta_(theta) {
    for (const auto& [i, c] : x) {
      if (c == 0) continue;
      idx_.push_back(i);
      val_.push_back(ScalarTraits<S>::abs(c));
      sgn_.push_back(ScalarTraits<S>::sign(c));
    }
    k_ = idx_.size();
    oracle_.emplace(f, idx_);
    prefix_.assign(k_ + 1, S(0));
    for (std::size_t i = 0; i < k_; ++i) prefix_[i + 1] = prefix_[i] + val_[i];
    n_.assign(k_ * k_, S(0));
    choice_.assign(k_ * k_, {});
    sup_.assign(k_ * k_, 0);
  }

  std::size_t size() const { return k_; }

  NormResult<S> run() {
    NormResult<S> r;
    r.mode = NormMode::admissible;
    if (k_ == 0) {
      r.value = 0;
      return r;
    }
    for (std::size_t len = 1; len <= k_; ++len)
      for (std::size_t i = 0; i + len <= k_; ++i) solve(i, i + len - 1);
    r.value = n_[at(0, k_ - 1)];
    r.structure = witness(0, k_ - 1);
    r.stats = stats_;
    r.stats.memo_entries = k_ * (k_ + 1) / 2;
    r.witness = functional_of<S>(r.structure, theta_, r.stats);
    return r;
  }

 private:
  S theta_;
  std::vector<int> idx_;
  std::vector<S> val_;
  std::vector<int> sgn_;
  std::size_t k_ = 0;
  std::optional<MinSetOracle> oracle_;
  std::vector<S> prefix_;
  std::vector<S> n_;
  std::vector<std::vector<std::size_t>> choice_;  // part starts; empty means sup
  std::vector<std::size_t> sup_;
  NormStats stats_;

  std::size_t at(std::size_t i, std::size_t j) const { return i * k_ + j; }

  void solve(std::size_t i, std::size_t j) {
    std::size_t arg = i;
    for (std::size_t p = i + 1; p <= j; ++p)
      if (val_[p] > val_[arg]) arg = p;
    S sup = val_[arg];
    sup_[at(i, j)] = arg;
    S best = 0;
    std::vector<std::size_t> best_starts, starts;
    bool found = false;
    // dfs over part starts; the parts run from each start to the next start - 1
    auto dfs = [&](auto&& self, std::size_t p, std::uint32_t mask, const S& sum) -> void {
      ++stats_.nodes;
      if (found && sum + (prefix_[j + 1] - prefix_[p]) <= best) {
        ++stats_.prunes;
        return;
      }
      if (!(starts.size() == 1 && p == i)) {
        S total = sum + n_[at(p, j)];
        if (!found || total > best) {
          best = total;
          best_starts = starts;
          found = true;
        }
      }
      for (std::size_t q = p + 1; q <= j; ++q) {
        std::uint32_t m2 = mask | (std::uint32_t(1) << q);
        if (!(*oracle_)(m2)) continue;
        starts.push_back(q);
        self(self, q, m2, sum + n_[at(p, q - 1)]);
        starts.pop_back();
      }
    };
    for (std::size_t p = i; p <= j; ++p) {
      std::uint32_t m = std::uint32_t(1) << p;
      if (!(*oracle_)(m)) continue;
      starts.assign(1, p);
      dfs(dfs, p, m, S(0));
    }
    S composite = theta_ * best;
    if (found && composite > sup) {
      n_[at(i, j)] = composite;
      choice_[at(i, j)] = best_starts;
    } else {
      n_[at(i, j)] = sup;
    }
  }

  WitnessNode witness(std::size_t i, std::size_t j) const {
    const auto& starts = choice_[at(i, j)];
    if (starts.empty()) {
      std::size_t p = sup_[at(i, j)];
      return {idx_[p], sgn_[p], {}};
    }
    WitnessNode w;
    for (std::size_t t = 0; t < starts.size(); ++t) {
      std::size_t end = t + 1 < starts.size() ? starts[t + 1] - 1 : j;
      w.children.push_back(witness(starts[t], end));
    }
    w.index = w.children.front().index;
    return w;
  }
};

template <class S>
class AllowableEngine {
 public:
  AllowableEngine(const Family& f, const S& theta, const SparseVector<S>& x) : theta_(theta) {
    for (const auto& [i, c] : x) {
      if (c == 0) continue;
      idx_.push_back(i);
      val_.push_back(ScalarTraits<S>::abs(c));
      sgn_.push_back(ScalarTraits<S>::sign(c));
    }
    k_ = idx_.size();
    oracle_.emplace(f, idx_);
    std::size_t n = std::size_t(1) << k_;
    memo_.assign(n, S(0));
    done_.assign(n, 0);
    blocks_.assign(n, {});
  }

  std::size_t size() const { return k_; }

  NormResult<S> run() {
    NormResult<S> r;
    r.mode = NormMode::allowable;
    if (k_ == 0) {
      r.value = 0;
      return r;
    }
    std::uint32_t full = static_cast<std::uint32_t>((std::uint64_t(1) << k_) - 1);
    r.value = norm(full);
    r.structure = witness(full);
    r.stats = stats_;
    for (auto d : done_) r.stats.memo_entries += d;
    r.witness = functional_of<S>(r.structure, theta_, r.stats);
    return r;
  }

 private:
  S theta_;
  std::vector<int> idx_;
  std::vector<S> val_;
  std::vector<int> sgn_;
  std::size_t k_ = 0;
  std::optional<MinSetOracle> oracle_;
  std::vector<S> memo_;
  std::vector<std::uint8_t> done_;
  std::vector<std::vector<std::uint32_t>> blocks_;  // empty means sup
  NormStats stats_;

  std::size_t sup_pos(std::uint32_t mask) const {
    std::size_t arg = static_cast<std::size_t>(std::countr_zero(mask));
    for (std::uint32_t m = mask; m; m &= m - 1) {
      auto p = static_cast<std::size_t>(std::countr_zero(m));
      if (val_[p] > val_[arg]) arg = p;
    }
    return arg;
  }

  const S& norm(std::uint32_t mask) {
    if (done_[mask]) return memo_[mask];
    S sup = val_[sup_pos(mask)];
    if (std::popcount(mask) == 1) {
      memo_[mask] = sup;
      done_[mask] = 1;
      return memo_[mask];
    }
    std::vector<std::size_t> el;
    for (std::uint32_t m = mask; m; m &= m - 1) el.push_back(static_cast<std::size_t>(std::countr_zero(m)));
    const std::size_t n = el.size();
    std::vector<S> rest(n + 1, S(0));
    for (std::size_t t = n; t-- > 0;) rest[t] = rest[t + 1] + val_[el[t]];

    std::vector<std::uint32_t> blocks, best_blocks;
    std::vector<S> cur;  // norm of each open block
    S sum = 0, best = 0;
    bool found = false;
    std::uint32_t mins = 0;
    // sup already beats anything reachable
    if (theta_ * rest[0] <= sup) {
      memo_[mask] = sup;
      done_[mask] = 1;
      return memo_[mask];
    }
    auto dfs = [&](auto&& self, std::size_t t) -> void {
      ++stats_.nodes;
      if (t == n) {
        if (blocks.empty()) return;
        if (!found || sum > best) {
          best = sum;
          best_blocks = blocks;
          found = true;
        }
        return;
      }
      if (found && sum + rest[t] <= best) {
        ++stats_.prunes;
        return;
      }
      const std::size_t e = el[t];
      const std::uint32_t bit = std::uint32_t(1) << e;
      if ((*oracle_)(mins | bit)) {
        blocks.push_back(bit);
        cur.push_back(val_[e]);
        mins |= bit;
        sum += val_[e];
        self(self, t + 1);
        sum -= val_[e];
        mins &= ~bit;
        cur.pop_back();
        blocks.pop_back();
      }
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        std::uint32_t grown = blocks[b] | bit;
        if (grown == mask) continue;  // a single block covering everything adds nothing
        S before = cur[b];
        S after = norm(grown);
        blocks[b] = grown;
        cur[b] = after;
        sum += after - before;
        self(self, t + 1);
        sum -= after - before;
        cur[b] = before;
        blocks[b] &= ~bit;
      }
      if (blocks.empty()) self(self, t + 1);
    };
    dfs(dfs, 0);
    S composite = theta_ * best;
    if (found && composite > sup) {
      memo_[mask] = composite;
      blocks_[mask] = best_blocks;
    } else {
      memo_[mask] = sup;
    }
    done_[mask] = 1;
    return memo_[mask];
  }

  WitnessNode witness(std::uint32_t mask) const {
    const auto& bl = blocks_[mask];
    if (bl.empty()) {
      std::size_t p = sup_pos(mask);
      return {idx_[p], sgn_[p], {}};
    }
    WitnessNode w;
    for (auto b : bl) w.children.push_back(witness(b));
    w.index = w.children.front().index;
    for (const auto& c : w.children) w.index = std::min(w.index, c.index);
    return w;
  }
};

template <class S>
SparseVector<S> strip_zeros(const SparseVector<S>& x) {
  SparseVector<S> out;
  for (const auto& [i, c] : x) {
    require(i >= 1, ErrorKind::invalid_argument, "vector indices must be positive");
    if (c == 0) continue;
    auto& slot = out.emplace(i, c).first->second;
    if constexpr (std::is_same_v<S, Rational>) slot.canonicalize();
  }
  return out;
}

}  // namespace detail

template <class S = Rational>
NormResult<S> norm_admissible(const Family& f, const S& theta, const SparseVector<S>& x, const NormLimits& lim = {}) {
  detail::check_theta(theta);
  auto y = detail::strip_zeros(x);
  require(y.size() <= lim.admissible_cap && y.size() <= 32, ErrorKind::cap_exceeded,
          "support size " + std::to_string(y.size()) + " exceeds the admissible cap " +
              std::to_string(lim.admissible_cap));
  return detail::AdmissibleEngine<S>(f, theta, y).run();
}

template <class S = Rational>
NormResult<S> norm_allowable(const Family& f, const S& theta, const SparseVector<S>& x, const NormLimits& lim = {}) {
  detail::check_theta(theta);
  auto y = detail::strip_zeros(x);
  require(y.size() <= lim.allowable_cap && y.size() <= 24, ErrorKind::cap_exceeded,
          "support size " + std::to_string(y.size()) + " exceeds the allowable cap " +
              std::to_string(lim.allowable_cap));
  return detail::AllowableEngine<S>(f, theta, y).run();
}

template <class S = Rational>
NormResult<S> norm(const Family& f, const S& theta, const SparseVector<S>& x, NormMode mode,
                   const NormLimits& lim = {}) {
  return mode == NormMode::admissible ? norm_admissible(f, theta, x, lim) : norm_allowable(f, theta, x, lim);
}

// The three norms of the equivalence chain for one order xi.
struct EquivalenceFamilies {
  FamilyHandle standard;   // S_xi
  FamilyHandle auxiliary;  // S_xi[A_2]

  static EquivalenceFamilies of(const SchreierSystem& sys, const Ordinal& xi) {
    auto s = sys.schreier(xi);
    return {s, compose(s, cardinality(2))};
  }
};

template <class S = Rational>
struct EquivalenceResult {
  S n_std, n_mod, n_aux;
  S ratio_mod, ratio_aux;  // over n_std (0 for the zero vector)
  bool std_le_mod = true, mod_le_aux = true, aux_le_3std = true;
  bool holds() const { return std_le_mod && mod_le_aux && aux_le_3std; }
};

template <class S = Rational>
EquivalenceResult<S> check_equivalence(const EquivalenceFamilies& fam, const S& theta, const SparseVector<S>& x,
                                       const NormLimits& lim = {}) {
  EquivalenceResult<S> r;
  r.n_std = norm_admissible<S>(*fam.standard, theta, x, lim).value;
  r.n_mod = norm_allowable<S>(*fam.standard, theta, x, lim).value;
  r.n_aux = norm_admissible<S>(*fam.auxiliary, theta, x, lim).value;
  auto le = [](const S& a, const S& b) {
    if constexpr (ScalarTraits<S>::exact)
      return a <= b;
    else
      return a <= b + ScalarTraits<S>::tolerance;
  };
  r.std_le_mod = le(r.n_std, r.n_mod);
  r.mod_le_aux = le(r.n_mod, r.n_aux);
  r.aux_le_3std = le(r.n_aux, S(3) * r.n_std);
  if (r.n_std != 0) {
    r.ratio_mod = r.n_mod / r.n_std;
    r.ratio_aux = r.n_aux / r.n_std;
  } else {
    r.ratio_mod = r.ratio_aux = 0;
  }
  return r;
}

template <class S = Rational>
EquivalenceResult<S> check_equivalence(const SchreierSystem& sys, const Ordinal& xi, const S& theta,
                                       const SparseVector<S>& x, const NormLimits& lim = {}) {
  return check_equivalence<S>(EquivalenceFamilies::of(sys, xi), theta, x, lim);
}

struct LowerBoundReport {
  Rational norm;      // |sum a_j y_j|
  Rational bound;     // theta/3 * sum |a_j|
  Rational ratio;     // norm / sum |a_j|
  bool holds = false;
};

// |sum a_j y_j| >= theta/3 sum |a_j| for normalized y_j with disjoint
// supports whose minima form a member of S_xi.
inline LowerBoundReport ell1_lower_bound_check(const SchreierSystem& sys, const Ordinal& xi, const Rational& theta,
                                               const std::vector<SparseVector<Rational>>& ys,
                                               const std::vector<Rational>& a, const NormLimits& lim = {}) {
  detail::check_theta(theta);
  require(ys.size() == a.size(), ErrorKind::precondition, "need one coefficient per vector");
  require(!ys.empty(), ErrorKind::precondition, "need at least one vector");
  const SchreierFamily& f = sys.schreier_ref(xi);
  std::vector<int> mins;
  SparseVector<Rational> sum;
  Rational l1 = 0;
  for (std::size_t j = 0; j < ys.size(); ++j) {
    auto y = detail::strip_zeros(ys[j]);
    require(!y.empty(), ErrorKind::precondition, "vector " + std::to_string(j) + " is zero");
    require(norm_admissible<Rational>(f, theta, y, lim).value == 1, ErrorKind::precondition,
            "vector " + std::to_string(j) + " is not normalized");
    mins.push_back(y.begin()->first);
    for (const auto& [i, c] : y) {
      require(!sum.count(i), ErrorKind::precondition, "supports are not pairwise disjoint");
      sum[i] = a[j] * c;
    }
    l1 += abs(a[j]);
  }
  FinSet ms = FinSet::from_unsorted(mins);
  require(f.contains(ms), ErrorKind::precondition, "support minima " + ms.to_string() + " are not in " + f.describe());
  LowerBoundReport r;
  r.norm = norm_admissible<Rational>(f, theta, sum, lim).value;
  r.bound = theta / 3 * l1;
  r.ratio = l1 == 0 ? Rational(0) : Rational(r.norm / l1);
  r.holds = r.norm >= r.bound;
  return r;
}

struct FlatAverageBudget {
  int max_n = 0;         // largest right endpoint tried; 0 means from + 12
  std::size_t support_cap = 24;
};

struct FlatAverage {
  SparseVector<Rational> weights;
  Rational value;
  int n = 0;
};

namespace detail {

inline SparseVector<Rational> uniform_on(int lo, int hi) {
  SparseVector<Rational> w;
  Rational p(1, hi - lo + 1);
  for (int j = lo; j <= hi; ++j) w[j] = p;
  return w;
}

// average of uniform averages over the S_1-maximal blocks of [m, n]
inline SparseVector<Rational> block_average(int m, int n) {
  std::vector<std::pair<int, int>> blocks;
  for (int b = m; b <= n;) {
    int e = std::min(n, b + b - 1);
    blocks.emplace_back(b, e);
    b = e + 1;
  }
  SparseVector<Rational> w;
  Rational share(1, static_cast<long>(blocks.size()));
  for (auto [b, e] : blocks)
    for (const auto& [j, p] : uniform_on(b, e)) w[j] += share * p;
  return w;
}

}  // namespace detail

// Convex weights on [m, n] of norm < eps, trying uniform and block averages
// for n = m, m+1, ... within the budget.
inline std::optional<FlatAverage> flat_average_search(const Family& f, const Rational& theta, int m, const Rational& eps,
                                                      FlatAverageBudget budget = {}) {
  detail::check_theta(theta);
  require(m >= 1, ErrorKind::invalid_argument, "m must be >= 1");
  require(eps > 0, ErrorKind::invalid_argument, "eps must be positive");
  int max_n = budget.max_n > 0 ? budget.max_n : m + 12;
  NormLimits lim;
  lim.admissible_cap = budget.support_cap;
  for (int n = m; n <= max_n && static_cast<std::size_t>(n - m + 1) <= budget.support_cap; ++n) {
    for (auto w : {detail::uniform_on(m, n), detail::block_average(m, n)}) {
      Rational v = norm_admissible<Rational>(f, theta, w, lim).value;
      if (v < eps) return FlatAverage{std::move(w), v, n};
    }
  }
  return std::nullopt;
}

// Dense square matrix over the index range [lo, lo + size).
struct FiniteMatrix {
  int lo = 1;
  int size = 0;
  std::vector<Rational> data;

  FiniteMatrix() = default;
  FiniteMatrix(int lo_, int size_) : lo(lo_), size(size_), data(static_cast<std::size_t>(size_) * size_) {}

  static FiniteMatrix identity(int lo, int size) {
    FiniteMatrix m(lo, size);
    for (int i = 0; i < size; ++i) m.data[static_cast<std::size_t>(i) * size + i] = 1;
    return m;
  }
  bool covers(int i) const { return i >= lo && i < lo + size; }
  Rational& at(int i, int j) {
    require(covers(i) && covers(j), ErrorKind::invalid_argument, "matrix index out of range");
    return data[static_cast<std::size_t>(i - lo) * size + (j - lo)];
  }
  const Rational& at(int i, int j) const { return const_cast<FiniteMatrix*>(this)->at(i, j); }
};

// sum_j p_j e*_j(S e_j)
inline Rational eval_psi_k(const SparseVector<Rational>& weights, const FiniteMatrix& s) {
  Rational total = 0, mass = 0;
  for (const auto& [j, p] : weights) {
    require(p >= 0, ErrorKind::invalid_argument, "weights must be nonnegative");
    require(s.covers(j), ErrorKind::invalid_argument, "matrix does not cover index " + std::to_string(j));
    mass += p;
    total += p * s.at(j, j);
  }
  require(mass == 1, ErrorKind::invalid_argument, "weights must sum to 1");
  return total;
}

}  // namespace schreier
