#pragma once

// Regular families of finite sets: Schreier families S_xi and their modified
// versions, cardinality families A_n, compositions M[N] and powers.

#include <algorithm>
#include <atomic>
#include <cctype>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "schreier/error.hpp"
#include "schreier/finset.hpp"
#include "schreier/ordinal.hpp"

namespace schreier {

class Family {
 public:
  Family() = default;
  Family(const Family&) = delete;
  Family& operator=(const Family&) = delete;
  virtual ~Family() = default;

  bool contains(const FinSet& a) const {
    if (a.empty()) return true;
    {
      std::shared_lock lock(mu_);
      auto it = memo_.find(a);
      if (it != memo_.end()) return it->second;
    }
    // decided outside the lock; concurrent duplicates agree
    bool r = decide(a);
    std::unique_lock lock(mu_);
    memo_.emplace(a, r);
    return r;
  }

  virtual std::string describe() const = 0;

  std::size_t memo_size() const {
    std::shared_lock lock(mu_);
    return memo_.size();
  }

 protected:
  virtual bool decide(const FinSet& a) const = 0;

 private:
  mutable std::shared_mutex mu_;
  mutable std::unordered_map<FinSet, bool, FinSetHash> memo_;
};

using FamilyHandle = std::shared_ptr<const Family>;

// ---------------------------------------------------------------------------
// block decompositions shared by several families

// Longest-prefix greedy split of a into consecutive members of f.
inline std::optional<std::vector<FinSet>> greedy_consecutive_blocks(const Family& f, const FinSet& a) {
  std::vector<FinSet> blocks;
  std::size_t i = 0, n = a.size();
  while (i < n) {
    FinSet cur;
    std::size_t j = i;
    while (j < n) {
      cur.push_back_unchecked(a[j]);
      if (!f.contains(cur)) {
        cur.pop_back();
        break;
      }
      ++j;
    }
    if (j == i) return std::nullopt;
    blocks.push_back(std::move(cur));
    i = j;
  }
  return blocks;
}

// Exact minimum number of consecutive f-blocks covering a (DP over split points).
inline std::optional<std::size_t> min_consecutive_blocks_exact(const Family& f, const FinSet& a) {
  const std::size_t n = a.size();
  constexpr std::size_t inf = SIZE_MAX;
  std::vector<std::size_t> best(n + 1, inf);
  best[0] = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (best[i] == inf) continue;
    FinSet cur;
    for (std::size_t j = i; j < n; ++j) {
      cur.push_back_unchecked(a[j]);
      if (!f.contains(cur)) break;
      best[j + 1] = std::min(best[j + 1], best[i] + 1);
    }
  }
  if (best[n] == inf) return std::nullopt;
  return best[n];
}

// a splits into at most `limit` consecutive members of f.
inline bool fits_consecutive(const Family& f, const FinSet& a, std::size_t limit) {
  if (auto g = greedy_consecutive_blocks(f, a); g && g->size() <= limit) return true;
  auto exact = min_consecutive_blocks_exact(f, a);
  return exact && *exact <= limit;
}

constexpr std::size_t kDisjointCoverCap = 30;

// a partitions into at most `limit` pairwise disjoint members of f.
// Search over position masks: the block holding the lowest uncovered
// position is chosen from the members of f containing it.
inline bool fits_disjoint(const Family& f, const FinSet& a, std::size_t limit) {
  const std::size_t n = a.size();
  if (n == 0) return true;
  if (limit == 0) return false;
  if (fits_consecutive(f, a, limit)) return true;
  require(n <= kDisjointCoverCap, ErrorKind::cap_exceeded,
          "disjoint decomposition search limited to " + std::to_string(kDisjointCoverCap) + " elements");
  using Mask = std::uint32_t;
  std::vector<std::vector<Mask>> by_low(n);
  for (std::size_t i = 0; i < n; ++i) {
    FinSet cur;
    cur.push_back_unchecked(a[i]);
    if (!f.contains(cur)) return false;
    // hereditary DFS over members whose lowest position is i
    std::vector<int> elems{a[i]};
    std::vector<Mask>& out = by_low[i];
    auto rec = [&](auto&& self, std::size_t next, Mask mask) -> void {
      out.push_back(mask);
      for (std::size_t j = next; j < n; ++j) {
        elems.push_back(a[j]);
        if (f.contains(FinSet::from_sorted(elems))) self(self, j + 1, mask | (Mask(1) << j));
        elems.pop_back();
      }
    };
    rec(rec, i + 1, Mask(1) << i);
    std::sort(out.begin(), out.end(), [](Mask x, Mask y) { return std::popcount(x) > std::popcount(y); });
  }
  // failed[mask] = largest budget known to be insufficient
  std::unordered_map<Mask, std::size_t> failed;
  auto solve = [&](auto&& self, Mask mask, std::size_t budget) -> bool {
    if (mask == 0) return true;
    if (budget == 0) return false;
    if (auto it = failed.find(mask); it != failed.end() && it->second >= budget) return false;
    std::size_t low = static_cast<std::size_t>(std::countr_zero(mask));
    for (Mask b : by_low[low]) {
      if ((b & ~mask) != 0) continue;
      if (self(self, mask & ~b, budget - 1)) return true;
    }
    auto& slot = failed[mask];
    slot = std::max(slot, budget);
    return false;
  };
  Mask full = n == 32 ? ~Mask(0) : ((Mask(1) << n) - 1);
  return solve(solve, full, limit);
}

// ---------------------------------------------------------------------------
// simple families

class CardinalityFamily final : public Family {
 public:
  explicit CardinalityFamily(int n) : n_(n) {
    require(n >= 0, ErrorKind::invalid_argument, "A(n) needs n >= 0");
  }
  int bound() const { return n_; }
  std::string describe() const override { return "A(" + std::to_string(n_) + ")"; }

 protected:
  bool decide(const FinSet& a) const override { return a.size() <= static_cast<std::size_t>(n_); }

 private:
  int n_;
};

// M[N]: unions of consecutive N-sets whose minima form a member of M.
class CompositionFamily final : public Family {
 public:
  CompositionFamily(FamilyHandle outer, FamilyHandle inner) : outer_(std::move(outer)), inner_(std::move(inner)) {
    require(outer_ && inner_, ErrorKind::invalid_argument, "composition of null family");
  }
  const FamilyHandle& outer() const { return outer_; }
  const FamilyHandle& inner() const { return inner_; }
  std::string describe() const override { return "comp(" + outer_->describe() + "," + inner_->describe() + ")"; }

 protected:
  bool decide(const FinSet& a) const override {
    FinSet mins;
    return search(a, 0, mins);
  }

 private:
  FamilyHandle outer_, inner_;

  bool search(const FinSet& a, std::size_t i, FinSet& mins) const {
    const std::size_t n = a.size();
    if (i == n) return true;
    mins.push_back_unchecked(a[i]);
    bool ok = false;
    if (outer_->contains(mins)) {
      std::size_t reach = i;
      FinSet part;
      while (reach < n) {
        part.push_back_unchecked(a[reach]);
        if (!inner_->contains(part)) break;
        ++reach;
      }
      for (std::size_t j = reach; j > i && !ok; --j) ok = search(a, j, mins);
    }
    mins.pop_back();
    return ok;
  }
};

enum class PowerMode { consecutive, disjoint };

// (F)^s (consecutive) and (F)_s (disjoint): unions of at most s members of F.
class PowerFamily final : public Family {
 public:
  PowerFamily(FamilyHandle base, int s, PowerMode mode) : base_(std::move(base)), s_(s), mode_(mode) {
    require(base_ != nullptr, ErrorKind::invalid_argument, "power of null family");
    require(s >= 1, ErrorKind::invalid_argument, "power exponent must be >= 1");
  }
  const FamilyHandle& base() const { return base_; }
  int exponent() const { return s_; }
  PowerMode mode() const { return mode_; }
  std::string describe() const override {
    return "pow(" + base_->describe() + "," + std::to_string(s_) + "," +
           (mode_ == PowerMode::consecutive ? "consec" : "disj") + ")";
  }

 protected:
  bool decide(const FinSet& a) const override {
    auto lim = static_cast<std::size_t>(s_);
    return mode_ == PowerMode::consecutive ? fits_consecutive(*base_, a, lim) : fits_disjoint(*base_, a, lim);
  }

 private:
  FamilyHandle base_;
  int s_;
  PowerMode mode_;
};

inline FamilyHandle cardinality(int n) { return std::make_shared<CardinalityFamily>(n); }
inline FamilyHandle compose(FamilyHandle outer, FamilyHandle inner) {
  return std::make_shared<CompositionFamily>(std::move(outer), std::move(inner));
}
inline FamilyHandle power(FamilyHandle f, int s, PowerMode mode) {
  return std::make_shared<PowerFamily>(std::move(f), s, mode);
}

// Visits every member of f contained in [lo, hi] (including the empty set)
// in lexicographic order, pruning by heredity.
template <class Fn>
void for_each_member(const Family& f, int lo, int hi, Fn&& fn) {
  FinSet cur;
  auto rec = [&](auto&& self, int next) -> void {
    fn(static_cast<const FinSet&>(cur));
    for (int x = next; x <= hi; ++x) {
      cur.push_back_unchecked(x);
      if (f.contains(cur)) self(self, x + 1);
      cur.pop_back();
    }
  };
  rec(rec, std::max(lo, 1));
}

constexpr int kDefaultEnumerateCap = 24;

inline std::vector<FinSet> enumerate(const Family& f, int max_element, int cap = kDefaultEnumerateCap) {
  require(max_element >= 0, ErrorKind::invalid_argument, "max_element must be >= 0");
  require(max_element <= cap, ErrorKind::cap_exceeded,
          "enumerate max_element " + std::to_string(max_element) + " exceeds cap " + std::to_string(cap));
  std::vector<FinSet> out;
  for_each_member(f, 1, max_element, [&](const FinSet& s) { out.push_back(s); });
  return out;
}

inline bool is_maximal(const Family& f, const FinSet& a) {
  require(f.contains(a), ErrorKind::not_member, a.to_string() + " is not in " + f.describe());
  return !f.contains(a.with(a.empty() ? 1 : a.max() + 1));
}

constexpr std::size_t kDefaultExtensionCap = 1024;

// Adds max+1 while the set stays in f; by spreading this reaches a maximal set.
inline FinSet extend_to_maximal(const Family& f, const FinSet& a, std::size_t cap = kDefaultExtensionCap) {
  require(f.contains(a), ErrorKind::not_member, a.to_string() + " is not in " + f.describe());
  FinSet cur = a;
  while (true) {
    FinSet next = cur.with(cur.empty() ? 1 : cur.max() + 1);
    if (!f.contains(next)) return cur;
    require(next.size() <= cap, ErrorKind::cap_exceeded,
            "maximal extension exceeds " + std::to_string(cap) + " elements");
    cur = std::move(next);
  }
}

// ---------------------------------------------------------------------------
// Schreier families and approximating sequences

struct SystemConfig {
  int horizon = 12;     // union-closure checks cover sets inside [2, horizon]
  int offset_cap = 64;  // largest boost offset tried
  std::size_t max_families = 8000;  // guards against runaway ordinal recursion
  std::map<Ordinal, std::vector<int>> offset_overrides;  // limit -> l_1, l_2, ...
};

class SchreierSystem;

class ApproxSequence {
 public:
  ApproxSequence(const SchreierSystem* sys, Ordinal base, int horizon, int cap,
                 std::optional<std::vector<int>> fixed)
      : sys_(sys), base_(std::move(base)), horizon_(horizon), cap_(cap), fixed_(std::move(fixed)) {}

  const Ordinal& base() const { return base_; }
  int horizon() const { return horizon_; }

  Ordinal at(std::uint64_t n) const {
    require(n >= 1, ErrorKind::invalid_argument, "approximating sequence index must be >= 1");
    std::lock_guard lock(mu_);
    while (alpha_.size() < n) extend_locked();
    return alpha_[n - 1];
  }

  // Offsets l_1..l_n (extending the table as needed).
  std::vector<int> offsets(std::uint64_t n) const {
    if (n > 0) at(n);
    std::lock_guard lock(mu_);
    return {offsets_.begin(), offsets_.begin() + static_cast<std::ptrdiff_t>(n)};
  }

  std::size_t known() const {
    std::lock_guard lock(mu_);
    return alpha_.size();
  }

 private:
  const SchreierSystem* sys_;
  Ordinal base_;
  int horizon_, cap_;
  std::optional<std::vector<int>> fixed_;
  mutable std::mutex mu_;
  mutable std::vector<Ordinal> alpha_;
  mutable std::vector<int> offsets_;

  void extend_locked() const;
};

class SchreierFamily final : public Family {
 public:
  SchreierFamily(const SchreierSystem* sys, Ordinal xi, bool modified)
      : sys_(sys), xi_(std::move(xi)), modified_(modified) {}

  const Ordinal& order() const { return xi_; }
  bool modified() const { return modified_; }
  const SchreierSystem& system() const { return *sys_; }
  std::string describe() const override { return (modified_ ? "SM(" : "S(") + xi_.to_string() + ")"; }

  // Smallest n <= min A with A in S_{alpha(xi, n)}; limit orders only.
  std::optional<std::uint64_t> limit_witness(const FinSet& a) const;

 protected:
  bool decide(const FinSet& a) const override;

 private:
  const SchreierSystem* sys_;
  Ordinal xi_;
  bool modified_;
  mutable std::atomic<const SchreierFamily*> pred_{nullptr};

  const SchreierFamily& predecessor() const;
};

class SchreierSystem : public std::enable_shared_from_this<SchreierSystem> {
  struct Token {};

 public:
  SchreierSystem(Token, SystemConfig cfg) : cfg_(std::move(cfg)) {
    require(cfg_.horizon >= 1, ErrorKind::invalid_argument, "horizon must be >= 1");
    require(cfg_.offset_cap >= 0, ErrorKind::invalid_argument, "offset cap must be >= 0");
  }

  static std::shared_ptr<SchreierSystem> create(SystemConfig cfg = {}) {
    return std::make_shared<SchreierSystem>(Token{}, std::move(cfg));
  }

  const SystemConfig& config() const { return cfg_; }

  // Handles share ownership of the system.
  FamilyHandle schreier(const Ordinal& xi) const { return {shared_from_this(), &schreier_ref(xi)}; }
  FamilyHandle modified(const Ordinal& xi) const { return {shared_from_this(), &modified_ref(xi)}; }

  const SchreierFamily& schreier_ref(const Ordinal& xi) const { return node(std_, xi, false); }
  const SchreierFamily& modified_ref(const Ordinal& xi) const { return node(mod_, xi, true); }

  const ApproxSequence& approx(const Ordinal& limit) const {
    require(limit.is_limit(), ErrorKind::not_limit, "approximating sequence needs a limit ordinal, got " +
                                                        limit.to_string());
    std::lock_guard lock(mu_);
    auto it = approx_.find(limit);
    if (it == approx_.end()) {
      std::optional<std::vector<int>> fixed;
      if (auto o = cfg_.offset_overrides.find(limit); o != cfg_.offset_overrides.end()) fixed = o->second;
      it = approx_
               .emplace(limit, std::make_unique<ApproxSequence>(this, limit, cfg_.horizon, cfg_.offset_cap,
                                                                 std::move(fixed)))
               .first;
    }
    return *it->second;
  }

  Ordinal alpha(const Ordinal& limit, std::uint64_t n) const { return approx(limit).at(n); }

  std::size_t family_count() const {
    std::lock_guard lock(mu_);
    return std_.size() + mod_.size();
  }

 private:
  SystemConfig cfg_;
  mutable std::mutex mu_;
  mutable std::map<Ordinal, std::unique_ptr<SchreierFamily>> std_, mod_;
  mutable std::map<Ordinal, std::unique_ptr<ApproxSequence>> approx_;

  const SchreierFamily& node(std::map<Ordinal, std::unique_ptr<SchreierFamily>>& m, const Ordinal& xi,
                             bool modified) const {
    std::lock_guard lock(mu_);
    auto it = m.find(xi);
    if (it == m.end()) {
      require(std_.size() + mod_.size() < cfg_.max_families, ErrorKind::cap_exceeded,
              "more than " + std::to_string(cfg_.max_families) + " Schreier families instantiated; the order is " +
                  "beyond desk scale for this horizon");
      it = m.emplace(xi, std::make_unique<SchreierFamily>(this, xi, modified)).first;
    }
    return *it->second;
  }
};

using SystemPtr = std::shared_ptr<SchreierSystem>;

inline const SchreierFamily& SchreierFamily::predecessor() const {
  const SchreierFamily* p = pred_.load(std::memory_order_acquire);
  if (!p) {
    Ordinal g = xi_.predecessor();
    p = modified_ ? &sys_->modified_ref(g) : &sys_->schreier_ref(g);
    pred_.store(p, std::memory_order_release);
  }
  return *p;
}

inline bool SchreierFamily::decide(const FinSet& a) const {
  if (a.size() <= 1) return true;
  if (xi_.is_zero()) return false;
  const auto m = static_cast<std::size_t>(a.min());
  if (a.size() <= m) return true;  // singletons of any lower family
  if (xi_.is_successor()) {
    const SchreierFamily& g = predecessor();
    return modified_ ? fits_disjoint(g, a, m) : fits_consecutive(g, a, m);
  }
  const ApproxSequence& seq = sys_->approx(xi_);
  for (std::uint64_t n = m; n >= 1; --n) {
    Ordinal beta = seq.at(n);
    const SchreierFamily& f = modified_ ? sys_->modified_ref(beta) : sys_->schreier_ref(beta);
    if (f.contains(a)) return true;
  }
  return false;
}

inline std::optional<std::uint64_t> SchreierFamily::limit_witness(const FinSet& a) const {
  require(xi_.is_limit(), ErrorKind::not_limit, "limit witness needs a limit order");
  if (a.empty()) return 1;
  const ApproxSequence& seq = sys_->approx(xi_);
  for (std::uint64_t n = 1; n <= static_cast<std::uint64_t>(a.min()); ++n) {
    Ordinal beta = seq.at(n);
    const SchreierFamily& f = modified_ ? sys_->modified_ref(beta) : sys_->schreier_ref(beta);
    if (f.contains(a)) return n;
  }
  return std::nullopt;
}

struct UnionClosureFailure {
  FinSet set;  // member of (S_prev)^2 inside [2, horizon] missing from S_next
};

// Union closure: every U inside [2, horizon] that splits as A < B with A, B in
// S_prev belongs to S_next. The empty B case gives monotonicity.
inline std::optional<UnionClosureFailure> check_union_closure(const SchreierSystem& sys, const Ordinal& prev,
                                                              const Ordinal& next, int horizon) {
  auto pair_family = std::make_shared<PowerFamily>(FamilyHandle(FamilyHandle{}, &sys.schreier_ref(prev)), 2,
                                                   PowerMode::consecutive);
  const SchreierFamily& target = sys.schreier_ref(next);
  std::optional<UnionClosureFailure> bad;
  FinSet cur;
  auto rec = [&](auto&& self, int from) -> void {
    if (bad) return;
    if (!target.contains(cur)) {
      bad = UnionClosureFailure{cur};
      return;
    }
    for (int x = from; x <= horizon && !bad; ++x) {
      cur.push_back_unchecked(x);
      if (pair_family->contains(cur)) self(self, x + 1);
      cur.pop_back();
    }
  };
  rec(rec, 2);
  return bad;
}

inline void ApproxSequence::extend_locked() const {
  const std::uint64_t n = alpha_.size() + 1;
  if (n == 1) {
    alpha_.push_back(Ordinal::finite(1));
    offsets_.push_back(0);
    return;
  }
  Ordinal canon = fundamental_sequence(base_, n);
  if (!canon.is_successor()) canon = canon.successor();
  const Ordinal& prev = alpha_.back();
  if (fixed_ && n - 1 < fixed_->size()) {
    int l = (*fixed_)[n - 1];
    require(l >= offsets_.back(), ErrorKind::invalid_argument, "override offsets must be nondecreasing");
    Ordinal cand = canon + Ordinal::finite(static_cast<std::uint64_t>(l));
    alpha_.push_back(cand);
    offsets_.push_back(l);
    return;
  }
  for (int l = offsets_.back(); l <= cap_; ++l) {
    Ordinal cand = canon + Ordinal::finite(static_cast<std::uint64_t>(l));
    if (!(prev < cand)) continue;
    if (!check_union_closure(*sys_, prev, cand, horizon_)) {
      alpha_.push_back(cand);
      offsets_.push_back(l);
      return;
    }
  }
  fail(ErrorKind::not_found, "no boost offset <= " + std::to_string(cap_) + " makes alpha(" + base_.to_string() +
                                 ", " + std::to_string(n) + ") union-closed up to horizon " +
                                 std::to_string(horizon_));
}

// Unique decomposition of A in MAX(S_xi) into min A maximal blocks of the
// predecessor order (after passing to alpha(xi, min A) for limits).
inline std::vector<FinSet> decompose_maximal(const SchreierSystem& sys, const Ordinal& xi, const FinSet& a) {
  require(!xi.is_zero(), ErrorKind::invalid_argument, "decompose_maximal needs xi >= 1");
  require(!a.empty(), ErrorKind::invalid_argument, "decompose_maximal needs a nonempty set");
  const SchreierFamily& f = sys.schreier_ref(xi);
  require(f.contains(a), ErrorKind::not_member, a.to_string() + " is not in " + f.describe());
  require(is_maximal(f, a), ErrorKind::not_maximal, a.to_string() + " is not maximal in " + f.describe());
  Ordinal beta = xi.is_limit() ? sys.alpha(xi, static_cast<std::uint64_t>(a.min())) : xi;
  const SchreierFamily& g = sys.schreier_ref(beta.predecessor());
  auto blocks = greedy_consecutive_blocks(g, a);
  require(blocks && blocks->size() == static_cast<std::size_t>(a.min()), ErrorKind::internal,
          "maximal decomposition of " + a.to_string() + " has the wrong number of blocks");
  for (const auto& b : *blocks)
    require(is_maximal(g, b), ErrorKind::internal, "block " + b.to_string() + " is not maximal");
  return *blocks;
}

struct InclusionReport {
  std::string left, right;
  int max_element = 0;
  std::size_t checked = 0;
  std::vector<FinSet> counterexamples;
  bool ok() const { return counterexamples.empty(); }
};

inline InclusionReport check_inclusion(const Family& left, const Family& right, int max_element,
                                       int cap = kDefaultEnumerateCap) {
  InclusionReport r{left.describe(), right.describe(), max_element, 0, {}};
  for (const auto& s : enumerate(left, max_element, cap)) {
    ++r.checked;
    if (!right.contains(s)) r.counterexamples.push_back(s);
  }
  return r;
}

// (S_xi[A_2])[A_3] inside (S_xi)^3.
inline InclusionReport check_composition_inclusion(const SchreierSystem& sys, const Ordinal& xi, int max_element) {
  require(!xi.is_zero(), ErrorKind::invalid_argument, "inclusion check needs xi >= 1");
  FamilyHandle s = sys.schreier(xi);
  auto left = compose(compose(s, cardinality(2)), cardinality(3));
  auto right = power(s, 3, PowerMode::consecutive);
  return check_inclusion(*left, *right, max_element);
}

// ---------------------------------------------------------------------------
// descriptor mini-language: S(xi) SM(xi) A(n) comp(F,G) pow(F,s,consec|disj)

namespace detail {

class FamilyParser {
 public:
  FamilyParser(const SchreierSystem& sys, std::string_view src) : sys_(sys), s_(src) {}

  FamilyHandle parse() {
    FamilyHandle f = family();
    skip();
    if (pos_ != s_.size()) error("unexpected trailing input");
    return f;
  }

 private:
  const SchreierSystem& sys_;
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void error(const std::string& msg) {
    fail(ErrorKind::parse, "family '" + std::string(s_) + "' at " + std::to_string(pos_) + ": " + msg);
  }
  void skip() {
    while (pos_ < s_.size() && s_[pos_] == ' ') ++pos_;
  }
  void expect(char c) {
    skip();
    if (pos_ >= s_.size() || s_[pos_] != c) error(std::string("expected '") + c + "'");
    ++pos_;
  }
  std::string ident() {
    skip();
    std::size_t b = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return std::string(s_.substr(b, pos_ - b));
  }
  int nat() {
    skip();
    std::size_t b = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (b == pos_) error("expected a number");
    if (pos_ - b > 9) error("number too large");
    return std::stoi(std::string(s_.substr(b, pos_ - b)));
  }
  // text up to the ')' closing the current argument list
  std::string balanced() {
    std::size_t b = pos_;
    int depth = 0;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '(') ++depth;
      if (c == ')') {
        if (depth == 0) break;
        --depth;
      }
      ++pos_;
    }
    return std::string(s_.substr(b, pos_ - b));
  }
  FamilyHandle family() {
    std::string name = ident();
    expect('(');
    FamilyHandle f;
    if (name == "S" || name == "SM") {
      Ordinal xi = parse_ordinal(balanced());
      f = name == "S" ? sys_.schreier(xi) : sys_.modified(xi);
    } else if (name == "A") {
      f = cardinality(nat());
    } else if (name == "comp") {
      FamilyHandle outer = family();
      expect(',');
      FamilyHandle inner = family();
      f = compose(outer, inner);
    } else if (name == "pow") {
      FamilyHandle base = family();
      expect(',');
      int s = nat();
      expect(',');
      std::string mode = ident();
      if (mode != "consec" && mode != "disj") error("power mode must be consec or disj");
      if (s < 1) error("power exponent must be >= 1");
      f = power(base, s, mode == "consec" ? PowerMode::consecutive : PowerMode::disjoint);
    } else {
      error("unknown family '" + name + "'");
    }
    expect(')');
    return f;
  }
};

}  // namespace detail

inline FamilyHandle parse_family(const SchreierSystem& sys, std::string_view descriptor) {
  return detail::FamilyParser(sys, descriptor).parse();
}

// The Schreier family behind a handle, if it is one.
inline const SchreierFamily* as_schreier(const FamilyHandle& f) { return dynamic_cast<const SchreierFamily*>(f.get()); }

}  // namespace schreier
