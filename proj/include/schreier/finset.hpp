#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

#include "schreier/error.hpp"

namespace schreier {

// Strictly increasing finite set of positive integers.
class FinSet {
 public:
  using value_type = int;
  using const_iterator = std::vector<int>::const_iterator;

  FinSet() = default;
  FinSet(std::initializer_list<int> xs) : FinSet(from_unsorted(std::vector<int>(xs))) {}

  // Sorts and rejects duplicates or non-positive elements.
  static FinSet from_unsorted(std::vector<int> xs) {
    std::sort(xs.begin(), xs.end());
    return from_sorted(std::move(xs));
  }

  static FinSet from_sorted(std::vector<int> xs) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      require(xs[i] >= 1, ErrorKind::invalid_argument, "set elements must be positive integers");
      if (i) require(xs[i - 1] < xs[i], ErrorKind::invalid_argument, "set elements must be strictly increasing");
    }
    FinSet s;
    s.xs_ = std::move(xs);
    return s;
  }

  static FinSet interval(int lo, int hi) {
    FinSet s;
    for (int i = std::max(lo, 1); i <= hi; ++i) s.xs_.push_back(i);
    return s;
  }

  bool empty() const { return xs_.empty(); }
  std::size_t size() const { return xs_.size(); }
  int min() const {
    require(!xs_.empty(), ErrorKind::invalid_argument, "min of empty set");
    return xs_.front();
  }
  int max() const {
    require(!xs_.empty(), ErrorKind::invalid_argument, "max of empty set");
    return xs_.back();
  }
  int operator[](std::size_t i) const { return xs_[i]; }
  const_iterator begin() const { return xs_.begin(); }
  const_iterator end() const { return xs_.end(); }
  const std::vector<int>& elements() const { return xs_; }

  bool contains(int x) const { return std::binary_search(xs_.begin(), xs_.end(), x); }

  FinSet with(int x) const {
    require(x >= 1, ErrorKind::invalid_argument, "set elements must be positive integers");
    FinSet s = *this;
    auto it = std::lower_bound(s.xs_.begin(), s.xs_.end(), x);
    if (it == s.xs_.end() || *it != x) s.xs_.insert(it, x);
    return s;
  }

  // Fast append of an element larger than max; caller guarantees order.
  void push_back_unchecked(int x) { xs_.push_back(x); }
  void pop_back() { xs_.pop_back(); }

  FinSet slice(std::size_t from, std::size_t to) const {
    FinSet s;
    s.xs_.assign(xs_.begin() + static_cast<std::ptrdiff_t>(from), xs_.begin() + static_cast<std::ptrdiff_t>(to));
    return s;
  }

  bool is_subset_of(const FinSet& o) const { return std::includes(o.xs_.begin(), o.xs_.end(), xs_.begin(), xs_.end()); }

  // B is a spread of *this: same size and b_i >= a_i.
  bool has_spread(const FinSet& b) const {
    if (b.size() != size()) return false;
    for (std::size_t i = 0; i < size(); ++i)
      if (b.xs_[i] < xs_[i]) return false;
    return true;
  }

  std::string to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < xs_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(xs_[i]);
    }
    return s + "}";
  }

  friend bool operator==(const FinSet&, const FinSet&) = default;
  friend auto operator<=>(const FinSet& a, const FinSet& b) { return a.xs_ <=> b.xs_; }

 private:
  std::vector<int> xs_;
};

inline FinSet set_union(const FinSet& a, const FinSet& b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return FinSet::from_sorted(std::move(out));
}

inline FinSet set_difference(const FinSet& a, const FinSet& b) {
  std::vector<int> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return FinSet::from_sorted(std::move(out));
}

inline FinSet set_intersection(const FinSet& a, const FinSet& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return FinSet::from_sorted(std::move(out));
}

inline bool disjoint(const FinSet& a, const FinSet& b) { return set_intersection(a, b).empty(); }

// A < B in the block order: max A < min B; empty sets compare true.
inline bool precedes(const FinSet& a, const FinSet& b) { return a.empty() || b.empty() || a.max() < b.min(); }

// Elements of a in the half-open range [lo, hi).
inline FinSet restrict_range(const FinSet& a, long long lo, long long hi) {
  std::vector<int> out;
  for (int x : a)
    if (x >= lo && x < hi) out.push_back(x);
  return FinSet::from_sorted(std::move(out));
}

inline FinSet union_all(const std::vector<FinSet>& parts) {
  std::vector<int> all;
  for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  return FinSet::from_unsorted(std::move(all));
}

inline FinSet minima(const std::vector<FinSet>& parts) {
  std::vector<int> ms;
  for (const auto& p : parts)
    if (!p.empty()) ms.push_back(p.min());
  return FinSet::from_unsorted(std::move(ms));
}

struct FinSetHash {
  std::size_t operator()(const FinSet& s) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (int x : s) {
      h ^= static_cast<std::size_t>(x);
      h *= 0x100000001b3ULL;
    }
    return h ^ s.size();
  }
};

}  // namespace schreier
