#pragma once

// Analysis trees of maximal Schreier sets, the replacement step, and the
// rearrangement of disjoint S_xi sets into consecutive ones.

#include <algorithm>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "schreier/family.hpp"

namespace schreier {

struct AnalysisNode {
  FinSet set;
  Ordinal order;
  int parent = -1;
  std::vector<int> children;
};

// Nodes are stored in preorder with children sorted by minimum, so the
// first node with a given minimum is the one closest to the root.
class AnalysisTree {
 public:
  AnalysisTree(Ordinal xi, std::vector<AnalysisNode> nodes) : xi_(std::move(xi)), nodes_(std::move(nodes)) {}

  const Ordinal& xi() const { return xi_; }
  const FinSet& root() const { return nodes_.front().set; }
  const std::vector<AnalysisNode>& nodes() const { return nodes_; }
  const AnalysisNode& node(int i) const { return nodes_.at(static_cast<std::size_t>(i)); }

  // index of D(a): the node closest to the root whose minimum is a
  int node_of(int a) const {
    require(root().contains(a), ErrorKind::invalid_argument,
            std::to_string(a) + " is not an element of " + root().to_string());
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (nodes_[i].set.min() == a) return static_cast<int>(i);
    fail(ErrorKind::internal, "no node has minimum " + std::to_string(a));
  }

  std::string to_dot() const {
    std::ostringstream os;
    os << "digraph analysis {\n  node [shape=box];\n";
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      os << "  n" << i << " [label=\"" << nodes_[i].set.to_string() << "\\norder " << nodes_[i].order.to_string()
         << "\"];\n";
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      for (int c : nodes_[i].children) os << "  n" << i << " -> n" << c << ";\n";
    os << "}\n";
    return os.str();
  }

 private:
  Ordinal xi_;
  std::vector<AnalysisNode> nodes_;
};

namespace detail {

inline Ordinal order_for(const SchreierSystem& sys, const Ordinal& beta, const FinSet& s) {
  return beta.is_limit() ? sys.alpha(beta, static_cast<std::uint64_t>(s.min())) : beta;
}

// Builds the decomposition tree of A in S_xi. With `maximal` every node is
// checked to be maximal in its order; otherwise blocks are the greedy
// consecutive splits, which also works for non-maximal members.
inline AnalysisTree build_tree(const SchreierSystem& sys, const Ordinal& xi, const FinSet& a, bool maximal) {
  std::vector<AnalysisNode> nodes;
  nodes.push_back({a, order_for(sys, xi, a), -1, {}});
  auto expand = [&](auto&& self, int idx) -> void {
    FinSet set = nodes[static_cast<std::size_t>(idx)].set;
    Ordinal beta = nodes[static_cast<std::size_t>(idx)].order;
    if (set.size() == 1) return;
    require(!beta.is_zero(), ErrorKind::internal, "order 0 node " + set.to_string() + " is not a singleton");
    Ordinal gamma = beta.predecessor();
    auto blocks = greedy_consecutive_blocks(sys.schreier_ref(gamma), set);
    require(blocks && blocks->size() <= static_cast<std::size_t>(set.min()), ErrorKind::internal,
            set.to_string() + " does not decompose in S(" + beta.to_string() + ")");
    for (auto& b : *blocks) {
      Ordinal ob = order_for(sys, gamma, b);
      const SchreierFamily& fb = sys.schreier_ref(ob);
      require(fb.contains(b), ErrorKind::internal,
              b.to_string() + " is not in " + fb.describe() + "; the approximating sequence of " +
                  gamma.to_string() + " is not monotone on it (raise the horizon)");
      if (maximal)
        require(!fb.contains(b.with(b.max() + 1)), ErrorKind::internal,
                "block " + b.to_string() + " is not maximal in " + fb.describe());
      int child = static_cast<int>(nodes.size());
      nodes.push_back({std::move(b), ob, idx, {}});
      nodes[static_cast<std::size_t>(idx)].children.push_back(child);
      self(self, child);
    }
  };
  expand(expand, 0);
  return AnalysisTree(xi, std::move(nodes));
}

}  // namespace detail

inline AnalysisTree analysis_tree(const SchreierSystem& sys, const Ordinal& xi, const FinSet& a) {
  require(!a.empty(), ErrorKind::invalid_argument, "analysis tree of the empty set");
  const SchreierFamily& f = sys.schreier_ref(xi);
  require(f.contains(a), ErrorKind::not_member, a.to_string() + " is not in " + f.describe());
  require(!f.contains(a.with(a.max() + 1)), ErrorKind::not_maximal,
          a.to_string() + " is not maximal in " + f.describe());
  return detail::build_tree(sys, xi, a, true);
}

struct ElementOrder {
  Ordinal order;
  FinSet node;
};

inline ElementOrder elem_order(const AnalysisTree& t, int a) {
  const auto& n = t.node(t.node_of(a));
  return {n.order, n.set};
}

struct Window {
  long long m1 = 0;                // 0 when no node precedes D(a)
  std::optional<long long> m2;     // absent means infinity
  long long upper() const { return m2 ? *m2 : std::numeric_limits<long long>::max(); }
};

inline Window replacement_window_of_node(const AnalysisTree& t, int idx) {
  const FinSet& d = t.node(idx).set;
  Window w;
  for (const auto& n : t.nodes()) {
    if (n.set.max() < d.min()) w.m1 = std::max<long long>(w.m1, n.set.max());
    if (n.set.min() > d.max() && (!w.m2 || n.set.min() < *w.m2)) w.m2 = n.set.min();
  }
  return w;
}

inline Window replacement_window(const AnalysisTree& t, int a) {
  require(t.root().contains(a), ErrorKind::invalid_argument, std::to_string(a) + " is not in the root");
  require(a != t.root().min(), ErrorKind::precondition, "replacement window needs a > min A");
  return replacement_window_of_node(t, t.node_of(a));
}

// The order gamma with gamma+1 the order of the parent of D(a).
inline Ordinal replacement_order(const AnalysisTree& t, int a) {
  const auto& d = t.node(t.node_of(a));
  require(d.parent >= 0, ErrorKind::precondition, "D(a) is the root");
  return t.node(d.parent).order.predecessor();
}

// (A \ D(a)) u D_new for D_new maximal in S_gamma inside the window.
inline FinSet replace(const SchreierSystem& sys, const AnalysisTree& t, int a, const FinSet& d_new) {
  require(t.root().contains(a), ErrorKind::invalid_argument, std::to_string(a) + " is not in the root");
  require(a != t.root().min(), ErrorKind::precondition, "replacement needs a > min A");
  require(!d_new.empty(), ErrorKind::precondition, "replacement set is empty");
  int idx = t.node_of(a);
  Ordinal gamma = replacement_order(t, a);
  const SchreierFamily& g = sys.schreier_ref(gamma);
  require(g.contains(d_new), ErrorKind::precondition, d_new.to_string() + " is not in " + g.describe());
  require(!g.contains(d_new.with(d_new.max() + 1)), ErrorKind::precondition,
          d_new.to_string() + " is not maximal in " + g.describe());
  Window w = replacement_window_of_node(t, idx);
  require(d_new.min() > w.m1 && d_new.max() < w.upper(), ErrorKind::precondition,
          d_new.to_string() + " is not inside the replacement window");
  FinSet out = set_union(set_difference(t.root(), t.node(idx).set), d_new);
  const SchreierFamily& f = sys.schreier_ref(t.xi());
  require(f.contains(out) && !f.contains(out.with(out.max() + 1)), ErrorKind::internal,
          "replacement result " + out.to_string() + " is not maximal in " + f.describe());
  return out;
}

// ---------------------------------------------------------------------------
// rearrangement

namespace detail {

class Rearranger {
 public:
  explicit Rearranger(const SchreierSystem& sys) : sys_(sys) {}

  std::vector<FinSet> run(const Ordinal& xi, std::vector<FinSet> parts) {
    require(!parts.empty(), ErrorKind::precondition, "rearrange needs at least one part");
    const SchreierFamily& f = sys_.schreier_ref(xi);
    for (const auto& p : parts) {
      require(!p.empty(), ErrorKind::precondition, "rearrange parts must be nonempty");
      require(f.contains(p), ErrorKind::precondition, p.to_string() + " is not in " + f.describe());
    }
    std::sort(parts.begin(), parts.end(), [](const FinSet& x, const FinSet& y) { return x.min() < y.min(); });
    std::size_t total = 0;
    for (const auto& p : parts) total += p.size();
    FinSet all = union_all(parts);
    require(all.size() == total, ErrorKind::precondition, "rearrange parts must be pairwise disjoint");

    std::vector<int> mins;
    for (const auto& p : parts) mins.push_back(p.min());
    std::vector<FinSet> out;
    std::vector<FinSet> rest = parts;
    if (parts.front().min() == 1) {
      // {1} is the only member containing 1; it stays first.
      out.push_back(parts.front());
      rest.erase(rest.begin());
    }
    if (!rest.empty()) {
      auto tail = steps(xi, rest);
      out.insert(out.end(), tail.begin(), tail.end());
    }
    if (out.size() < parts.size()) out = repair(out, parts.size());
    check(xi, parts, mins, all, out);
    return out;
  }

 private:
  const SchreierSystem& sys_;

  // n-fold step: pair the running first part with each later part.
  std::vector<FinSet> steps(const Ordinal& xi, std::vector<FinSet> parts) {
    if (parts.size() == 1 || xi.is_zero()) return parts;
    FinSet x = parts.front();
    std::vector<FinSet> rest;
    for (std::size_t j = 1; j < parts.size(); ++j) {
      auto [xa, y] = pair_step(xi, x, parts[j]);
      if (!xa.empty() && xa.max() > x.max()) {
        // keep the first part below its previous maximum; the overflow comes from parts[j]
        FinSet over = restrict_range(xa, static_cast<long long>(x.max()) + 1, std::numeric_limits<long long>::max());
        xa = set_difference(xa, over);
        y = set_union(over, y);
      }
      x = std::move(xa);
      if (!y.empty()) rest.push_back(std::move(y));
    }
    std::vector<FinSet> out{x};
    if (!rest.empty()) {
      std::sort(rest.begin(), rest.end(), [](const FinSet& p, const FinSet& q) { return p.min() < q.min(); });
      auto tail = steps(xi, rest);
      out.insert(out.end(), tail.begin(), tail.end());
    }
    return out;
  }

  std::pair<FinSet, FinSet> pair_step(const Ordinal& xi, const FinSet& a, const FinSet& b) {
    if (precedes(a, b)) return {a, b};
    return xi.is_successor() ? successor_step(xi, a, b) : limit_step(xi, a, b);
  }

  // grows from sorted[from] while the current set is not maximal in g
  static FinSet grow_maximal(const Family& g, const std::vector<int>& sorted, std::size_t& from, std::size_t end) {
    FinSet cur;
    cur.push_back_unchecked(sorted[from++]);
    while (from < end && g.contains(cur.with(cur.max() + 1))) cur.push_back_unchecked(sorted[from++]);
    return cur;
  }

  std::pair<FinSet, FinSet> successor_step(const Ordinal& xi, const FinSet& a, const FinSet& b) {
    Ordinal eta = xi.predecessor();
    const SchreierFamily& g = sys_.schreier_ref(eta);
    auto ab = greedy_consecutive_blocks(g, a);
    auto bb = greedy_consecutive_blocks(g, b);
    require(ab && bb, ErrorKind::internal, "greedy decomposition failed in " + g.describe());
    std::vector<FinSet> blocks = *ab;
    blocks.insert(blocks.end(), bb->begin(), bb->end());
    std::vector<FinSet> dt = run(eta, blocks);

    FinSet u = set_union(a, b);
    const auto& el = u.elements();
    std::size_t idx = 0;
    std::vector<int> at;
    const auto k = static_cast<std::size_t>(a.min());
    std::size_t made = 0;
    for (; made < k && idx < el.size(); ++made) {
      FinSet d = grow_maximal(g, el, idx, el.size());
      at.insert(at.end(), d.begin(), d.end());
    }
    FinSet at_set = FinSet::from_sorted(at);
    FinSet bt = u.slice(idx, u.size());
    // the leftover is the union of the tail blocks of the inner rearrangement
    if (!bt.empty()) {
      std::size_t count = 0;
      for (std::size_t i = 0; i < dt.size(); ++i) {
        FinSet left = set_difference(dt[i], at_set);
        if (i < k)
          require(left.empty(), ErrorKind::internal, "refilled blocks do not cover the leading inner blocks");
        else if (!left.empty())
          ++count;
      }
      require(count <= static_cast<std::size_t>(bt.min()), ErrorKind::internal, "leftover has too many blocks");
    }
    return {at_set, bt};
  }

  std::pair<FinSet, FinSet> limit_step(const Ordinal& xi, FinSet a, FinSet b) {
    const SchreierFamily& f = sys_.schreier_ref(xi);
    std::size_t cap = (a.size() + b.size()) * (a.size() + b.size()) + 1;
    for (std::size_t iter = 0; !b.empty() && !precedes(a, b); ++iter) {
      require(iter < cap, ErrorKind::internal, "limit step did not terminate");
      AnalysisTree t = build_tree(sys_, xi, a, false);
      int x = 0;
      for (int e : a)
        if (e > b.min()) {
          x = e;
          break;
        }
      int di = t.node_of(x);
      const FinSet& d = t.node(di).set;
      Ordinal gamma = t.node(t.node(di).parent).order.predecessor();
      Window w = replacement_window_of_node(t, di);
      std::vector<int> fs;
      for (int e : set_union(a, b))
        if (e >= b.min() && e < w.upper()) fs.push_back(e);
      std::size_t pos = 0;
      FinSet dt = grow_maximal(sys_.schreier_ref(gamma), fs, pos, fs.size());
      FinSet na = set_union(set_difference(a, d), dt);
      FinSet b1 = set_difference(b, dt), b2 = set_difference(d, dt);
      FinSet nb = set_union(b1, b2);
      require(f.contains(na), ErrorKind::internal, "replacement left " + f.describe());
      if (!nb.empty()) {
        Ordinal beta = sys_.alpha(xi, static_cast<std::uint64_t>(b.min()));
        std::vector<FinSet> inner;
        if (!b1.empty()) inner.push_back(b1);
        if (!b2.empty()) inner.push_back(b2);
        run(beta, inner);  // certifies nb via union closure of the approximating sequence
        require(f.contains(nb), ErrorKind::internal, "swapped part left " + f.describe());
      }
      a = std::move(na);
      b = std::move(nb);
    }
    return {a, b};
  }

  // Split the top elements into singletons until there are n parts.
  static std::vector<FinSet> repair(const std::vector<FinSet>& parts, std::size_t n) {
    FinSet u = union_all(parts);
    std::size_t r = parts.size(), keep = 1;
    for (std::size_t j = r; j >= 1; --j) {
      int m = parts[j - 1].min();
      std::size_t above = static_cast<std::size_t>(u.end() - std::upper_bound(u.begin(), u.end(), m));
      if (above >= n - j) {
        keep = j;
        break;
      }
    }
    std::size_t singles = n - keep;
    int t = u[u.size() - singles];
    std::vector<FinSet> out(parts.begin(), parts.begin() + static_cast<std::ptrdiff_t>(keep));
    out.back() = restrict_range(out.back(), 0, t);
    for (std::size_t i = u.size() - singles; i < u.size(); ++i) out.push_back(FinSet{u[i]});
    return out;
  }

  void check(const Ordinal& xi, const std::vector<FinSet>& parts, const std::vector<int>& mins, const FinSet& all,
             const std::vector<FinSet>& out) const {
    const SchreierFamily& f = sys_.schreier_ref(xi);
    require(out.size() == parts.size(), ErrorKind::internal, "rearrangement changed the number of parts");
    require(union_all(out) == all, ErrorKind::internal, "rearrangement changed the union");
    for (std::size_t i = 0; i < out.size(); ++i) {
      require(!out[i].empty() && f.contains(out[i]), ErrorKind::internal,
              "rearranged part " + out[i].to_string() + " is not in " + f.describe());
      require(out[i].min() >= mins[i], ErrorKind::internal, "rearranged minima do not dominate");
      if (i) require(precedes(out[i - 1], out[i]), ErrorKind::internal, "rearranged parts are not consecutive");
    }
  }
};

}  // namespace detail

// Disjoint members of S_xi become consecutive members with the same union
// and minima at least the original ones.
inline std::vector<FinSet> rearrange(const SchreierSystem& sys, const Ordinal& xi, std::vector<FinSet> parts) {
  return detail::Rearranger(sys).run(xi, std::move(parts));
}

struct EqualityReport {
  Ordinal xi;
  int max_element = 0;
  std::size_t standard_count = 0, modified_count = 0;
  std::vector<FinSet> only_standard, only_modified;
  bool equal() const { return only_standard.empty() && only_modified.empty(); }
};

inline EqualityReport verify_modified_equals(const SchreierSystem& sys, const Ordinal& xi, int max_element) {
  auto s = enumerate(sys.schreier_ref(xi), max_element);
  auto m = enumerate(sys.modified_ref(xi), max_element);
  EqualityReport r{xi, max_element, s.size(), m.size(), {}, {}};
  std::set_difference(s.begin(), s.end(), m.begin(), m.end(), std::back_inserter(r.only_standard));
  std::set_difference(m.begin(), m.end(), s.begin(), s.end(), std::back_inserter(r.only_modified));
  return r;
}

}  // namespace schreier
