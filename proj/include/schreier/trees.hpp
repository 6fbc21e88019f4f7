#pragma once

// Code trees for norming functionals: finite sets of nondecreasing sequences
// satisfying (T1)-(T4), plus (T5) for admissible trees. The map psi, its
// inverse by decomposition search, the reductions and the allowable ->
// admissible conversion.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "schreier/analysis.hpp"
#include "schreier/family.hpp"
#include "schreier/norms.hpp"

namespace schreier {

using Seq = std::vector<int>;

enum class TreeKind { allowable, admissible };

inline const char* to_string(TreeKind k) { return k == TreeKind::admissible ? "admissible" : "allowable"; }

inline std::string seq_to_string(const Seq& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + ")";
}

// s before t in the lexicographic order: first difference within the common
// length is smaller. Prefix-comparable pairs are not ordered.
inline bool lex_less(const Seq& s, const Seq& t) {
  std::size_t n = std::min(s.size(), t.size());
  for (std::size_t i = 0; i < n; ++i)
    if (s[i] != t[i]) return s[i] < t[i];
  return false;
}

inline bool is_prefix(const Seq& s, const Seq& t) {
  return s.size() <= t.size() && std::equal(s.begin(), s.end(), t.begin());
}

// Labelled tree view; every label equals the minimum of the node's support.
struct TreeNode {
  int label = 0;
  std::vector<TreeNode> children;
  bool leaf() const { return children.empty(); }
};

// An empty CodeTree stands for the zero functional.
class CodeTree {
 public:
  CodeTree() = default;
  explicit CodeTree(std::set<Seq> nodes, TreeKind kind = TreeKind::allowable) : nodes_(std::move(nodes)), kind_(kind) {
    for (const auto& s : nodes_) {
      require(!s.empty(), ErrorKind::invalid_argument, "tree nodes must be nonempty sequences");
      for (std::size_t i = 0; i < s.size(); ++i) {
        require(s[i] >= 1, ErrorKind::invalid_argument, "tree labels must be positive");
        if (i) require(s[i - 1] <= s[i], ErrorKind::invalid_argument, "tree node " + seq_to_string(s) + " decreases");
      }
    }
  }
  static CodeTree from_nodes(const std::vector<Seq>& nodes, TreeKind kind = TreeKind::allowable) {
    return CodeTree(std::set<Seq>(nodes.begin(), nodes.end()), kind);
  }
  static CodeTree singleton(int n) { return CodeTree({Seq{n}}); }

  const std::set<Seq>& nodes() const { return nodes_; }
  TreeKind kind() const { return kind_; }
  CodeTree as(TreeKind k) const { return CodeTree(nodes_, k); }
  bool empty() const { return nodes_.empty(); }
  bool contains(const Seq& s) const { return nodes_.count(s) > 0; }

  int root() const {
    require(!empty(), ErrorKind::invalid_argument, "the zero tree has no root");
    return nodes_.begin()->front();
  }
  std::size_t length() const {
    std::size_t l = 0;
    for (const auto& s : nodes_) l = std::max(l, s.size());
    return l;
  }

  // labels j with (t, j) in T
  std::vector<int> child_labels(const Seq& t) const {
    std::vector<int> out;
    for (auto it = nodes_.upper_bound(t); it != nodes_.end() && is_prefix(t, *it); ++it)
      if (it->size() == t.size() + 1) out.push_back(it->back());
    return out;
  }
  bool is_terminal(const Seq& t) const {
    auto it = nodes_.upper_bound(t);
    return it == nodes_.end() || !is_prefix(t, *it);
  }
  FinSet node_support(const Seq& t) const {
    std::vector<int> out;
    for (auto it = nodes_.lower_bound(t); it != nodes_.end() && is_prefix(t, *it); ++it)
      if (is_terminal(*it)) out.push_back(it->back());
    // invalid trees may repeat a terminal value; T4 reports that
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return FinSet::from_sorted(std::move(out));
  }
  FinSet support() const { return empty() ? FinSet{} : node_support(Seq{root()}); }

  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (const auto& t : nodes_) {
      s += (first ? "" : ",") + seq_to_string(t);
      first = false;
    }
    return s + "}";
  }

  friend bool operator==(const CodeTree& a, const CodeTree& b) { return a.nodes_ == b.nodes_; }

 private:
  std::set<Seq> nodes_;
  TreeKind kind_ = TreeKind::allowable;
};

// ---------------------------------------------------------------------------
// conversions

namespace detail {

inline void emit(const TreeNode& n, Seq& path, std::set<Seq>& out) {
  path.push_back(n.label);
  out.insert(path);
  for (const auto& c : n.children) emit(c, path, out);
  path.pop_back();
}

inline TreeNode node_of(const CodeTree& t, const Seq& s) {
  TreeNode n{s.back(), {}};
  Seq child = s;
  child.push_back(0);
  for (int j : t.child_labels(s)) {
    child.back() = j;
    n.children.push_back(node_of(t, child));
  }
  return n;
}

inline int relabel(TreeNode& n) {
  if (n.leaf()) return n.label;
  int m = relabel(n.children.front());
  for (auto& c : n.children) m = std::min(m, relabel(c));
  std::sort(n.children.begin(), n.children.end(), [](const TreeNode& a, const TreeNode& b) { return a.label < b.label; });
  n.label = m;
  return m;
}

}  // namespace detail

inline CodeTree to_code_tree(const TreeNode& n, TreeKind kind = TreeKind::allowable) {
  std::set<Seq> out;
  Seq path;
  detail::emit(n, path, out);
  return CodeTree(std::move(out), kind);
}

// Requires T1/T2 (a unique root with all nodes below it).
inline TreeNode to_tree_node(const CodeTree& t) {
  require(!t.empty(), ErrorKind::invalid_argument, "the zero tree has no node view");
  return detail::node_of(t, Seq{t.root()});
}

inline CodeTree code_tree_of_witness(const WitnessNode& w, TreeKind kind) {
  std::function<TreeNode(const WitnessNode&)> go = [&](const WitnessNode& x) {
    TreeNode n{x.index, {}};
    for (const auto& c : x.children) n.children.push_back(go(c));
    return n;
  };
  TreeNode n = go(w);
  detail::relabel(n);
  return to_code_tree(n, kind);
}

// ---------------------------------------------------------------------------
// validation

struct Violation {
  std::string condition;  // "T1".."T5" or "shape"
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const {
    std::string s;
    for (const auto& v : violations) s += v.condition + ": " + v.detail + "\n";
    return s;
  }
};

inline ValidationReport validate(const CodeTree& t, const Family& f) {
  ValidationReport r;
  auto add = [&](const char* c, std::string d) { r.violations.push_back({c, std::move(d)}); };
  if (t.empty()) {
    add("shape", "empty tree (zero functional)");
    return r;
  }
  const auto& nodes = t.nodes();
  for (const auto& s : nodes)
    for (std::size_t k = 1; k < s.size(); ++k)
      if (!t.contains(Seq(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(k))))
        add("T1", "prefix of " + seq_to_string(s) + " of length " + std::to_string(k) + " is missing");
  std::vector<Seq> roots;
  for (const auto& s : nodes)
    if (s.size() == 1) roots.push_back(s);
  if (roots.size() != 1) {
    add("T2", std::to_string(roots.size()) + " nodes of length 1");
  } else {
    for (const auto& s : nodes)
      if (s.front() != roots[0][0]) add("T2", seq_to_string(s) + " is not below the root");
  }
  for (const auto& s : nodes) {
    if (t.is_terminal(s)) continue;
    Seq rep = s;
    rep.push_back(s.back());
    if (!t.contains(rep)) add("T3", "missing " + seq_to_string(rep));
    auto labels = t.child_labels(s);
    FinSet c = FinSet::from_sorted(labels);
    if (!f.contains(c)) add("T3", "children of " + seq_to_string(s) + " " + c.to_string() + " not in " + f.describe());
  }
  std::map<Seq, FinSet> supp;
  for (const auto& s : nodes) supp.emplace(s, t.node_support(s));
  for (auto a = nodes.begin(); a != nodes.end(); ++a)
    for (auto b = std::next(a); b != nodes.end(); ++b) {
      if (!lex_less(*a, *b)) continue;
      const FinSet& sa = supp.at(*a);
      const FinSet& sb = supp.at(*b);
      if (!disjoint(sa, sb))
        add("T4", "supports of " + seq_to_string(*a) + " and " + seq_to_string(*b) + " overlap");
      else if (t.kind() == TreeKind::admissible && !precedes(sa, sb))
        add("T5", "support of " + seq_to_string(*a) + " is not below that of " + seq_to_string(*b));
    }
  return r;
}

// ---------------------------------------------------------------------------
// psi and its inverse

// e*_n for a singleton, else theta^(j-1) on terminal labels at depth j.
inline Functional<Rational> psi(const CodeTree& t, const Rational& theta) {
  Functional<Rational> f;
  if (t.empty()) return f;
  for (const auto& s : t.nodes()) {
    if (!t.is_terminal(s)) continue;
    std::size_t j = s.size() - 1;
    int n = s.back();
    require(!f.entries.count(n), ErrorKind::invalid_argument, "terminal label " + std::to_string(n) + " repeats");
    f.entries[n] = rational_pow(theta, static_cast<int>(j));
    f.signs[n] = 1;
    if (f.levels.size() <= j) f.levels.resize(j + 1);
    f.levels[j] = f.levels[j].with(n);
  }
  return f;
}

// Level form of a nonnegative functional: levels[j] carries theta^j.
inline std::vector<FinSet> level_form(const Functional<Rational>& f, const Rational& theta) {
  detail::check_theta(theta);
  std::vector<FinSet> levels;
  for (const auto& [i, c] : f.entries) {
    if (c == 0) continue;
    require(c > 0, ErrorKind::invalid_argument, "coefficients must be nonnegative (apply the sign mask first)");
    Rational p = 1;
    std::size_t j = 0;
    while (p > c && j < 64) {
      p *= theta;
      ++j;
    }
    require(p == c, ErrorKind::not_found, "coefficient " + format_rational(c) + " at " + std::to_string(i) +
                                              " is not a power of theta");
    if (levels.size() <= j) levels.resize(j + 1);
    levels[j] = levels[j].with(i);
  }
  return levels;
}

namespace detail {

// Decomposition search behind tree_of_functional. Entries are (index, level)
// pairs with level >= 1; the node is theta times the sum of its children.
class TreeSearch {
 public:
  explicit TreeSearch(const Family& f) : f_(f) {}

  std::optional<TreeNode> composite(const std::vector<std::pair<int, int>>& g) {
    if (auto it = memo_.find(g); it != memo_.end()) return it->second;
    auto r = solve(g);
    memo_.emplace(g, r);
    return r;
  }

 private:
  const Family& f_;
  std::map<std::vector<std::pair<int, int>>, std::optional<TreeNode>> memo_;

  std::optional<TreeNode> solve(const std::vector<std::pair<int, int>>& g) {
    FinSet singles;
    std::vector<std::pair<int, int>> rest;
    for (auto [i, l] : g) {
      if (l == 1)
        singles.push_back_unchecked(i);
      else
        rest.emplace_back(i, l - 1);
    }
    if (!f_.contains(singles)) return std::nullopt;
    std::vector<std::vector<std::pair<int, int>>> blocks;
    std::optional<TreeNode> found;
    auto mins_with = [&](int e) {
      FinSet m = singles;
      for (const auto& b : blocks) m = m.with(b.front().first);
      return m.with(e);
    };
    std::function<void(std::size_t)> dfs = [&](std::size_t t) {
      if (found) return;
      if (t == rest.size()) {
        TreeNode n;
        for (int s : singles) n.children.push_back({s, {}});
        for (const auto& b : blocks) {
          auto c = composite(b);
          if (!c) return;
          n.children.push_back(*c);
        }
        relabel(n);
        found = std::move(n);
        return;
      }
      auto e = rest[t];
      if (f_.contains(mins_with(e.first))) {
        blocks.push_back({e});
        dfs(t + 1);
        blocks.pop_back();
      }
      for (auto& b : blocks) {
        if (found) return;
        b.push_back(e);
        dfs(t + 1);
        b.pop_back();
      }
    };
    dfs(0);
    return found;
  }
};

}  // namespace detail

// Allowable tree T with psi(T) = the functional given in level form.
inline CodeTree tree_of_levels(const std::vector<FinSet>& levels, const Family& f) {
  std::size_t total = 0;
  for (const auto& l : levels) total += l.size();
  require(total > 0, ErrorKind::invalid_argument, "the zero functional has no tree");
  if (!levels.empty() && !levels[0].empty()) {
    require(total == 1, ErrorKind::not_found, "a coefficient 1 only occurs in e*_n");
    return CodeTree::singleton(levels[0].min());
  }
  std::vector<std::pair<int, int>> g;
  for (std::size_t j = 1; j < levels.size(); ++j)
    for (int i : levels[j]) g.emplace_back(i, static_cast<int>(j));
  std::sort(g.begin(), g.end());
  for (std::size_t k = 1; k < g.size(); ++k)
    require(g[k - 1].first != g[k].first, ErrorKind::invalid_argument, "level sets must be disjoint");
  detail::TreeSearch search(f);
  auto n = search.composite(g);
  require(n.has_value(), ErrorKind::not_found, "functional is not in the modified norming set of " + f.describe());
  return to_code_tree(*n);
}

inline CodeTree tree_of_functional(const Functional<Rational>& fn, const Family& f, const Rational& theta) {
  return tree_of_levels(level_form(fn, theta), f);
}

// ---------------------------------------------------------------------------
// reductions

inline CodeTree truncate(const CodeTree& t) {
  std::size_t l = t.length();
  require(l >= 2, ErrorKind::precondition, "truncate needs a tree of length at least 2");
  std::set<Seq> out;
  for (const auto& s : t.nodes())
    if (s.size() <= l - 1) out.insert(s);
  return CodeTree(std::move(out), t.kind());
}

inline std::vector<CodeTree> branch_split(const CodeTree& t) {
  require(t.length() >= 2, ErrorKind::precondition, "branch_split needs a tree of length at least 2");
  std::vector<CodeTree> out;
  for (const auto& c : to_tree_node(t).children) out.push_back(to_code_tree(c, t.kind()));
  return out;
}

// Tree whose psi is psi(t) restricted to n; empty when nothing survives.
inline CodeTree projection_tree(const CodeTree& t, const FinSet& n) {
  if (t.empty()) return t;
  std::function<std::optional<TreeNode>(const TreeNode&)> go = [&](const TreeNode& x) -> std::optional<TreeNode> {
    if (x.leaf()) return n.contains(x.label) ? std::optional<TreeNode>(x) : std::nullopt;
    TreeNode y{x.label, {}};
    for (const auto& c : x.children)
      if (auto z = go(c)) y.children.push_back(std::move(*z));
    if (y.children.empty()) return std::nullopt;
    return y;
  };
  auto r = go(to_tree_node(t));
  if (!r) return CodeTree({}, t.kind());
  detail::relabel(*r);
  return to_code_tree(*r, t.kind());
}

// ---------------------------------------------------------------------------
// allowable sequences

// (A_1, ..., A_l): sum theta^j 1*_{A_j} lies in the modified norming set.
struct AllowableSeq {
  std::vector<FinSet> blocks;

  std::vector<FinSet> levels() const {
    std::vector<FinSet> l{FinSet{}};
    l.insert(l.end(), blocks.begin(), blocks.end());
    return l;
  }
};

inline bool is_allowable_seq(const AllowableSeq& a, const Family& f) {
  if (a.blocks.empty() || a.blocks.back().empty()) return false;
  for (std::size_t i = 0; i < a.blocks.size(); ++i)
    for (std::size_t j = i + 1; j < a.blocks.size(); ++j)
      if (!disjoint(a.blocks[i], a.blocks[j])) return false;
  try {
    tree_of_levels(a.levels(), f);
    return true;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::not_found) return false;
    throw;
  }
}

inline AllowableSeq spread_tail(const AllowableSeq& a, const FinSet& a_new, const Family& f) {
  require(is_allowable_seq(a, f), ErrorKind::precondition, "input is not an allowable sequence for " + f.describe());
  require(a.blocks.back().has_spread(a_new), ErrorKind::precondition,
          a_new.to_string() + " is not a spread of " + a.blocks.back().to_string());
  for (std::size_t j = 0; j + 1 < a.blocks.size(); ++j)
    require(disjoint(a.blocks[j], a_new), ErrorKind::precondition,
            a_new.to_string() + " meets block " + std::to_string(j + 1));
  AllowableSeq out = a;
  out.blocks.back() = a_new;
  require(is_allowable_seq(out, f), ErrorKind::internal, "spread sequence failed certification");
  return out;
}

// Interleave singletons with consecutive blocks, cutting each block at the singletons.
inline std::vector<FinSet> interleave(const FinSet& singles, const std::vector<FinSet>& blocks, std::size_t s,
                                      const Family& f) {
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    require(!blocks[j].empty(), ErrorKind::precondition, "blocks must be nonempty");
    require(disjoint(blocks[j], singles), ErrorKind::precondition, "singles meet block " + blocks[j].to_string());
    if (j) require(precedes(blocks[j - 1], blocks[j]), ErrorKind::precondition, "blocks are not consecutive");
  }
  FinSet roots = set_union(singles, minima(blocks));
  require(fits_consecutive(f, roots, s), ErrorKind::precondition,
          roots.to_string() + " is not a union of " + std::to_string(s) + " consecutive members of " + f.describe());
  std::vector<FinSet> out;
  for (int a : singles) out.push_back(FinSet{a});
  for (const auto& b : blocks) {
    long long lo = 0;
    for (std::size_t i = 0; i <= singles.size(); ++i) {
      long long hi = i < singles.size() ? singles[i] : static_cast<long long>(INT32_MAX) + 1;
      FinSet piece = restrict_range(b, lo + 1, hi);
      if (!piece.empty()) out.push_back(std::move(piece));
      lo = hi;
    }
  }
  std::sort(out.begin(), out.end(), [](const FinSet& x, const FinSet& y) { return x.min() < y.min(); });
  for (std::size_t i = 1; i < out.size(); ++i)
    require(precedes(out[i - 1], out[i]), ErrorKind::internal, "interleaved sets are not consecutive");
  require(out.size() <= blocks.size() + 2 * singles.size(), ErrorKind::internal, "too many interleaved sets");
  auto comp = compose(std::shared_ptr<const Family>(&f, [](const Family*) {}), cardinality(2));
  require(fits_consecutive(*comp, minima(out), s), ErrorKind::internal, "interleaved minima leave the family");
  return out;
}

// ---------------------------------------------------------------------------
// allowable trees -> admissible trees over F[A_2]

struct ConversionResult {
  std::vector<CodeTree> trees;          // F[A_2]-admissible, supports increasing
  std::vector<FinSet> input_blocks;     // B_1 < ... < B_s' decomposing the input roots in F
  std::vector<FinSet> output_blocks;    // B'_1 < ... < B'_s' decomposing the output roots in F[A_2]
};

namespace detail {

class Converter {
 public:
  Converter(const SchreierFamily& f) : f_(f), sys_(f.system()), xi_(f.order()) {}

  // trees with disjoint supports, blocks decompose their roots into consecutive members of F
  std::pair<std::vector<TreeNode>, std::vector<FinSet>> run(std::vector<TreeNode> ts, const std::vector<FinSet>& e) {
    std::sort(ts.begin(), ts.end(), [](const TreeNode& a, const TreeNode& b) { return a.label < b.label; });
    bool all_leaves = std::all_of(ts.begin(), ts.end(), [](const TreeNode& t) { return t.leaf(); });
    if (all_leaves) return {ts, e};

    std::vector<TreeNode> singles_t, big;
    for (auto& t : ts) (t.leaf() ? singles_t : big).push_back(t);

    // children of the non-singletons, regrouped consecutively
    std::vector<FinSet> labels;
    std::vector<TreeNode> sub;
    for (const auto& t : big) {
      std::vector<int> c;
      for (const auto& ch : t.children) {
        c.push_back(ch.label);
        sub.push_back(ch);
      }
      labels.push_back(FinSet::from_sorted(c));
    }
    std::vector<FinSet> b = rearrange(sys_, xi_, labels);
    auto [tilde, b_out] = run(sub, b);

    // glue: one tree per B'_n
    std::vector<TreeNode> hat_big;
    for (const auto& bn : b_out) {
      TreeNode n{bn.min(), {}};
      for (const auto& t : tilde)
        if (bn.contains(t.label)) n.children.push_back(t);
      hat_big.push_back(std::move(n));
    }

    // interleave the singletons
    FinSet singles;
    for (const auto& t : singles_t) singles = singles.with(t.label);
    std::vector<FinSet> supports;
    for (const auto& t : hat_big) supports.push_back(support_of(t));
    std::vector<TreeNode> out;
    {
      std::vector<std::pair<FinSet, const TreeNode*>> pieces;
      for (int a : singles) pieces.push_back({FinSet{a}, nullptr});
      for (std::size_t q = 0; q < hat_big.size(); ++q) {
        long long lo = 0;
        for (std::size_t i = 0; i <= singles.size(); ++i) {
          long long hi = i < singles.size() ? singles[i] : static_cast<long long>(INT32_MAX) + 1;
          FinSet piece = restrict_range(supports[q], lo + 1, hi);
          if (!piece.empty()) pieces.push_back({std::move(piece), &hat_big[q]});
          lo = hi;
        }
      }
      std::sort(pieces.begin(), pieces.end(), [](const auto& x, const auto& y) { return x.first.min() < y.first.min(); });
      for (const auto& [d, src] : pieces) {
        if (!src) {
          out.push_back({d.min(), {}});
          continue;
        }
        auto p = project(*src, d);
        require(p.has_value(), ErrorKind::internal, "empty projection");
        out.push_back(std::move(*p));
      }
    }

    // E'': cut the new roots at the minima of the spread input blocks
    std::vector<int> hat_roots;
    for (int a : singles) hat_roots.push_back(a);
    for (const auto& t : hat_big) hat_roots.push_back(t.label);
    std::sort(hat_roots.begin(), hat_roots.end());
    std::vector<int> cut;
    std::size_t pos = 0;
    for (const auto& blk : e) {
      if (blk.empty()) continue;
      cut.push_back(hat_roots[pos]);
      pos += blk.size();
    }
    require(pos == hat_roots.size(), ErrorKind::internal, "input blocks do not cover the roots");
    std::vector<FinSet> e2(cut.size());
    for (const auto& t : out) {
      auto it = std::upper_bound(cut.begin(), cut.end(), t.label);
      require(it != cut.begin(), ErrorKind::internal, "new root below the first block");
      e2[static_cast<std::size_t>(it - cut.begin() - 1)].push_back_unchecked(t.label);
    }
    return {out, e2};
  }

  static FinSet support_of(const TreeNode& t) {
    std::vector<int> out;
    std::function<void(const TreeNode&)> go = [&](const TreeNode& x) {
      if (x.leaf()) out.push_back(x.label);
      for (const auto& c : x.children) go(c);
    };
    go(t);
    return FinSet::from_unsorted(std::move(out));
  }

 private:
  const SchreierFamily& f_;
  const SchreierSystem& sys_;
  Ordinal xi_;

  static std::optional<TreeNode> project(const TreeNode& x, const FinSet& n) {
    if (x.leaf()) return n.contains(x.label) ? std::optional<TreeNode>(x) : std::nullopt;
    TreeNode y{x.label, {}};
    for (const auto& c : x.children)
      if (auto z = project(c, n)) y.children.push_back(std::move(*z));
    if (y.children.empty()) return std::nullopt;
    relabel(y);
    return y;
  }
};

}  // namespace detail

inline ConversionResult allowable_to_admissible(const std::vector<CodeTree>& ts, std::size_t s, const FamilyHandle& f) {
  const SchreierFamily* sf = as_schreier(f);
  require(sf != nullptr && !sf->modified(), ErrorKind::precondition,
          "the conversion needs a Schreier family S(xi), got " + f->describe());
  require(!ts.empty(), ErrorKind::precondition, "need at least one tree");
  std::vector<TreeNode> nodes;
  std::vector<int> roots;
  FinSet seen;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    auto v = validate(ts[i].as(TreeKind::allowable), *f);
    require(v.ok(), ErrorKind::precondition, "tree " + std::to_string(i + 1) + " is not allowable: " + v.to_string());
    FinSet supp = ts[i].support();
    require(disjoint(seen, supp), ErrorKind::precondition, "tree supports are not pairwise disjoint");
    seen = set_union(seen, supp);
    nodes.push_back(to_tree_node(ts[i]));
    roots.push_back(ts[i].root());
  }
  FinSet rs = FinSet::from_unsorted(roots);
  auto e = greedy_consecutive_blocks(*f, rs);
  require(e && e->size() <= s, ErrorKind::precondition,
          "roots " + rs.to_string() + " are not a union of " + std::to_string(s) + " consecutive members of " +
              f->describe());
  detail::Converter conv(*sf);
  auto [out, blocks] = conv.run(nodes, *e);
  ConversionResult r;
  for (const auto& n : out) r.trees.push_back(to_code_tree(n, TreeKind::admissible));
  r.input_blocks = *e;
  r.output_blocks = blocks;
  return r;
}

// Increasing supports, equal psi sums, the tree count bound and the root blocks,
// plus admissibility of every output tree. Returns the failures, empty when all hold.
inline std::vector<std::string> check_conversion(const std::vector<CodeTree>& in, const ConversionResult& r,
                                                 const FamilyHandle& f, const Rational& theta) {
  std::vector<std::string> bad;
  auto fa2 = compose(f, cardinality(2));
  for (std::size_t i = 0; i < r.trees.size(); ++i) {
    auto v = validate(r.trees[i].as(TreeKind::admissible), *fa2);
    if (!v.ok()) bad.push_back("tree " + std::to_string(i + 1) + " not admissible: " + v.to_string());
  }
  for (std::size_t i = 1; i < r.trees.size(); ++i)
    if (!precedes(r.trees[i - 1].support(), r.trees[i].support())) bad.push_back("supports not increasing");
  std::map<int, Rational> lhs, rhs;
  for (const auto& t : in)
    for (const auto& [i, c] : psi(t, theta).entries) lhs[i] += c;
  for (const auto& t : r.trees)
    for (const auto& [i, c] : psi(t, theta).entries) rhs[i] += c;
  if (lhs != rhs) bad.push_back("psi sums differ");
  std::size_t k = 0;
  for (const auto& t : in) k += t.length() == 1;
  if (r.trees.size() > in.size() + k) bad.push_back("too many trees");
  std::vector<int> roots;
  for (const auto& t : r.trees) roots.push_back(t.root());
  FinSet rs = FinSet::from_unsorted(roots);
  if (union_all(r.output_blocks) != rs) bad.push_back("blocks do not cover the new roots");
  if (r.output_blocks.size() != r.input_blocks.size()) bad.push_back("block count changed");
  for (std::size_t i = 0; i < r.output_blocks.size(); ++i) {
    const FinSet& b = r.output_blocks[i];
    if (b.empty() || !fa2->contains(b)) {
      bad.push_back("block " + b.to_string() + " not in " + fa2->describe());
      continue;
    }
    if (i < r.input_blocks.size() && b.min() < r.input_blocks[i].min()) bad.push_back("block minimum dropped");
    if (i && !precedes(r.output_blocks[i - 1], b)) bad.push_back("blocks not consecutive");
  }
  return bad;
}

// A norm witness certified through its coding tree.
inline ValidationReport certify_witness(const NormResult<Rational>& r, const Family& f, const Rational& theta) {
  ValidationReport rep;
  if (r.value == 0) return rep;
  TreeKind kind = r.mode == NormMode::admissible ? TreeKind::admissible : TreeKind::allowable;
  CodeTree t = code_tree_of_witness(r.structure, kind);
  rep = validate(t, f);
  auto p = psi(t, theta);
  std::map<int, Rational> mag;
  for (const auto& [i, c] : r.witness.entries) mag[i] = abs(c);
  if (p.entries != mag) rep.violations.push_back({"psi", "coding tree does not reproduce the witness"});
  return rep;
}

}  // namespace schreier
