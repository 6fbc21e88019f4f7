#pragma once

// JSON codecs (nlohmann/json). Every encoder has a matching decoder.

#include <json.hpp>

#include <string>
#include <vector>

#include "schreier/analysis.hpp"
#include "schreier/norms.hpp"
#include "schreier/trees.hpp"

namespace schreier {

using Json = nlohmann::ordered_json;

namespace detail {
template <class F>
auto json_guard(const char* what, F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::parse, std::string("bad ") + what + " JSON: " + e.what());
  }
}
}  // namespace detail

// ordinals: {"terms":[{"exp":0|<ordinal>,"coef":n}]}; decoder also takes
// integers and shorthand strings such as "w^2*3+w+5"
inline Json ordinal_to_json(const Ordinal& o) {
  Json terms = Json::array();
  for (const auto& t : o.terms())
    terms.push_back({{"exp", t.exponent.is_zero() ? Json(0) : ordinal_to_json(t.exponent)}, {"coef", t.coefficient}});
  return {{"terms", terms}};
}

inline Ordinal ordinal_from_json(const Json& j) {
  return detail::json_guard("ordinal", [&] {
    if (j.is_string()) return parse_ordinal(j.get<std::string>());
    if (j.is_number_unsigned() || j.is_number_integer()) {
      auto v = j.get<long long>();
      require(v >= 0, ErrorKind::parse, "ordinals are nonnegative");
      return Ordinal::finite(static_cast<std::uint64_t>(v));
    }
    require(j.is_object() && j.contains("terms"), ErrorKind::parse, "ordinal JSON needs a \"terms\" array");
    std::vector<OrdinalTerm> terms;
    for (const auto& t : j.at("terms")) {
      auto c = t.at("coef").get<long long>();
      require(c >= 1, ErrorKind::parse, "ordinal coefficients must be positive");
      terms.push_back({ordinal_from_json(t.at("exp")), static_cast<std::uint64_t>(c)});
    }
    try {
      return Ordinal::from_terms(std::move(terms));
    } catch (const Error& e) {
      fail(ErrorKind::parse, e.what());
    }
  });
}

inline Json finset_to_json(const FinSet& s) { return Json(s.elements()); }

inline FinSet finset_from_json(const Json& j) {
  return detail::json_guard("set", [&] {
    require(j.is_array(), ErrorKind::parse, "a set is a JSON array of positive integers");
    std::vector<int> xs;
    for (const auto& x : j) {
      require(x.is_number_integer(), ErrorKind::parse, "set elements must be integers");
      xs.push_back(x.get<int>());
    }
    std::vector<int> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), ErrorKind::parse, "repeated set element");
    try {
      return FinSet::from_sorted(std::move(sorted));
    } catch (const Error& e) {
      fail(ErrorKind::parse, e.what());
    }
  });
}

inline Json sets_to_json(const std::vector<FinSet>& parts) {
  Json a = Json::array();
  for (const auto& p : parts) a.push_back(finset_to_json(p));
  return a;
}

inline std::vector<FinSet> sets_from_json(const Json& j) {
  require(j.is_array(), ErrorKind::parse, "expected an array of sets");
  std::vector<FinSet> out;
  for (const auto& p : j) out.push_back(finset_from_json(p));
  return out;
}

inline Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  require(j.is_string(), ErrorKind::parse, "rationals are written as strings \"p/q\"");
  return parse_rational(j.get<std::string>());
}

// vectors: {"5":"1","7":"-3/2"}
inline Json vector_to_json(const SparseVector<Rational>& x) {
  Json o = Json::object();
  for (const auto& [i, c] : x) o[std::to_string(i)] = format_rational(c);
  return o;
}

inline SparseVector<Rational> vector_from_json(const Json& j) {
  return detail::json_guard("vector", [&] {
    require(j.is_object(), ErrorKind::parse, "a vector is a JSON object {\"index\":\"p/q\"}");
    SparseVector<Rational> x;
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      require(!k.empty() && std::all_of(k.begin(), k.end(), ::isdigit), ErrorKind::parse,
              "vector index '" + k + "' is not a positive integer");
      int i = std::stoi(k);
      require(i >= 1, ErrorKind::parse, "vector indices start at 1");
      x[i] = rational_from_json(it.value());
    }
    return x;
  });
}

// trees: array of integer arrays
inline Json tree_to_json(const CodeTree& t) {
  Json a = Json::array();
  for (const auto& s : t.nodes()) a.push_back(s);
  return a;
}

inline CodeTree tree_from_json(const Json& j, TreeKind kind = TreeKind::allowable) {
  return detail::json_guard("tree", [&] {
    require(j.is_array(), ErrorKind::parse, "a tree is an array of integer arrays");
    std::vector<Seq> nodes;
    for (const auto& s : j) nodes.push_back(s.get<Seq>());
    try {
      return CodeTree::from_nodes(nodes, kind);
    } catch (const Error& e) {
      fail(ErrorKind::parse, e.what());
    }
  });
}

inline std::vector<CodeTree> trees_from_json(const Json& j, TreeKind kind = TreeKind::allowable) {
  require(j.is_array(), ErrorKind::parse, "expected an array of trees");
  // a single tree is also accepted
  if (!j.empty() && j.front().is_array() && !j.front().empty() && j.front().front().is_number())
    return {tree_from_json(j, kind)};
  std::vector<CodeTree> out;
  for (const auto& t : j) out.push_back(tree_from_json(t, kind));
  return out;
}

inline Json trees_to_json(const std::vector<CodeTree>& ts) {
  Json a = Json::array();
  for (const auto& t : ts) a.push_back(tree_to_json(t));
  return a;
}

inline Json analysis_to_json(const AnalysisTree& t) {
  Json nodes = Json::array();
  for (const auto& n : t.nodes())
    nodes.push_back({{"set", finset_to_json(n.set)}, {"order", n.order.to_string()}, {"parent", n.parent}});
  return {{"xi", t.xi().to_string()}, {"nodes", nodes}};
}

inline AnalysisTree analysis_from_json(const Json& j) {
  return detail::json_guard("analysis tree", [&] {
    std::vector<AnalysisNode> nodes;
    for (const auto& n : j.at("nodes")) {
      AnalysisNode a;
      a.set = finset_from_json(n.at("set"));
      a.order = ordinal_from_json(n.at("order"));
      a.parent = n.at("parent").get<int>();
      nodes.push_back(std::move(a));
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      int p = nodes[i].parent;
      require(p < static_cast<int>(i) && (p >= 0 || i == 0), ErrorKind::parse, "parent indices must precede children");
      if (p >= 0) nodes[static_cast<std::size_t>(p)].children.push_back(static_cast<int>(i));
    }
    return AnalysisTree(ordinal_from_json(j.at("xi")), std::move(nodes));
  });
}

inline Json witness_to_json(const WitnessNode& w) {
  if (w.leaf()) return {{"index", w.index}, {"sign", w.sign}};
  Json c = Json::array();
  for (const auto& x : w.children) c.push_back(witness_to_json(x));
  return {{"children", c}};
}

inline Json functional_to_json(const Functional<Rational>& f) {
  Json levels = Json::array();
  for (const auto& l : f.levels) levels.push_back(finset_to_json(l));
  return {{"entries", vector_to_json(f.entries)}, {"levels", levels}};
}

inline Json norm_to_json(const NormResult<Rational>& r, bool witness) {
  Json o = {{"value", format_rational(r.value)}, {"mode", to_string(r.mode)}};
  if (witness) {
    o["witness"] = functional_to_json(r.witness);
    o["structure"] = witness_to_json(r.structure);
  }
  o["stats"] = {{"nodes", r.stats.nodes},
                {"prunes", r.stats.prunes},
                {"memo_entries", r.stats.memo_entries},
                {"depth", r.stats.depth}};
  return o;
}

inline Json validation_to_json(const ValidationReport& v) {
  Json a = Json::array();
  for (const auto& x : v.violations) a.push_back({{"condition", x.condition}, {"detail", x.detail}});
  return {{"ok", v.ok()}, {"violations", a}};
}

}  // namespace schreier
