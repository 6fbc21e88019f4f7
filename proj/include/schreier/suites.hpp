#pragma once

// Batch verification suites with seeded inputs and JSON reports.

#include <chrono>
#include <cstdlib>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "schreier/json.hpp"
#include "schreier/random.hpp"

namespace schreier {

enum class Arithmetic { exact, floating };
enum class OutputFormat { json, text, dot };

struct RunConfig {
  Ordinal xi = Ordinal::finite(1);
  Rational theta = Rational(1, 2);
  int horizon = 12;
  std::map<Ordinal, std::vector<int>> offset_overrides;
  Arithmetic arithmetic = Arithmetic::exact;
  double tolerance = 1e-9;
  NormLimits caps;
  OutputFormat format = OutputFormat::json;

  std::uint64_t seed = 1;
  int samples = 200;
  int max_element = 10;
  int max_support = 10;
  int max_index = 16;
  int threads = 1;
  bool timings = false;

  SystemConfig system() const {
    SystemConfig s;
    s.horizon = horizon;
    s.offset_overrides = offset_overrides;
    return s;
  }
};

inline void validate_config(const RunConfig& c) {
  require(c.theta > 0 && c.theta < 1, ErrorKind::invalid_argument, "theta must lie strictly between 0 and 1");
  require(c.horizon >= 1, ErrorKind::invalid_argument, "horizon must be >= 1");
  require(c.caps.admissible_cap >= 1 && c.caps.allowable_cap >= 1, ErrorKind::invalid_argument, "caps must be >= 1");
  require(c.samples >= 1 && c.max_element >= 1 && c.max_support >= 1 && c.max_index >= 1, ErrorKind::invalid_argument,
          "sample counts and bounds must be >= 1");
  require(c.tolerance > 0, ErrorKind::invalid_argument, "tolerance must be positive");
  require(c.threads >= 0, ErrorKind::invalid_argument, "threads must be >= 0");
  for (const auto& [o, v] : c.offset_overrides)
    require(o.is_limit(), ErrorKind::invalid_argument, "offset overrides are keyed by limit ordinals");
}

inline const char* to_string(Arithmetic a) { return a == Arithmetic::exact ? "exact" : "float"; }
inline const char* to_string(OutputFormat f) {
  return f == OutputFormat::json ? "json" : f == OutputFormat::text ? "text" : "dot";
}

inline Json config_to_json(const RunConfig& c) {
  Json ov = Json::object();
  for (const auto& [o, v] : c.offset_overrides) ov[o.to_string()] = v;
  return {{"xi", c.xi.to_string()},
          {"theta", format_rational(c.theta)},
          {"horizon", c.horizon},
          {"offset_overrides", ov},
          {"arithmetic", to_string(c.arithmetic)},
          {"tolerance", c.tolerance},
          {"admissible_cap", c.caps.admissible_cap},
          {"allowable_cap", c.caps.allowable_cap},
          {"format", to_string(c.format)},
          {"seed", c.seed},
          {"samples", c.samples},
          {"max_element", c.max_element},
          {"max_support", c.max_support},
          {"max_index", c.max_index},
          {"threads", c.threads},
          {"timings", c.timings}};
}

// Keys present in j override c.
inline void apply_config_json(RunConfig& c, const Json& j) {
  detail::json_guard("config", [&] {
    require(j.is_object(), ErrorKind::parse, "config must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      const Json& v = it.value();
      if (k == "xi") c.xi = ordinal_from_json(v);
      else if (k == "theta") c.theta = rational_from_json(v);
      else if (k == "horizon") c.horizon = v.get<int>();
      else if (k == "offset_overrides") {
        c.offset_overrides.clear();
        for (auto o = v.begin(); o != v.end(); ++o) c.offset_overrides[parse_ordinal(o.key())] = o.value().get<std::vector<int>>();
      } else if (k == "arithmetic") {
        auto s = v.get<std::string>();
        require(s == "exact" || s == "float", ErrorKind::parse, "arithmetic is exact or float");
        c.arithmetic = s == "exact" ? Arithmetic::exact : Arithmetic::floating;
      } else if (k == "tolerance") c.tolerance = v.get<double>();
      else if (k == "admissible_cap") c.caps.admissible_cap = v.get<std::size_t>();
      else if (k == "allowable_cap") c.caps.allowable_cap = v.get<std::size_t>();
      else if (k == "format") {
        auto s = v.get<std::string>();
        require(s == "json" || s == "text" || s == "dot", ErrorKind::parse, "format is json, text or dot");
        c.format = s == "json" ? OutputFormat::json : s == "text" ? OutputFormat::text : OutputFormat::dot;
      } else if (k == "seed") c.seed = v.get<std::uint64_t>();
      else if (k == "samples") c.samples = v.get<int>();
      else if (k == "max_element") c.max_element = v.get<int>();
      else if (k == "max_support") c.max_support = v.get<int>();
      else if (k == "max_index") c.max_index = v.get<int>();
      else if (k == "threads") c.threads = v.get<int>();
      else if (k == "timings") c.timings = v.get<bool>();
      else fail(ErrorKind::parse, "unknown config key '" + k + "'");
    }
    return 0;
  });
}

// Default horizon from SCHREIER_HORIZON when set.
inline int default_horizon() {
  if (const char* h = std::getenv("SCHREIER_HORIZON")) {
    try {
      return std::stoi(h);
    } catch (...) {
      fail(ErrorKind::invalid_argument, std::string("SCHREIER_HORIZON is not an integer: ") + h);
    }
  }
  return 12;
}

struct SuiteReport {
  bool ok = false;
  Json json;
};

namespace detail {

struct CaseResult {
  bool ok = true;
  Json counterexample;
};

// Runs fn(i) for i < n on `threads` workers; results land by index.
template <class Fn>
std::vector<CaseResult> run_cases(std::size_t n, int threads, Fn fn) {
  std::vector<CaseResult> out(n);
  unsigned t = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
  t = static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(n, 1)));
  auto work = [&](unsigned w) {
    for (std::size_t i = w; i < n; i += t) {
      try {
        out[i] = fn(i);
      } catch (const Error& e) {
        out[i] = {false, {{"case", i}, {"error", e.what()}}};
      }
    }
  };
  if (t <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < t; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  return out;
}

}  // namespace detail

inline SuiteReport run_suite(const std::string& name, const RunConfig& cfg) {
  validate_config(cfg);
  auto start = std::chrono::steady_clock::now();
  auto sys = SchreierSystem::create(cfg.system());
  std::vector<detail::CaseResult> cases;

  if (name == "verify-schreier") {
    // hereditary and spreading closure, the {1} rule, S_1 inside S_xi, and
    // analysis-tree invariants on random maximal sets
    const SchreierFamily& f = sys->schreier_ref(cfg.xi);
    const SchreierFamily& s1 = sys->schreier_ref(Ordinal::finite(1));
    auto members = enumerate(f, cfg.max_element);
    cases = detail::run_cases(members.size(), cfg.threads, [&](std::size_t i) {
      const FinSet& a = members[i];
      detail::CaseResult r;
      auto bad = [&](const std::string& why, const FinSet& b) {
        r.ok = false;
        r.counterexample = {{"set", finset_to_json(a)}, {"check", why}, {"witness", finset_to_json(b)}};
      };
      for (std::size_t k = 0; k < a.size() && r.ok; ++k) {
        std::vector<int> v = a.elements();
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(k));
        FinSet b = FinSet::from_sorted(v);
        if (!f.contains(b)) bad("hereditary", b);
        std::vector<int> w = a.elements();
        ++w[k];
        if (r.ok && (k + 1 == w.size() || w[k] < w[k + 1]) && !f.contains(FinSet::from_sorted(w)))
          bad("spreading", FinSet::from_sorted(w));
      }
      if (r.ok && a.contains(1) && a.size() > 1 && !cfg.xi.is_zero()) bad("{1} rule", a);
      return r;
    });
    auto s1_members = enumerate(s1, cfg.max_element);
    for (const auto& a : s1_members)
      if (!cfg.xi.is_zero() && !f.contains(a))
        cases.push_back({false, {{"set", finset_to_json(a)}, {"check", "S(1) inclusion"}}});
    if (!cfg.xi.is_zero()) {
      auto trees = detail::run_cases(static_cast<std::size_t>(cfg.samples), cfg.threads, [&](std::size_t i) {
        auto rng = rnd::case_rng(cfg.seed, i);
        int lo = rnd::pick(rng, 2, 6);
        FinSet seed{lo};
        for (int x = lo + 1, extra = rnd::pick(rng, 0, 3); extra > 0 && x <= lo + 12; ++x) {
          if (rnd::pick(rng, 0, 2) != 0) continue;
          FinSet grown = seed.with(x);
          if (f.contains(grown)) {
            seed = grown;
            --extra;
          }
        }
        FinSet m = extend_to_maximal(f, seed);
        AnalysisTree t = analysis_tree(*sys, cfg.xi, m);
        detail::CaseResult r;
        auto bad = [&](const std::string& why) {
          r.ok = false;
          r.counterexample = {{"set", finset_to_json(m)}, {"check", why}};
        };
        std::size_t leaves = 0;
        for (const auto& n : t.nodes()) {
          if (n.children.empty()) {
            ++leaves;
            if (n.set.size() != 1) bad("leaves are singletons");
            continue;
          }
          std::vector<FinSet> kids;
          for (int c : n.children) {
            kids.push_back(t.node(c).set);
            if (!(t.node(c).order < n.order)) bad("orders decrease");
          }
          if (union_all(kids) != n.set) bad("node is the union of its children");
          if (!n.order.is_successor() || !is_maximal(sys->schreier_ref(n.order), n.set)) bad("node maximal in its order");
        }
        if (leaves != m.size()) bad("one leaf per element");
        return r;
      });
      cases.insert(cases.end(), trees.begin(), trees.end());
    }
  } else if (name == "verify-modified-eq") {
    auto rep = verify_modified_equals(*sys, cfg.xi, cfg.max_element);
    detail::CaseResult r;
    r.ok = rep.equal();
    if (!r.ok)
      r.counterexample = {{"only_standard", sets_to_json(rep.only_standard)},
                          {"only_modified", sets_to_json(rep.only_modified)}};
    cases.push_back(r);
  } else if (name == "verify-norm-equivalence") {
    auto fam = EquivalenceFamilies::of(*sys, cfg.xi);
    cases = detail::run_cases(static_cast<std::size_t>(cfg.samples), cfg.threads, [&](std::size_t i) {
      auto rng = rnd::case_rng(cfg.seed, i);
      auto x = rnd::vector(rng, cfg.max_support, cfg.max_index);
      detail::CaseResult r;
      if (cfg.arithmetic == Arithmetic::exact) {
        auto e = check_equivalence<Rational>(fam, cfg.theta, x, cfg.caps);
        auto w = norm_admissible<Rational>(*fam.standard, cfg.theta, x, cfg.caps);
        bool cert = certify_witness(w, *fam.standard, cfg.theta).ok() && w.witness.apply(x) == w.value;
        r.ok = e.holds() && cert;
        if (!r.ok)
          r.counterexample = {{"vector", vector_to_json(x)},
                              {"n_std", format_rational(e.n_std)},
                              {"n_mod", format_rational(e.n_mod)},
                              {"n_aux", format_rational(e.n_aux)},
                              {"witness_certified", cert}};
      } else {
        SparseVector<double> xd;
        for (const auto& [k, c] : x) xd[k] = c.get_d();
        double th = cfg.theta.get_d();
        double a = norm_admissible<double>(*fam.standard, th, xd, cfg.caps).value;
        double m = norm_allowable<double>(*fam.standard, th, xd, cfg.caps).value;
        double u = norm_admissible<double>(*fam.auxiliary, th, xd, cfg.caps).value;
        double tol = cfg.tolerance;
        r.ok = a <= m + tol && m <= u + tol && u <= 3 * a + tol;
        if (!r.ok) r.counterexample = {{"vector", vector_to_json(x)}, {"n_std", a}, {"n_mod", m}, {"n_aux", u}};
      }
      return r;
    });
  } else if (name == "verify-trees") {
    FamilyHandle f = sys->schreier(cfg.xi);
    cases = detail::run_cases(static_cast<std::size_t>(cfg.samples), cfg.threads, [&](std::size_t i) {
      auto rng = rnd::case_rng(cfg.seed, i);
      auto fam = rnd::tree_family(rng, *f, 3, cfg.max_support, cfg.max_index);
      const auto& ts = fam.trees;
      std::vector<std::string> bad;
      for (const auto& t : ts) {
        if (!validate(t, *f).ok()) bad.push_back("generated tree invalid");
        if (tree_of_functional(psi(t, cfg.theta), *f, cfg.theta).empty()) bad.push_back("psi not inverted");
        if (t.length() >= 2) {
          if (!validate(truncate(t), *f).ok()) bad.push_back("truncate broke validity");
          auto parts = branch_split(t);
          std::size_t longest = 0;
          for (const auto& p : parts) {
            if (!validate(p, *f).ok()) bad.push_back("branch_split broke validity");
            longest = std::max(longest, p.length());
          }
          if (longest + 1 != t.length()) bad.push_back("branch_split lost the longest branch");
        }
      }
      auto res = allowable_to_admissible(ts, fam.s, f);
      auto more = check_conversion(ts, res, f, cfg.theta);
      bad.insert(bad.end(), more.begin(), more.end());
      detail::CaseResult r;
      r.ok = bad.empty();
      if (!r.ok) r.counterexample = {{"case", i}, {"trees", trees_to_json(ts)}, {"failures", bad}};
      return r;
    });
  } else if (name == "verify-inclusions") {
    auto rep = check_composition_inclusion(*sys, cfg.xi, cfg.max_element);
    detail::CaseResult r;
    r.ok = rep.ok();
    if (!r.ok) r.counterexample = {{"counterexamples", sets_to_json(rep.counterexamples)}};
    cases.push_back(r);
    auto cons = power(sys->schreier(cfg.xi), 2, PowerMode::consecutive);
    auto disj = power(sys->schreier(cfg.xi), 2, PowerMode::disjoint);
    auto eq = check_inclusion(*disj, *cons, cfg.max_element);
    auto sub = check_inclusion(*cons, *disj, cfg.max_element);
    detail::CaseResult p;
    p.ok = eq.ok() && sub.ok();
    if (!p.ok)
      p.counterexample = {{"power_counterexamples", sets_to_json(eq.counterexamples)},
                          {"power_sub_counterexamples", sets_to_json(sub.counterexamples)}};
    cases.push_back(p);
  } else {
    fail(ErrorKind::invalid_argument, "unknown suite '" + name + "'");
  }

  SuiteReport rep;
  std::size_t passed = 0;
  Json ce = Json::array();
  for (const auto& c : cases) {
    if (c.ok)
      ++passed;
    else
      ce.push_back(c.counterexample);
  }
  rep.ok = passed == cases.size();
  rep.json = {{"suite", name},
              {"config", config_to_json(cfg)},
              {"cases", cases.size()},
              {"passed", passed},
              {"failed", cases.size() - passed},
              {"counterexamples", ce},
              {"ok", rep.ok}};
  if (cfg.timings)
    rep.json["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace schreier
