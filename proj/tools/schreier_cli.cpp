// schreier: command line front end.
// exit codes: 0 ok, 1 check failed or precondition error, 2 usage

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "schreier/schreier.hpp"

using namespace schreier;

namespace {

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json parse_json_arg(const std::string& text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Usage(std::string("--") + what + ": not valid JSON: " + e.what());
  }
}

Ordinal parse_xi(const std::string& s) {
  if (!s.empty() && s.front() == '{') return ordinal_from_json(parse_json_arg(s, "xi"));
  return parse_ordinal(s);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Usage("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schreier families, analysis trees and Tsirelson-type norms"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string config_path, xi_text = "1", theta_text = "1/2", family_text, set_text, parts_text, vec_text,
                           trees_text, dot_path, eps_text, mode = "adm", kind = "allowable";
  int horizon = -1, max_element = 10, from = 2, max_n = 0;
  std::size_t s_blocks = 0;
  bool witness = false, float_mode = false, timings = false;
  RunConfig cfg;
  int seed = 1, samples = -1, max_support = -1, threads = 1;

  auto common = [&](CLI::App* c) {
    c->add_option("--config", config_path, "JSON file whose keys override the flags");
    c->add_option("--horizon", horizon, "approximating-sequence horizon (default $SCHREIER_HORIZON or 12)");
  };

  // family
  auto* fam = app.add_subcommand("family", "membership queries");
  fam->require_subcommand(1);
  for (const char* name : {"contains", "maximal", "enumerate", "decompose", "extend"}) {
    auto* c = fam->add_subcommand(name);
    c->add_option("--family", family_text, "descriptor: S(xi) SM(xi) A(n) comp(F,G) pow(F,s,consec|disj)")->required();
    if (std::string(name) == "enumerate")
      c->add_option("--max", max_element, "largest element");
    else
      c->add_option("--set", set_text, "JSON array")->required();
    common(c);
  }

  auto* analyze = app.add_subcommand("analyze", "analysis tree of a maximal set");
  analyze->add_option("--xi", xi_text)->required();
  analyze->add_option("--set", set_text)->required();
  analyze->add_option("--dot", dot_path, "write DOT here ('-' for stdout)");
  common(analyze);

  auto* rearr = app.add_subcommand("rearrange", "disjoint members into consecutive ones");
  rearr->add_option("--xi", xi_text)->required();
  rearr->add_option("--parts", parts_text, "JSON array of sets")->required();
  common(rearr);

  auto* nrm = app.add_subcommand("norm", "implicit norm of a finitely supported vector");
  nrm->add_option("--family", family_text)->required();
  nrm->add_option("--theta", theta_text);
  nrm->add_option("--vec", vec_text, "JSON object {\"index\":\"p/q\"}")->required();
  nrm->add_option("--mode", mode)->check(CLI::IsMember({"adm", "allow"}));
  nrm->add_flag("--witness", witness, "print the norming functional");
  nrm->add_flag("--float", float_mode, "double arithmetic");
  common(nrm);

  auto* eq = app.add_subcommand("equiv", "standard <= modified <= auxiliary <= 3 standard");
  eq->add_option("--xi", xi_text)->required();
  eq->add_option("--theta", theta_text);
  eq->add_option("--vec", vec_text)->required();
  common(eq);

  auto* flat = app.add_subcommand("flatavg", "search convex weights of small norm");
  flat->add_option("--family", family_text)->required();
  flat->add_option("--theta", theta_text);
  flat->add_option("--from", from, "left end m");
  flat->add_option("--eps", eps_text)->required();
  flat->add_option("--max-n", max_n, "largest right end tried");
  common(flat);

  auto* tree = app.add_subcommand("tree", "code trees");
  tree->require_subcommand(1);
  const std::pair<const char*, const char*> tree_cmds[] = {
      {"validate", "check conditions T1-T5"},
      {"psi", "functional coded by each tree"},
      {"convert", "allowable tree family to admissible trees over F[A(2)]"},
      {"invert", "code tree of a nonnegative functional"}};
  for (auto [name, help] : tree_cmds) {
    auto* c = tree->add_subcommand(name, help);
    c->add_option("--family", family_text)->required();
    c->add_option("--theta", theta_text);
    if (std::string(name) == "invert") {
      c->add_option("--vec", vec_text, "nonnegative functional")->required();
    } else {
      c->add_option("--trees", trees_text, "JSON tree or array of trees")->required();
    }
    if (std::string(name) == "validate") c->add_option("--kind", kind)->check(CLI::IsMember({"allowable", "admissible"}));
    if (std::string(name) == "convert") c->add_option("--s", s_blocks, "number of root blocks (default: least)");
    common(c);
  }

  auto* suite = app.add_subcommand("suite", "batch verification");
  std::string suite_name;
  suite->add_option("name", suite_name)
      ->required()
      ->check(CLI::IsMember(
          {"verify-schreier", "verify-modified-eq", "verify-norm-equivalence", "verify-trees", "verify-inclusions"}));
  suite->add_option("--xi", xi_text);
  suite->add_option("--theta", theta_text);
  suite->add_option("--seed", seed);
  suite->add_option("--samples", samples);
  suite->add_option("--max-element", max_element);
  suite->add_option("--max-support", max_support);
  suite->add_option("--threads", threads, "0 = all cores");
  suite->add_flag("--float", float_mode);
  suite->add_flag("--timings", timings, "add wall time to the report");
  common(suite);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cfg.horizon = horizon >= 1 ? horizon : default_horizon();
    if (horizon == 0 || horizon < -1) throw Usage("--horizon must be >= 1");
    cfg.xi = parse_xi(xi_text);
    cfg.theta = parse_rational(theta_text);
    cfg.seed = static_cast<std::uint64_t>(seed);
    if (samples > 0) cfg.samples = samples;
    cfg.max_element = max_element;
    if (max_support > 0) cfg.max_support = max_support;
    cfg.threads = threads;
    cfg.timings = timings;
    if (float_mode) cfg.arithmetic = Arithmetic::floating;
    if (!config_path.empty()) apply_config_json(cfg, parse_json_arg(read_file(config_path), "config"));
    validate_config(cfg);

    auto sys = SchreierSystem::create(cfg.system());
    auto family = [&] { return parse_family(*sys, family_text); };
    auto set = [&] { return finset_from_json(parse_json_arg(set_text, "set")); };

    if (fam->parsed()) {
      auto f = family();
      if (fam->got_subcommand("contains")) {
        std::cout << (f->contains(set()) ? "true" : "false") << "\n";
      } else if (fam->got_subcommand("maximal")) {
        std::cout << (is_maximal(*f, set()) ? "true" : "false") << "\n";
      } else if (fam->got_subcommand("enumerate")) {
        emit(sets_to_json(enumerate(*f, max_element)));
      } else if (fam->got_subcommand("extend")) {
        emit(finset_to_json(extend_to_maximal(*f, set())));
      } else {
        const SchreierFamily* sf = as_schreier(f);
        if (!sf || sf->modified()) throw Usage("decompose needs --family S(xi)");
        emit(sets_to_json(decompose_maximal(*sys, sf->order(), set())));
      }
      return 0;
    }
    if (analyze->parsed()) {
      AnalysisTree t = analysis_tree(*sys, cfg.xi, set());
      if (dot_path == "-") {
        std::cout << t.to_dot();
        return 0;
      }
      if (!dot_path.empty()) {
        std::ofstream out(dot_path);
        if (!out) throw Usage("cannot write " + dot_path);
        out << t.to_dot();
      }
      emit(analysis_to_json(t));
      return 0;
    }
    if (rearr->parsed()) {
      emit(sets_to_json(rearrange(*sys, cfg.xi, sets_from_json(parse_json_arg(parts_text, "parts")))));
      return 0;
    }
    if (nrm->parsed()) {
      auto f = family();
      auto x = vector_from_json(parse_json_arg(vec_text, "vec"));
      NormMode m = mode == "adm" ? NormMode::admissible : NormMode::allowable;
      if (float_mode) {
        SparseVector<double> xd;
        for (const auto& [i, c] : x) xd[i] = c.get_d();
        auto r = norm<double>(*f, cfg.theta.get_d(), xd, m, cfg.caps);
        std::cout << ScalarTraits<double>::to_string(r.value) << "\n";
        return 0;
      }
      auto r = norm<Rational>(*f, cfg.theta, x, m, cfg.caps);
      if (witness)
        emit(norm_to_json(r, true));
      else
        std::cout << format_rational(r.value) << "\n";
      return 0;
    }
    if (eq->parsed()) {
      auto x = vector_from_json(parse_json_arg(vec_text, "vec"));
      auto r = check_equivalence<Rational>(*sys, cfg.xi, cfg.theta, x, cfg.caps);
      emit({{"n_std", format_rational(r.n_std)},
            {"n_mod", format_rational(r.n_mod)},
            {"n_aux", format_rational(r.n_aux)},
            {"ratio_mod", format_rational(r.ratio_mod)},
            {"ratio_aux", format_rational(r.ratio_aux)},
            {"holds", r.holds()}});
      return r.holds() ? 0 : 1;
    }
    if (flat->parsed()) {
      FlatAverageBudget b;
      b.max_n = max_n;
      b.support_cap = cfg.caps.admissible_cap;
      auto r = flat_average_search(*family(), cfg.theta, from, parse_rational(eps_text), b);
      if (!r) {
        std::cerr << "not_found: no flat average below eps within the budget\n";
        return 1;
      }
      emit({{"n", r->n}, {"value", format_rational(r->value)}, {"weights", vector_to_json(r->weights)}});
      return 0;
    }
    if (tree->parsed()) {
      auto f = family();
      if (tree->got_subcommand("invert")) {
        Functional<Rational> fn;
        fn.entries = vector_from_json(parse_json_arg(vec_text, "vec"));
        emit(tree_to_json(tree_of_functional(fn, *f, cfg.theta)));
        return 0;
      }
      TreeKind k = kind == "admissible" ? TreeKind::admissible : TreeKind::allowable;
      auto ts = trees_from_json(parse_json_arg(trees_text, "trees"), k);
      if (tree->got_subcommand("validate")) {
        Json out = Json::array();
        bool ok = true;
        for (const auto& t : ts) {
          auto v = validate(t, *f);
          ok = ok && v.ok();
          out.push_back(validation_to_json(v));
        }
        emit(out);
        return ok ? 0 : 1;
      }
      if (tree->got_subcommand("psi")) {
        Json out = Json::array();
        for (const auto& t : ts) {
          auto v = validate(t, *f);
          if (!v.ok()) throw Error(ErrorKind::precondition, "invalid tree: " + v.to_string());
          out.push_back(vector_to_json(psi(t, cfg.theta).entries));
        }
        emit(out);
        return 0;
      }
      std::size_t s = s_blocks;
      if (s == 0) {
        std::vector<int> roots;
        for (const auto& t : ts) roots.push_back(t.root());
        auto g = greedy_consecutive_blocks(*f, FinSet::from_unsorted(roots));
        if (!g) throw Error(ErrorKind::precondition, "roots are not covered by members of " + f->describe());
        s = g->size();
      }
      auto r = allowable_to_admissible(ts, s, f);
      auto bad = check_conversion(ts, r, f, cfg.theta);
      emit({{"trees", trees_to_json(r.trees)},
            {"input_blocks", sets_to_json(r.input_blocks)},
            {"output_blocks", sets_to_json(r.output_blocks)},
            {"checks_failed", bad}});
      return bad.empty() ? 0 : 1;
    }
    if (suite->parsed()) {
      auto rep = run_suite(suite_name, cfg);
      if (cfg.format == OutputFormat::text)
        std::cout << suite_name << ": " << rep.json["passed"] << "/" << rep.json["cases"] << " passed\n";
      else
        emit(rep.json);
      return rep.ok ? 0 : 1;
    }
  } catch (const Usage& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    bool usage = e.kind() == ErrorKind::parse || e.kind() == ErrorKind::invalid_argument;
    return usage ? 2 : 1;
  }
  return 0;
}
