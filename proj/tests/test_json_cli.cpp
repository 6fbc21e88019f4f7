#include <array>
#include <cstdio>
#include <fstream>
#include <sys/wait.h>

#include "common.hpp"

using namespace testing_util;

namespace {

struct Run {
  int code;
  std::string out;
};

Run cli(const std::string& args) {
  std::string cmd = std::string(SCHREIER_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string trim(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s;
}

}  // namespace

TEST(Json, OrdinalRoundTrip) {
  for (const char* s : {"0", "5", "w", "w^2*3+w+5", "w^w+1", "w^(w+2)*2"}) {
    Ordinal o = O(s);
    EXPECT_EQ(ordinal_from_json(ordinal_to_json(o)), o) << s;
    EXPECT_EQ(ordinal_from_json(Json(o.to_string())), o) << s;
  }
  EXPECT_EQ(ordinal_from_json(Json::parse(R"~({"terms":[{"exp":1,"coef":2},{"exp":0,"coef":1}]})~")), O("w*2+1"));
  EXPECT_EQ(ordinal_from_json(Json(7)), O("7"));
  EXPECT_ERROR_KIND(ordinal_from_json(Json::parse(R"~({"terms":[{"exp":0,"coef":1},{"exp":1,"coef":1}]})~")), parse);
  EXPECT_ERROR_KIND(ordinal_from_json(Json(-1)), parse);
}

TEST(Json, SetsVectorsTrees) {
  FinSet a{2, 5, 9};
  EXPECT_EQ(finset_from_json(finset_to_json(a)), a);
  EXPECT_EQ(finset_to_json(a).dump(), "[2,5,9]");
  EXPECT_ERROR_KIND(finset_from_json(Json::parse("[2,2]")), parse);
  EXPECT_ERROR_KIND(finset_from_json(Json::parse("[0]")), parse);
  auto parts = sets({{2, 3}, {4, 5, 6}});
  EXPECT_EQ(sets_from_json(sets_to_json(parts)), parts);

  auto x = V({{5, "1"}, {7, "-3/2"}});
  EXPECT_EQ(vector_to_json(x).dump(), R"~({"5":"1","7":"-3/2"})~");
  EXPECT_EQ(vector_from_json(vector_to_json(x)), x);
  EXPECT_ERROR_KIND(vector_from_json(Json::parse(R"~({"a":"1"})~")), parse);
  EXPECT_ERROR_KIND(vector_from_json(Json::parse(R"~({"0":"1"})~")), parse);

  auto t = CodeTree::from_nodes({{2}, {2, 2}, {2, 4}});
  EXPECT_EQ(tree_to_json(t).dump(), "[[2],[2,2],[2,4]]");
  EXPECT_EQ(tree_from_json(tree_to_json(t)), t);
  auto ts = trees_from_json(Json::parse("[[[2],[2,2],[2,4]],[[5]]]"));
  ASSERT_EQ(ts.size(), 2u);
  EXPECT_EQ(trees_from_json(trees_to_json(ts)).size(), 2u);
  EXPECT_EQ(trees_from_json(Json::parse("[[2],[2,2],[2,4]]")).size(), 1u);
}

TEST(Json, AnalysisRoundTrip) {
  auto sys = make_system();
  auto t = analysis_tree(*sys, O("2"), {2, 3, 4, 5, 6, 7});
  auto j = analysis_to_json(t);
  auto back = analysis_from_json(j);
  EXPECT_EQ(analysis_to_json(back), j);
  EXPECT_EQ(back.to_dot(), t.to_dot());
}

TEST(Json, NormReport) {
  auto sys = make_system();
  auto r = norm_admissible<Rational>(sys->schreier_ref(O("1")), Q("1/2"), V({{3, "1"}, {4, "1"}, {5, "1"}}));
  auto j = norm_to_json(r, true);
  EXPECT_EQ(j["value"], "3/2");
  EXPECT_EQ(vector_from_json(j["witness"]["entries"]), V({{3, "1/2"}, {4, "1/2"}, {5, "1/2"}}));
  EXPECT_FALSE(norm_to_json(r, false).contains("witness"));
}

TEST(Suites, ConfigRoundTrip) {
  RunConfig c;
  c.xi = O("w+1");
  c.theta = Q("1/3");
  c.seed = 99;
  c.offset_overrides[O("w")] = {0, 1};
  RunConfig d;
  apply_config_json(d, config_to_json(c));
  EXPECT_EQ(config_to_json(d), config_to_json(c));
  EXPECT_ERROR_KIND(apply_config_json(d, Json::parse(R"~({"bogus":1})~")), parse);
}

TEST(Suites, ModifiedEqualityPasses) {
  RunConfig c;
  c.xi = O("2");
  c.horizon = 10;
  auto r = run_suite("verify-modified-eq", c);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.json["failed"], 0);
}

TEST(Suites, NormEquivalencePasses) {
  RunConfig c;
  c.samples = 200;
  auto r = run_suite("verify-norm-equivalence", c);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.json["cases"], 200);
}

TEST(Suites, AllSuitesPassSmall) {
  for (const char* name : {"verify-schreier", "verify-trees", "verify-inclusions"}) {
    RunConfig c;
    c.samples = 30;
    c.xi = O("2");
    EXPECT_TRUE(run_suite(name, c).ok) << name;
  }
  RunConfig f;
  f.samples = 30;
  f.arithmetic = Arithmetic::floating;
  EXPECT_TRUE(run_suite("verify-norm-equivalence", f).ok);
}

TEST(Suites, Deterministic) {
  RunConfig c;
  c.samples = 40;
  c.threads = 4;
  auto a = run_suite("verify-trees", c).json;
  c.threads = 1;
  auto b = run_suite("verify-trees", c).json;
  EXPECT_EQ(run_suite("verify-trees", c).json.dump(), b.dump());
  a.erase("config");
  b.erase("config");
  EXPECT_EQ(a.dump(), b.dump());
}

TEST(Suites, BadConfig) {
  RunConfig c;
  c.theta = 2;
  EXPECT_ERROR_KIND(run_suite("verify-trees", c), invalid_argument);
  EXPECT_ANY_THROW(run_suite("verify-nothing", RunConfig{}));
}

TEST(Cli, FamilyContains) {
  auto r = cli(R"~(family contains --family "S(w)" --set "[4,5,6,7]")~");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(trim(r.out), "true");
  EXPECT_EQ(trim(cli(R"~(family contains --family "S(1)" --set "[1,2]")~").out), "false");
}

TEST(Cli, Norm) {
  auto r = cli(R"~(norm --family "S(1)" --theta 1/2 --vec '{"3":"1","4":"1","5":"1"}')~");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(trim(r.out), "3/2");
  auto w = cli(R"~(norm --family "S(1)" --theta 1/2 --vec '{"3":"1","4":"1","5":"1"}' --mode allow --witness)~");
  EXPECT_EQ(w.code, 0);
  EXPECT_EQ(Json::parse(w.out)["value"], "3/2");
}

TEST(Cli, AnalyzeDot) {
  std::string path = testing::TempDir() + "schreier_t.dot";
  auto r = cli(R"~(analyze --xi 2 --set "[2,3,4,5,6,7]" --dot )~" + path);
  EXPECT_EQ(r.code, 0);
  std::ifstream in(path);
  std::string line;
  int nodes = 0;
  while (std::getline(in, line))
    if (line.find("label=") != std::string::npos) ++nodes;
  EXPECT_EQ(nodes, 9);
}

TEST(Cli, OtherCommands) {
  auto r = cli(R"~(rearrange --xi 1 --parts "[[2,5],[3,4]]")~");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(sets_from_json(Json::parse(r.out)), sets({{2, 3}, {4, 5}}));
  auto e = cli(R"~(equiv --xi 1 --theta 1/2 --vec '{"3":"1","4":"1","5":"1"}')~");
  EXPECT_EQ(e.code, 0);
  EXPECT_EQ(Json::parse(e.out)["n_std"], "3/2");
  auto p = cli(R"~(tree psi --family "S(1)" --theta 1/2 --trees "[[2],[2,2],[2,4]]")~");
  EXPECT_EQ(p.code, 0);
  EXPECT_NE(p.out.find("1/2"), std::string::npos);
  auto v = cli(R"~(tree validate --family "S(1)" --trees "[[2],[2,4]]")~");
  EXPECT_EQ(v.code, 1);
  auto f = cli(R"~(flatavg --family "S(1)" --theta 1/2 --from 2 --eps 3/5)~");
  EXPECT_EQ(f.code, 0);
  EXPECT_EQ(Json::parse(f.out)["value"], "1/2");
}

TEST(Cli, Suites) {
  EXPECT_EQ(cli("suite verify-modified-eq --xi 2 --horizon 10").code, 0);
  EXPECT_EQ(cli("suite verify-norm-equivalence --xi 1 --theta 1/2 --samples 200").code, 0);
  EXPECT_EQ(cli("suite verify-trees --theta 2").code, 2);
  auto a = cli("suite verify-trees --samples 25 --seed 5").out;
  EXPECT_EQ(cli("suite verify-trees --samples 25 --seed 5").out, a);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli("").code, 2);
  EXPECT_EQ(cli("family contains --family \"S(1\" --set \"[2]\"").code, 2);
  EXPECT_EQ(cli("norm --family \"S(1)\" --theta 1/2 --vec '{\"x\":1}'").code, 2);
  EXPECT_EQ(cli("frobnicate").code, 2);
  EXPECT_EQ(cli("--help").code, 0);
}

TEST(Cli, ConfigFile) {
  std::string path = testing::TempDir() + "schreier_cfg.json";
  std::ofstream(path) << R"~({"xi":"2","samples":10,"seed":3})~";
  auto r = cli("suite verify-trees --config " + path);
  EXPECT_EQ(r.code, 0);
  auto j = Json::parse(r.out);
  EXPECT_EQ(j["config"]["xi"], "2");
  EXPECT_EQ(j["cases"], 10);
}
