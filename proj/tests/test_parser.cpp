#include <doctest.h>

#include <filesystem>

#include "delin/errors.hpp"
#include "delin/parser.hpp"
#include "support.hpp"
#include "systems.hpp"

using namespace delin;
using testsupport::mi;

TEST_CASE("derivative syntaxes agree") {
  DPS a = parseSystem("indep x, y; dep u; eq diff(u,x,2,y) - u[x,y,x];");
  REQUIRE(a.eqs.size() == 1);
  CHECK(a.eqs[0].isZero());
  DPS b = parseSystem("indep x; dep u; eq u[x,x] - u[x];");
  CHECK(b.eqs[0] == Expr(Var::deriv("u", mi({2}))) - Expr(Var::deriv("u", mi({1}))));
  RifCase c = testsupport::rifOf(b);
  REQUIRE(c.solved.size() == 1);
  CHECK(c.solved[0].leader == Var::deriv("u", mi({2})));
}

TEST_CASE("third order example parses with its inequations") {
  SystemFile f = testsupport::loadSystem("ode3");
  CHECK(f.dps.vs.indep() == std::vector<std::string>{"x"});
  REQUIRE(f.dps.ineqs.size() == 3);
  CHECK(toString(f.dps.ineqs[1], f.dps.vs) == "u[x]*u + x");
  REQUIRE(f.map.size() == 2);
  CHECK(f.map[0].target == "xh");
}

TEST_CASE("functions, parameters and auxiliaries") {
  SystemFile f = parseSystemFile(
      "indep x, t; dep u, v; param a; func phi(x, u); aux w = exp(-v/2);\n"
      "eq v[x] = u; eq phi[u,x] - a*w; point x = 1, t = 2/3;");
  const VarSpace& vs = f.dps.vs;
  CHECK(vs.role("phi") == VarSpace::Role::Func);
  CHECK(vs.role("w") == VarSpace::Role::Aux);
  REQUIRE(vs.aux().size() == 1);
  REQUIRE(vs.aux()[0].partials.size() == 1);
  // D_x w = -v_x w / 2
  Expr dw = totalDerive(vs, Expr(Var::symbol("w")), 0);
  CHECK(dw == parseExpr("-v[x]*w/2", vs));
  REQUIRE(f.point.has_value());
  CHECK(f.point->at(Var::symbol("t")) == mpq_class(2, 3));
}

TEST_CASE("diagnostics carry positions") {
  try {
    parseSystem("indep x;\ndep u;\neq u[x] + ;");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 11);
  }
  CHECK_THROWS_AS(parseSystem("indep x; dep u; eq v[x];"), UndeclaredName);
  CHECK_THROWS_AS(parseSystem("indep x; dep u; eq u[y];"), ParseError);
  CHECK_THROWS_AS(parseSystem("indep x; dep u; eq u/0;"), ParseError);
  CHECK_THROWS_AS(parseSystem("indep x; dep x;"), ParseError);
  CHECK_THROWS_AS(parseSystem("indep x; dep u; eq u $ 2;"), ParseError);
  CHECK_THROWS_AS(parseSystem("indep x; dep u; eq u"), ParseError);
  CHECK_THROWS_AS(parseSystem("indep x; dep u; foo u;"), ParseError);
}

TEST_CASE("negative powers and unary signs") {
  VarSpace vs({"x"}, {"u"});
  CHECK(parseExpr("x^-2*x^2", vs) == Expr(1L));
  CHECK(parseExpr("-(-u)", vs) == Expr(Var::deriv("u", {})));
  CHECK(parseExpr("1/2 + 1/3", vs) == Expr(mpq_class(5, 6)));
}

TEST_CASE("print then parse is the identity on golden files") {
  for (const auto& entry : std::filesystem::directory_iterator(DELIN_SYSTEMS_DIR)) {
    if (entry.path().extension() != ".sys") continue;
    CAPTURE(entry.path().string());
    SystemFile f = readSystemFile(entry.path().string());
    std::string text = printSystem(f);
    SystemFile g = parseSystemFile(text);
    CHECK(printSystem(g) == text);
    CHECK(g.dps.vs.indep() == f.dps.vs.indep());
    CHECK(g.dps.vs.dep() == f.dps.vs.dep());
    CHECK(g.dps.eqs == f.dps.eqs);
    CHECK(g.dps.ineqs == f.dps.ineqs);
    REQUIRE(g.map.size() == f.map.size());
    for (std::size_t i = 0; i < f.map.size(); ++i) CHECK(g.map[i].expr == f.map[i].expr);
  }
}

TEST_CASE("ranking and option statements") {
  SystemFile f = parseSystemFile(
      "indep x, t; dep u, v, w; eq v[x] - u; ranking v > u; option casesplit = 0; option order = 3;");
  REQUIRE(f.ranking.size() == 2);
  CHECK(f.ranking[0] == std::vector<std::string>{"v"});
  Ranking r = rankingFor(f);
  // w was not listed and falls into a last block.
  CHECK(r.less(Var::deriv("w", unitIndex(0)), Var::deriv("u", {})));
  CHECK(r.less(Var::deriv("u", unitIndex(0)), Var::deriv("v", {})));
  CompleteOptions o = optionsFor(f);
  CHECK_FALSE(o.casesplit);
  CHECK(o.extraOrder == 3);
  SystemFile g = parseSystemFile(printSystem(f));
  CHECK(g.ranking == f.ranking);
  CHECK(g.options.extraOrder == 3);
  CHECK(rankingFor(parseSystemFile("indep x; dep u; ranking orderly;")).matrix() ==
        Ranking::orderly({"x"}, {"u"}).matrix());
  CHECK_THROWS_AS(parseSystemFile("indep x; dep u; ranking x;"), ParseError);
  CHECK_THROWS_AS(parseSystemFile("indep x; dep u; option speed = 2;"), ParseError);
}

TEST_CASE("ranking matrices roundtrip through json") {
  Ranking r = Ranking::block({"x", "y"}, {{"u"}, {"v", "w"}});
  Ranking s = rankingFromJson(toJson(r));
  CHECK(s.matrix() == r.matrix());
  CHECK(s.unknowns() == r.unknowns());
  CHECK(s.indep() == r.indep());
  auto j = nlohmann::json::parse(R"({"indep":["x"],"unknowns":["u"],"matrix":[[1,1],[0,1]]})");
  CHECK(rankingFromJson(j).matrix().size() == 2);
  // A column that is not positive is rejected.
  auto bad = nlohmann::json::parse(R"({"indep":["x"],"unknowns":["u"],"matrix":[[-1,1]]})");
  CHECK_THROWS_AS(rankingFromJson(bad), InvalidInput);
}
