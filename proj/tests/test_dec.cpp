#include <doctest.h>

#include <cstdlib>

#include "delin/dec.hpp"
#include "delin/errors.hpp"
#include "delin/kernels.hpp"
#include "delin/liesym.hpp"
#include "support.hpp"
#include "systems.hpp"

using namespace delin;
using testsupport::mi;
using testsupport::randomPoint;

namespace {

VarSpace xyU() { return VarSpace({"x", "y"}, {"u"}); }

Expr U(std::initializer_list<int> a) { return Expr(Var::deriv("u", mi(a))); }

DPS eq1() {
  DPS s{xyU(), {}, {}};
  s.eqs = {U({1, 2}) - U({0, 2}), U({2, 0}) + U({1, 1}) - U({1, 0}) - U({0, 1}),
           U({2, 0}) - U({1, 1}) - U({1, 0}) + U({0, 1})};
  return s;
}

// Every input equation and its first prolongations reduce to zero in the case,
// and the reduced forms vanish at random points.
void checkSound(const DPS& s, const RifCase& c, std::mt19937& rng) {
  Reducer red(c);
  for (const auto& e : s.eqs) {
    std::vector<Expr> all{e};
    for (int i = 0; i < s.vs.n(); ++i) all.push_back(totalDerive(s.vs, e, i));
    for (const auto& f : all) {
      Expr r = red.reduce(f);
      CHECK(r.isZero());
      for (int k = 0; k < 25; ++k) {
        std::vector<Var> vs;
        for (Var v : r.vars()) vs.push_back(v);
        Point p = randomPoint(rng, vs);
        if (evaluate(r.den(), p) != 0) CHECK(evaluate(r, p) == 0);
      }
    }
  }
}

}  // namespace

TEST_CASE("three-equation system completes to two solved equations") {
  DPS s = eq1();
  Ranking r = Ranking::orderly(s.vs);
  auto cs = complete(s, r);
  REQUIRE(cs.size() == 1);
  const RifCase& c = cs[0];
  REQUIRE(c.solved.size() == 2);
  CHECK(c.constraints.empty());
  const SolvedEq* a = c.find(Var::deriv("u", mi({2, 0})));
  const SolvedEq* b = c.find(Var::deriv("u", mi({1, 1})));
  REQUIRE(a);
  REQUIRE(b);
  CHECK(a->rhs == U({1, 0}));
  CHECK(b->rhs == U({0, 1}));
  CHECK(totalDerive(U({1, 1}), 0, c) == U({0, 1}));
  std::mt19937 rng(7);
  checkSound(s, c, rng);
}

TEST_CASE("reduction modulo a case") {
  auto c = complete(eq1(), Ranking::orderly(xyU()))[0];
  CHECK(reduce(U({1, 2}), c) == U({0, 2}));
  CHECK(reduce(U({2, 0}), c) == U({1, 0}));
  CHECK(reduce(U({3, 0}), c) == U({1, 0}));
  Expr already = U({1, 0}) * U({0, 3}) + Expr(Var::symbol("x"));
  CHECK(reduce(already, c) == already);
}

TEST_CASE("integrability pairs") {
  VarSpace vs = xyU();
  Ranking r = Ranking::orderly(vs);
  Var x = Var::symbol("x");

  RifCase c{vs, r, {}, {}, {}, ""};
  c.solved = {{Var::deriv("u", mi({1, 1})), U({0, 1})}, {Var::deriv("u", mi({2, 0})), U({1, 0})}};
  CHECK(integrabilityPairs(c).empty());

  RifCase single{vs, r, {{Var::deriv("u", mi({1, 0})), U({0, 0})}}, {}, {}, ""};
  CHECK(integrabilityPairs(single).empty());

  // u_x = u, u_y = x u: D_y(u) - D_x(x u) = x u - u - x u = -u by hand.
  RifCase two{vs, r, {}, {}, {}, ""};
  two.solved = {{Var::deriv("u", mi({0, 1})), Expr(x) * U({0, 0})}, {Var::deriv("u", mi({1, 0})), U({0, 0})}};
  auto conds = integrabilityPairs(two);
  REQUIRE(conds.size() == 1);
  Expr cond = conds[0];
  CHECK((cond == U({0, 0}) || cond == Expr(0L) - U({0, 0})));

  DPS s{vs, {U({1, 0}) - U({0, 0}), U({0, 1}) - Expr(x) * U({0, 0})}, {}};
  auto cs = complete(s, r);
  REQUIRE(cs.size() == 1);
  REQUIRE(cs[0].solved.size() == 1);
  CHECK(cs[0].solved[0].leader == Var::deriv("u", mi({0, 0})));
  CHECK(cs[0].solved[0].rhs.isZero());
}

TEST_CASE("already completed input is a fixed point") {
  DPS s{xyU(), {U({2, 0}) - U({1, 0}), U({1, 1}) - U({0, 1})}, {}};
  auto cs = complete(s, Ranking::orderly(s.vs));
  REQUIRE(cs.size() == 1);
  CHECK(cs[0].solved.size() == 2);
  CHECK(cs[0].pivots.empty());
}

TEST_CASE("splitting on an initial") {
  VarSpace vs({"x"}, {"u"});
  Ranking r = Ranking::orderly(vs);
  Expr u = Expr(Var::deriv("u", mi({0}))), ux = Expr(Var::deriv("u", mi({1})));
  // u u_x = 1: the u = 0 branch is inconsistent.
  DPS s{vs, {u * ux - Expr(1L)}, {}};
  auto res = completeCases(s, r);
  REQUIRE(res.cases.size() == 1);
  CHECK(res.inconsistent.size() == 1);
  REQUIRE(res.cases[0].pivots.size() == 1);
  CHECK(res.cases[0].pivots[0] == u);
  std::mt19937 rng(3);
  checkSound(s, res.cases[0], rng);

  CompleteOptions o;
  o.casesplit = false;
  auto one = complete(s, r, o);
  CHECK(one.size() == 1);
}

TEST_CASE("leading nonlinear equations split on the separant") {
  VarSpace vs({"x"}, {"u"});
  Ranking r = Ranking::orderly(vs);
  Expr u = Expr(Var::deriv("u", mi({0}))), ux = Expr(Var::deriv("u", mi({1})));
  DPS s{vs, {ux * ux - u}, {}};
  auto res = completeCases(s, r);
  REQUIRE(res.cases.size() == 2);
  std::mt19937 rng(5);
  for (const auto& c : res.cases) checkSound(s, c, rng);
  // One case keeps the constraint with pivot u_x, the other is u = 0.
  int constrained = 0, zero = 0;
  for (const auto& c : res.cases) {
    if (!c.constraints.empty()) ++constrained;
    if (c.find(Var::deriv("u", mi({0})))) ++zero;
  }
  CHECK(constrained == 1);
  CHECK(zero == 1);
}

TEST_CASE("parallel and serial drivers agree") {
  VarSpace vs({"x", "y"}, {"u", "v"});
  Ranking r = Ranking::orderly(vs);
  auto V = [](std::initializer_list<int> a) { return Expr(Var::deriv("v", mi(a))); };
  DPS s{vs, {U({0, 0}) * U({1, 0}) - V({0, 1}), V({1, 0}) * V({0, 0}) - U({0, 1}) * U({0, 0})}, {}};
  CompleteOptions o;
  o.extraOrder = 3;
  o.parallel = true;
  Completion a, b;
  bool budgetA = false, budgetB = false;
  try {
    a = completeCases(s, r, o);
  } catch (const CompletionBudgetExceeded&) {
    budgetA = true;
  }
  o.parallel = false;
  try {
    b = completeCases(s, r, o);
  } catch (const CompletionBudgetExceeded&) {
    budgetB = true;
  }
  CHECK(budgetA == budgetB);
  REQUIRE(a.cases.size() == b.cases.size());
  for (std::size_t i = 0; i < a.cases.size(); ++i) {
    CHECK(a.cases[i].path == b.cases[i].path);
    REQUIRE(a.cases[i].solved.size() == b.cases[i].solved.size());
    for (std::size_t k = 0; k < a.cases[i].solved.size(); ++k)
      CHECK(a.cases[i].solved[k].rhs == b.cases[i].solved[k].rhs);
  }
}

TEST_CASE("budget") {
  setenv("DELIN_BUDGET", "2:5", 1);
  auto o = defaultOptions();
  CHECK(o.extraOrder == 2);
  CHECK(o.maxCases == 5);
  setenv("DELIN_BUDGET", "bad", 1);
  CHECK_THROWS_AS(defaultOptions(), InvalidInput);
  unsetenv("DELIN_BUDGET");

  // u_xy = u_x u_y with u_x = u^2 generates conditions of growing order only
  // through prolongation; a zero budget must stop the first one.
  VarSpace vs = xyU();
  DPS s{vs, {U({1, 0}) - U({0, 0}) * U({0, 0}), U({0, 1}) - U({0, 0})}, {}};
  CompleteOptions tight;
  tight.extraOrder = 0;
  CHECK_THROWS_AS(complete(s, Ranking::orderly(vs), tight), CompletionBudgetExceeded);
}

namespace {

// Random parametric data at a regular point; principal derivatives come from
// their normal forms. Every input equation must vanish there.
int checkLocusPoints(const DPS& s, const RifCase& c, std::mt19937& rng, int count) {
  Reducer red(c);
  std::vector<Var> jet;
  for (const auto& e : s.eqs)
    for (Var v : e.vars())
      if (std::find(jet.begin(), jet.end(), v) == jet.end()) jet.push_back(v);
  std::vector<Expr> forms, guards = c.pivots;
  for (Var v : jet) forms.push_back(red.reduce(Expr(v)));
  guards.insert(guards.end(), s.ineqs.begin(), s.ineqs.end());
  std::vector<Var> free;
  auto addVars = [&](const Expr& e) {
    for (Var v : e.vars())
      if (std::find(free.begin(), free.end(), v) == free.end()) free.push_back(v);
  };
  for (const auto& f : forms) addVars(f);
  for (const auto& g : guards) addVars(g);

  std::vector<Point> params;
  for (int tries = 0; int(params.size()) < count && tries < 20 * count; ++tries) params.push_back(randomPoint(rng, free));
  auto values = evaluateBatch(forms, params);
  auto guardValues = evaluateBatch(guards, params);
  std::vector<Point> locus;
  for (std::size_t p = 0; p < params.size(); ++p) {
    if (values[p].empty() || (!guards.empty() && guardValues[p].empty())) continue;
    if (std::any_of(guardValues[p].begin(), guardValues[p].end(), [](const mpq_class& q) { return q == 0; })) continue;
    Point pt;
    for (std::size_t i = 0; i < jet.size(); ++i) pt[jet[i]] = values[p][i];
    locus.push_back(pt);
  }
  auto residues = evaluateBatch(s.eqs, locus);
  int checked = 0;
  for (const auto& row : residues) {
    if (row.empty()) continue;
    ++checked;
    for (const auto& r : row) CHECK(r == 0);
  }
  return checked;
}

}  // namespace

TEST_CASE("completion is sound at random locus points of every golden case") {
  std::mt19937 rng(2024);
  for (const char* name : {"ez", "ode3", "burgers", "heat", "kp", "liouville", "lgm3", "lgm4", "lgm5", "lgm6",
                           "potburgers", "potburgers_target"}) {
    std::string sys = name;
    CAPTURE(sys);
    SystemFile f = testsupport::loadSystem(name);
    for (const auto& c : complete(f.dps, rankingFor(f), defaultOptions())) {
      CAPTURE(c.path);
      if (!c.constraints.empty()) continue;  // random data is off a nonlinear locus
      CHECK(checkLocusPoints(f.dps, c, rng, 25) >= 20);
    }
  }
  // Determining systems are golden cases too.
  for (const char* name : {"ode3", "heat", "burgers"}) {
    std::string sys = name;
    CAPTURE(sys);
    SystemFile f = testsupport::loadSystem(name);
    RifCase R = completeSingle(f.dps, rankingFor(f), defaultOptions());
    DetSystem S = detSys(R, defaultOptions());
    CHECK(checkLocusPoints(S.sys.toDPS(), S.sys, rng, 25) >= 20);
  }
}
