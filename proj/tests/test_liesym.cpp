#include <doctest.h>

#include <chrono>

#include "delin/errors.hpp"
#include "delin/liesym.hpp"
#include "support.hpp"
#include "reference.hpp"
#include "systems.hpp"

using namespace delin;
using testsupport::ex;
using testsupport::loadSystem;
using testsupport::rifOf;
using reference::reducesInto;
using reference::solvedSystem;

namespace {

// Each vector field, written in the symmetry space, satisfies S.
bool satisfies(const DetSystem& S, const std::vector<std::string>& field) {
  Bindings bind;
  std::vector<std::string> comps = S.ansatz.all();
  REQUIRE(field.size() == comps.size());
  std::vector<Expr> vals;
  for (const auto& f : field) vals.push_back(ex(f, S.sys.vs));
  // Substitute every derivative that occurs in the equations by the derivative of the field.
  for (const auto& e : S.sys.toDPS().eqs) {
    Bindings b;
    for (Var v : e.vars()) {
      int k = S.sys.ranking.unknownIndex(v.name());
      if (k < 0 || !v.isDeriv()) continue;
      Expr d = vals[k];
      const auto& args = S.sys.vs.argsOf(v.name());
      MultiIndex a = v.index();
      for (std::size_t i = 0; i < args.size(); ++i)
        for (int r = 0; r < a[i]; ++r) d = d.diff(Var::symbol(args[i]));
      b.emplace(v, d);
    }
    if (!substitute(e, b).isZero()) return false;
  }
  return true;
}

mpq_class killingDet(const LieStructure& L) {
  int d = L.dim();
  std::vector<std::vector<mpq_class>> K(d, std::vector<mpq_class>(d));
  // K(a,b) = tr(ad a ad b); (ad a)_{kj} = c[a][j][k].
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int k = 0; k < d; ++k)
        for (int j = 0; j < d; ++j) K[a][b] += L.c[a][j][k] * L.c[b][k][j];
  mpq_class det = 1;
  for (int c = 0; c < d; ++c) {
    int p = c;
    while (p < d && K[p][c] == 0) ++p;
    if (p == d) return 0;
    if (p != c) {
      std::swap(K[p], K[c]);
      det = -det;
    }
    det *= K[c][c];
    for (int r = c + 1; r < d; ++r) {
      mpq_class f = K[r][c] / K[c][c];
      for (int j = c; j < d; ++j) K[r][j] -= f * K[c][j];
    }
  }
  return det;
}

struct Ode3 {
  RifCase R = rifOf(loadSystem("ode3").dps);
  DetSystem S = detSys(R);
};

const Ode3& ode3() {
  static Ode3 o;
  return o;
}

}  // namespace

TEST_CASE("prolonged infinitesimals on a first order jet") {
  VarSpace jet({"x"}, {"u"});
  auto a = defaultAnsatz(jet);
  CHECK(a.xi == std::vector<std::string>{"xi"});
  CHECK(a.eta == std::vector<std::string>{"eta"});
  VarSpace ext = prolongationSpace(jet, a);
  // eta^(1) = D(eta) - u_x D(xi)
  Expr e1 = prolongedEta(ext, a, 0, testsupport::mi({1}));
  Expr want = ex("eta[x] + eta[u]*u[x] - u[x]*(xi[x] + xi[u]*u[x])", ext);
  CHECK((e1 - want).isZero());
  Expr e0 = prolongedEta(ext, a, 0, testsupport::mi({0}));
  CHECK((e0 - ex("eta", ext)).isZero());
}

TEST_CASE("ansatz names avoid declared names") {
  VarSpace jet({"x", "xi"}, {"u"});
  auto a = defaultAnsatz(jet);
  CHECK(a.xi == std::vector<std::string>{"xi1", "xi2"});
  VarSpace jet2({"x"}, {"xi"});
  CHECK(defaultAnsatz(jet2).xi == std::vector<std::string>{"xi_"});
}

TEST_CASE("determining system of the third order example") {
  auto t0 = std::chrono::steady_clock::now();
  const auto& [R, S] = ode3();
  InitialData id = initialData(S.sys);
  CHECK(id.toString() == "[eta(x0,u0) = c1, eta[x](x0,u0) = c2, eta[u](x0,u0) = c3, eta[u,u](x0,u0) = c4]");
  CHECK(hilbertFn(id).dim() == 4);

  const VarSpace& vs = S.sys.vs;
  RifCase expected = solvedSystem(vs, {"xi", "eta"}, reference::kDetermining);
  CHECK(reducesInto(expected, S.sys));
  CHECK(reducesInto(S.sys, expected));
  CHECK(integrabilityPairs(S.sys).empty());
  CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(30));
}

TEST_CASE("structure constants of the third order example at (1,1)") {
  const auto& S = ode3().S;
  Point z0{{Var::symbol("x"), 1}, {Var::symbol("u"), 1}};
  LieStructure L = structureConstants(S, z0);
  CHECK(L.relations() == reference::kBrackets);
  CHECK(L.jacobi());
  // The initial-data basis depends on the point; so do the constants.
  CHECK(L.pointDependent);
  CHECK(structureConstants(S).z0 == z0);

  DerivedAlgebra D = derivedStructure(L);
  REQUIRE(D.basis.size() == 3);
  using V = std::vector<mpq_class>;
  CHECK(D.basis[0] == V{1, 0, -2, 0});
  CHECK(D.basis[1] == V{0, 1, 1, 0});
  CHECK(D.basis[2] == V{0, 0, 0, 1});
  CHECK(D.structure.abelian());
  CHECK(D.structure.basis[0] == "Y1 - 2*Y3");

  auto j = toJson(L);
  CHECK(j["dim"] == 4);
  CHECK(j["relations"][0] == "[Y1,Y2] = -Y1 - 2*Y2");
}

TEST_CASE("derived algebra determining system of the third order example") {
  const auto& S = ode3().S;
  DetSystem D = derivedDetSys(S);
  const VarSpace& vs = D.sys.vs;
  RifCase expected = solvedSystem(vs, {"xi", "eta"}, reference::kDerived);
  CHECK(reducesInto(expected, D.sys));
  CHECK(reducesInto(D.sys, expected));
  CHECK(hilbertFn(initialData(D.sys)).dim() == 3);
  CHECK(structureConstants(D).abelian());
}

TEST_CASE("linearization test") {
  const auto& [R, S] = ode3();
  LGMResult r = lgmLinTest(R, S);
  CHECK(r.linearizable);
  CHECK(r.order == 3);
  CHECK(r.dimL == 4);
  CHECK(r.dimDerived == 3);
  CHECK(r.derivedAbelian == true);

  // u'' = 0: eight dimensional algebra.
  RifCase free = rifOf(parseSystem("indep x; dep u; eq u[x,x];"));
  LGMResult f = lgmLinTest(free);
  CHECK(f.linearizable);
  CHECK(f.dimL == 8);

  CHECK_THROWS_AS(lgmLinTest(rifOf(parseSystem("indep x, y; dep u; eq u[x,y];"))), NotAnODE);
  CHECK(lgmLinTest(rifOf(parseSystem("indep x; dep u; eq u[x] - u^2;"))).linearizable);
}

TEST_CASE("sl(2) from the Ermakov-Pinney equation") {
  RifCase R = rifOf(parseSystem("indep x; dep u; eq u[x,x] - 1/u^3; ineq u;"));
  DetSystem S = detSys(R);
  LieStructure L = structureConstants(S);
  CHECK(L.dim() == 3);
  CHECK(L.jacobi());
  // Semisimple: perfect and with nondegenerate Killing form.
  CHECK(derivedStructure(L).basis.size() == 3);
  CHECK(killingDet(L) != 0);
  CHECK(satisfies(S, {"1", "0"}));
  CHECK(satisfies(S, {"2*x", "u"}));
  CHECK(satisfies(S, {"x^2", "x*u"}));
}

TEST_CASE("translations only") {
  // Autonomous and not cubic in u': only the two translations.
  RifCase R = rifOf(parseSystem("indep x; dep u; eq u[x,x] - u[x]^4 - 1;"));
  DetSystem S = detSys(R);
  LieStructure L = structureConstants(S);
  CHECK(L.dim() == 2);
  CHECK(L.abelian());
  CHECK(derivedStructure(L).basis.empty());
  CHECK(satisfies(S, {"1", "0"}));
  CHECK(satisfies(S, {"0", "1"}));
}

TEST_CASE("heat equation generators") {
  RifCase R = rifOf(parseSystem("indep t, x; dep u; eq u[t] - u[x,x];"));
  DetSystem S = detSys(R);
  CHECK_FALSE(initialData(S.sys).infinite.empty());
  CHECK(S.ansatz.xi == std::vector<std::string>{"xi1", "xi2"});
  // (xi_t, xi_x, eta) over (t, x, u)
  CHECK(satisfies(S, {"1", "0", "0"}));
  CHECK(satisfies(S, {"0", "1", "0"}));
  CHECK(satisfies(S, {"0", "0", "u"}));
  CHECK(satisfies(S, {"2*t", "x", "0"}));
  CHECK(satisfies(S, {"0", "2*t", "-x*u"}));
  CHECK(satisfies(S, {"4*t^2", "4*t*x", "-(x^2+2*t)*u"}));
  CHECK(satisfies(S, {"0", "0", "x^2+2*t"}));  // superposition with a heat solution
  CHECK_FALSE(satisfies(S, {"0", "0", "x^2"}));
  CHECK_FALSE(satisfies(S, {"t", "0", "0"}));
}

TEST_CASE("Burgers equation has a five dimensional algebra") {
  RifCase R = rifOf(loadSystem("burgers").dps);
  DetSystem S = detSys(R);
  InitialData id = initialData(S.sys);
  CHECK(id.infinite.empty());
  CHECK(id.size() == 5);
  LieStructure L = structureConstants(S);
  CHECK(L.jacobi());
}

TEST_CASE("Jacobi identity on random bilinear brackets of computed algebras") {
  for (const char* src : {"indep x; dep u; eq u[x,x,x];", "indep x; dep u; eq u[x,x] - u^2;",
                          "indep x; dep u; eq u[x,x] + u[x]/x;", "indep x; dep u; eq u[x,x,x] - u[x]^2;"}) {
    CAPTURE(src);
    DetSystem S = detSys(rifOf(parseSystem(src)));
    LieStructure L = structureConstants(S);
    CHECK(L.jacobi());
    for (int i = 0; i < L.dim(); ++i) {
      std::vector<mpq_class> e(L.dim());
      e[i] = 1;
      CHECK(L.bracket(e, e) == std::vector<mpq_class>(L.dim()));
    }
  }
}
