// Acceptance runner: one PASS/FAIL line per criterion, with pinned time
// budgets. Criterion 10 runs the property suites compiled into this binary.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "delin/kernels.hpp"
#include "delin/mapde.hpp"
#include "reference.hpp"
#include "support.hpp"
#include "systems.hpp"

using namespace delin;
using testsupport::ex;
using testsupport::loadSystem;
using testsupport::rifOf;

namespace {

// Collects failed expectations of one criterion.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

double seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string solvedString(const RifCase& c) {
  std::ostringstream o;
  for (const auto& s : c.solved) o << c.vs.varName(s.leader) << " = " << toString(s.rhs, c.vs) << "; ";
  return o.str();
}

RifCase ezCase() {
  DPS s = loadSystem("ez").dps;
  return completeSingle(s, Ranking::orderly(s.vs), defaultOptions());
}

struct Ode3 {
  SystemFile f = loadSystem("ode3");
  RifCase R = rifOf(f.dps);
  DetSystem S = detSys(R);
};

const Ode3& ode3() {
  static Ode3 o;
  return o;
}

void c1(Check& c) {
  DPS s = loadSystem("ez").dps;
  Completion r = completeCases(s, Ranking::orderly(s.vs), defaultOptions());
  c.expect(r.cases.size() == 1, "expected a single case, got " + std::to_string(r.cases.size()));
  if (r.cases.size() != 1) return;
  const RifCase& k = r.cases[0];
  c.expect(k.solved.size() == 2 && k.constraints.empty() && k.pivots.empty(), "case is " + solvedString(k));
  const SolvedEq* a = k.find(Var::deriv("u", testsupport::mi({2, 0})));
  const SolvedEq* b = k.find(Var::deriv("u", testsupport::mi({1, 1})));
  c.expect(a && a->rhs == ex("u[x]", k.vs), "u[x,x] = u[x] missing");
  c.expect(b && b->rhs == ex("u[y]", k.vs), "u[x,y] = u[y] missing");
}

void c2(Check& c) {
  InitialData id = initialData(ezCase());
  c.expect(id.finite.size() == 1 && id.itemString(id.finite[0]) == "u[x](x0,y0)", "F = " + id.toString());
  c.expect(id.infinite.size() == 1 && id.itemString(id.infinite[0]) == "u(x0,y)" &&
               id.infinite[0].free == std::vector<int>{1},
           "I = " + id.toString());
  std::string hf = hilbertFn(id).toString();
  c.expect(hf == "s + 1/(1-s)", "HF = " + hf);
}

void c3(Check& c) {
  const auto& [f, R, S] = ode3();
  InitialData id = initialData(S.sys);
  c.expect(hilbertFn(id).dim() == 4, "dim " + hilbertFn(id).toString());
  c.expect(id.toString() == "[eta(x0,u0) = c1, eta[x](x0,u0) = c2, eta[u](x0,u0) = c3, eta[u,u](x0,u0) = c4]",
           "ID = " + id.toString());
  RifCase pub = reference::solvedSystem(S.sys.vs, {"xi", "eta"}, reference::kDetermining);
  c.expect(reference::reducesInto(pub, S.sys), "published equations do not reduce to zero");
  c.expect(reference::reducesInto(S.sys, pub), "computed equations do not reduce to zero modulo the published ones");
}

void c4(Check& c) {
  const auto& [f, R, S] = ode3();
  Point z0{{Var::symbol("x"), 1}, {Var::symbol("u"), 1}};
  LieStructure L = structureConstants(S, z0);
  c.expect(L.relations() == reference::kBrackets, "brackets differ");
  DerivedAlgebra D = derivedStructure(L);
  c.expect(D.basis.size() == 3, "derived dim " + std::to_string(D.basis.size()));
  c.expect(D.structure.abelian(), "derived algebra not abelian");
  c.expect(lgmLinTest(R, S).linearizable, "lgmLinTest false");
}

void c5(Check& c) {
  const auto& S = ode3().S;
  DetSystem D = derivedDetSys(S);
  RifCase pub = reference::solvedSystem(D.sys.vs, {"xi", "eta"}, reference::kDerived);
  c.expect(reference::mutuallyReduce(pub, D.sys), "S' differs from the published system");
  c.expect(hilbertFn(initialData(D.sys)).dim() == 3, "dim S' = " + hilbertFn(initialData(D.sys)).toString());
}

void c6(Check& c) {
  const auto& [f, R, S] = ode3();
  MapDEReport rep = runMapDE(R);
  c.expect(toString(rep.verdict) == "true", "verdict " + toString(rep.verdict));
  c.expect(rep.cases.size() == 1, std::to_string(rep.cases.size()) + " surviving cases");
  if (rep.cases.empty() || !rep.mapping) return;
  const RifCase& P = rep.cases[0];
  c.expect(reference::matchesMappingCase(P), "surviving case differs from the published one");
  c.expect(hilbertFn(P, rep.mapping->blocks[0]).toString() == "1 + s + s^2", "HF of the case");
  c.expect(rep.dimInfo.R.toString() == "1 + s + s^2", "HF(R)");
  LinearTarget T = specializeTarget(P, *rep.mapping, R.maxOrder(), f.map);
  c.expect(T.strings() == std::vector<std::string>{"uh[xh,xh,xh] = ((-xh - 1)/xh)*uh"},
           "target " + (T.strings().empty() ? std::string("none") : T.strings()[0]));
  c.expect(verifyMap(R, parseSystem(reference::kTarget), f.map), "verifyMap false");
}

void c7(Check& c) {
  for (int d = 3; d <= 6; ++d) {
    auto t0 = std::chrono::steady_clock::now();
    SystemFile f = loadSystem("lgm" + std::to_string(d));
    RifCase R = rifOf(f.dps);
    MapDEOptions o;
    o.integrate = false;
    MapDEReport rep = runMapDE(R, o);
    double t = seconds(t0);
    std::string tag = "d=" + std::to_string(d) + ": ";
    c.expect(t < 60, tag + "existence took " + std::to_string(t) + " s");
    c.expect(toString(rep.verdict) == "true", tag + "verdict " + toString(rep.verdict));
    std::string derivs;
    for (int k = 0; k < d; ++k) derivs += (k ? ",xh" : "xh");
    c.expect(verifyMap(R, parseSystem("indep xh; dep uh; eq uh[" + derivs + "] = -uh;"), f.map),
             tag + "verifyMap false");
  }
}

// d = 7, 8 with integration; reported, not scored.
void c7stretch() {
  for (int d = 7; d <= 8; ++d) {
    auto t0 = std::chrono::steady_clock::now();
    RifCase R = rifOf(loadSystem("lgm" + std::to_string(d)).dps);
    MapDEOptions o;
    o.integrate = false;
    MapDEReport rep = runMapDE(R, o);
    double existence = seconds(t0);
    MapDEReport full = runMapDE(R);
    double total = seconds(t0) - existence;
    std::printf("              stretch d=%d: verdict %s, map %s, existence %.2f s, with construction %.2f s\n", d,
                toString(rep.verdict).c_str(), full.mapVerified == true ? "verified" : "not verified", existence,
                total);
  }
}

void c8(Check& c) {
  MapDEReport b = runMapDE(rifOf(loadSystem("burgers").dps));
  c.expect(toString(b.verdict) == "false", "burgers verdict " + toString(b.verdict));
  c.expect(!b.failedTests.empty() && b.failedTests[0] == "T1: dim S = 5 is finite while dim R is infinite",
           "burgers diagnostic");
  SystemFile f = loadSystem("potburgers");
  RifCase R = rifOf(f.dps);
  MapDEReport p = runMapDE(R);
  c.expect(toString(p.verdict) == "true", "potential burgers verdict " + toString(p.verdict));
  c.expect(verifyMap(R, loadSystem("potburgers_target").dps, f.map),
           "verifyMap rejects the published map and target for v_t = u_x + u^2/2");
}

void c9(Check& c) {
  RifCase R = rifOf(loadSystem("kp").dps);
  MapDEReport k = runMapDE(R);
  c.expect(toString(k.verdict) == "false", "kp verdict " + toString(k.verdict));
  c.expect(!k.failedTests.empty() && k.failedTests[0] == "T3: d(S) = 1 < 2 = d(R)", "kp diagnostic");
  InitialData id = initialData(detSys(R).sys);
  bool shape = id.infinite.size() == 3 && id.finite.size() == 6;
  for (const auto& item : id.infinite) shape = shape && item.free.size() == 1;
  c.expect(shape, "ID(S) = " + id.toString());
  MapDEReport l = runMapDE(rifOf(loadSystem("liouville").dps));
  c.expect(toString(l.verdict) == "false", "liouville verdict " + toString(l.verdict));
}

void c10(Check& c) {
  doctest::Context ctx;
  ctx.setOption("test-case",
                "ranking axioms hold exhaustively to order 5,"
                "total derivative is a commuting derivation,"
                "Jacobi identity on*,jacobi violation counts agree,"
                "hilbert coefficients*,"
                "completion is sound at random locus points*");
  ctx.setOption("minimal", true);
  c.expect(ctx.run() == 0, "property suite failures");
  // Jacobi on every structure computed for the golden systems.
  for (const char* name : {"ode3", "burgers", "lgm3", "lgm4", "lgm5", "lgm6"}) {
    DetSystem S = detSys(rifOf(loadSystem(name).dps));
    LieStructure L = structureConstants(S);
    c.expect(jacobiViolations(L) == 0, std::string("Jacobi fails for ") + name);
    DerivedAlgebra D = derivedStructure(L);
    c.expect(jacobiViolations(D.structure) == 0, std::string("Jacobi fails for the derived algebra of ") + name);
  }
  c.expect(structureConstants(derivedDetSys(ode3().S)).jacobi(), "Jacobi fails on S'");
}

struct Criterion {
  int id;
  const char* what;
  double budget;  // seconds
  std::function<void(Check&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "rif of the three-equation system", 1, c1},
      {2, "initial data and Hilbert function", 5, c2},
      {3, "determining system of the third order example", 30, c3},
      {4, "structure constants, derived algebra, LGM test", 30, c4},
      {5, "derived determining system", 30, c5},
      {6, "mapping case, target and map for the third order example", 120, c6},
      {7, "LGM family 3 <= d <= 6", 240, c7},
      {8, "Burgers and potential Burgers", 300, c8},
      {9, "KP and Liouville", 120, c9},
      {10, "property suites", 300, c10},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Check c;
    auto t0 = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    double t = seconds(t0);
    if (t >= cr.budget) c.failures.push_back("over budget of " + std::to_string(int(cr.budget)) + " s");
    bool ok = c.failures.empty();
    failed += !ok;
    std::printf("criterion %2d  %s  %7.2f s  %s\n", cr.id, ok ? "PASS" : "FAIL", t, cr.what);
    for (const auto& m : c.failures) std::printf("              %s\n", m.c_str());
    if (cr.id == 7) c7stretch();
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria pass\n", int(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
