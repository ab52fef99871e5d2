#pragma once

// Published solved forms for the third order example, shared by the unit
// tests and the acceptance runner. Comparison is by mutual reduction.

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "delin/dec.hpp"
#include "delin/errors.hpp"
#include "systems.hpp"

namespace reference {

using namespace delin;

using Solved = std::vector<std::pair<std::string, std::string>>;

// Determining system of the third order example, unknowns xi, eta.
inline const Solved kDetermining = {
    {"xi", "-eta*u/x"},
    {"eta[x,u]", "(u-x)*(u+x)*eta/(u^3*x) + (u^2+x^2)*eta[u]/(x*u^2) - eta[x]/u + x*eta[u,u]/u"},
    {"eta[x,x]", "-(2*u^4-x^2*u^2+x^4)*eta/(u^4*x^2) + (u^2+x^2)*eta[u]/u^3 + 2*eta[x]/x + x^2*eta[u,u]/u^2"},
    {"eta[u,u,u]",
     "-(16*u^8+24*u^6*x^2+8*u^4*x^4+16*u^6+8*u^4*x^2+3*u^2+3*x^2)*eta/((u^2+x^2)*u^3)"
     " - (8*u^6*x^2+8*u^4*x^4+8*u^4*x^2-3*u^2-3*x^2)*eta[u]/(u^2*(u^2+x^2))"
     " + 8*u^3*x*(u^2+x^2+1)*eta[x]/(u^2+x^2)"}};

// Determining system of the derived algebra.
inline const Solved kDerived = {
    {"xi", "-eta*u/x"},
    {"eta[x]", "(u^2+x^2)*eta/(x*u^2) + eta[u]*x/u"},
    {"eta[u,u,u]", "-(8*u^8+8*u^6*x^2+8*u^6+3*u^2+3*x^2)*eta/((u^2+x^2)*u^3) + 3*eta[u]/u^2"}};

inline const std::vector<std::string> kBrackets = {"[Y1,Y2] = -Y1 - 2*Y2", "[Y1,Y3] = Y1 - 2*Y3",
                                                   "[Y1,Y4] = -2*Y4",      "[Y2,Y3] = Y2 + Y3",
                                                   "[Y2,Y4] = Y4",         "[Y3,Y4] = -Y4"};

// The single surviving case of the mapping system, as expressions = 0.
inline const std::vector<std::string> kMappingCase = {
    "xi + eta*u/x",
    "eta[x] - (u^2 + x^2)*eta/(x*u^2) - eta[u]*x/u",
    "eta[u,u,u] + (8*u^8 + 8*u^6*x^2 + 8*u^6 + 3*u^2 + 3*x^2)*eta/((u^2 + x^2)*u^3) - 3*eta[u]/u^2",
    "phi[x,x] - (2*phi[x,u]*x*u^2 - phi[u,u]*x^2*u + phi[u]*u^2 + phi[u]*x^2)/u^3",
    "psi[x] - psi[u]*x/u",
    "etah + (u*phi[x] - x*phi[u])*eta/x",
    "xih"};
inline const std::vector<std::string> kMappingPivots = {"x*phi[u] - u*phi[x]", "psi[u]"};

inline const std::string kTarget = "indep xh; dep uh; eq uh[xh,xh,xh] = -(xh + 1)/xh*uh;";

// Solved system given as "leader = rhs" texts over vs, ranked orderly.
inline RifCase solvedSystem(const VarSpace& vs, const std::vector<std::string>& unknowns, const Solved& eqs) {
  RifCase c{vs, Ranking::orderly(vs.indep(), unknowns), {}, {}, {}, ""};
  for (const auto& [l, r] : eqs) {
    Expr lead = testsupport::ex(l, vs);
    if (lead.vars().size() != 1) throw InvalidInput("not a single leader: " + l);
    c.solved.push_back({*lead.vars().begin(), testsupport::ex(r, vs)});
  }
  std::sort(c.solved.begin(), c.solved.end(),
            [&](const SolvedEq& a, const SolvedEq& b) { return c.ranking.less(a.leader, b.leader); });
  return c;
}

// Every equation of a reduces to zero modulo b.
inline bool reducesInto(const RifCase& a, const RifCase& b) {
  for (const auto& e : a.toDPS().eqs)
    if (!reduce(e, b).isZero()) return false;
  return true;
}

inline bool mutuallyReduce(const RifCase& a, const RifCase& b) { return reducesInto(a, b) && reducesInto(b, a); }

// Nonzero rational multiple of one of the pivots.
inline bool hasPivot(const RifCase& c, const Expr& p) {
  for (const auto& q : c.pivots) {
    Expr r = p / q;
    if (r.isConstant() && !r.isZero()) return true;
  }
  return false;
}

// The mapping case P agrees with kMappingCase: each reduces the other to zero
// and the pivots match.
inline bool matchesMappingCase(const RifCase& P) {
  Reducer red(P);
  DPS pub{P.vs, {}, {}};
  for (const auto& p : kMappingPivots) pub.ineqs.push_back(testsupport::ex(p, P.vs));
  for (const auto& s : kMappingCase) {
    Expr e = testsupport::ex(s, P.vs);
    if (!red.reduce(e).isZero()) return false;
    pub.eqs.push_back(e);
  }
  RifCase pubCase = completeSingle(pub, P.ranking, defaultOptions());
  Reducer back(pubCase);
  for (const auto& s : P.solved)
    if (!back.reduce(Expr(s.leader) - s.rhs).isZero()) return false;
  if (P.pivots.size() != kMappingPivots.size()) return false;
  for (const auto& p : kMappingPivots)
    if (!hasPivot(P, testsupport::ex(p, P.vs))) return false;
  return true;
}

}  // namespace reference
