#include <doctest.h>

#include <functional>

#include "delin/dimension.hpp"
#include "delin/liesym.hpp"
#include "support.hpp"
#include "systems.hpp"

using namespace delin;
using testsupport::mi;

namespace {

RifCase ezCase() {
  VarSpace vs({"x", "y"}, {"u"});
  RifCase c{vs, Ranking::orderly(vs), {}, {}, {}, ""};
  c.solved = {{Var::deriv("u", mi({1, 1})), Expr(Var::deriv("u", mi({0, 1})))},
              {Var::deriv("u", mi({2, 0})), Expr(Var::deriv("u", mi({1, 0})))}};
  return c;
}

}  // namespace

TEST_CASE("initial data of the two-equation example") {
  InitialData id = initialData(ezCase());
  REQUIRE(id.finite.size() == 1);
  REQUIRE(id.infinite.size() == 1);
  CHECK(id.itemString(id.finite[0]) == "u[x](x0,y0)");
  CHECK(id.itemString(id.infinite[0]) == "u(x0,y)");
  CHECK(id.toString() == "[u[x](x0,y0) = c1, u(x0,y) = f1(y)]");
  CHECK(hilbertFn(id).toString() == "s + 1/(1-s)");
  auto j = toJson(hilbertFn(id));
  CHECK(j["ddim"] == 1);
  CHECK(j["dim"] == "infinite");
}

TEST_CASE("initial data of a third order ode") {
  VarSpace vs({"x"}, {"u"});
  RifCase c{vs, Ranking::orderly(vs), {}, {}, {}, ""};
  c.solved = {{Var::deriv("u", mi({3})), Expr(Var::deriv("u", mi({0})))}};
  InitialData id = initialData(c);
  CHECK(id.toString() == "[u(x0) = c1, u[x](x0) = c2, u[x,x](x0) = c3]");
  CHECK(hilbertFn(id).toString() == "1 + s + s^2");
  CHECK(hilbertFn(id).dim() == 3);
}

TEST_CASE("restriction and the empty system") {
  VarSpace vs({"x"}, {"u", "v"});
  RifCase c{vs, Ranking::orderly(vs), {}, {}, {}, ""};
  c.solved = {{Var::deriv("u", mi({1})), Expr(0L)}};
  CHECK(hilbertFn(initialData(c, std::vector<std::string>{"u"})).toString() == "1");
  CHECK(hilbertFn(initialData(c, std::vector<std::string>{"v"})).toString() == "1/(1-s)");
  CHECK(hilbertFn(initialData(c)).toString() == "1 + 1/(1-s)");
}

namespace {

// Orderly, but with the ties between variables and between unknowns broken
// the other way round.
Ranking reversedOrderly(const VarSpace& vs) {
  std::size_t n = vs.indep().size(), k = vs.unknowns().size();
  std::vector<std::vector<long>> m;
  std::vector<long> total(n + k, 0);
  for (std::size_t i = 0; i < n; ++i) total[i] = 1;
  m.push_back(total);
  if (k > 1) {
    std::vector<long> row(n + k, 0);
    for (std::size_t j = 0; j < k; ++j) row[n + j] = long(j);
    m.push_back(row);
  }
  for (std::size_t i = n; i-- > 1;) {
    std::vector<long> row(n + k, 0);
    row[i] = 1;
    m.push_back(row);
  }
  return Ranking(vs.indep(), vs.unknowns(), m);
}

}  // namespace

TEST_CASE("hilbert function does not depend on the orderly ranking") {
  for (const char* name : {"ez", "kp", "potburgers", "heat", "ode3"}) {
    std::string sys = name;
    CAPTURE(sys);
    DPS s = testsupport::loadSystem(name).dps;
    Ranking a = Ranking::orderly(s.vs), b = reversedOrderly(s.vs);
    REQUIRE(b.positive());
    RifCase ca = completeSingle(s, a, defaultOptions()), cb = completeSingle(s, b, defaultOptions());
    CHECK(hilbertFn(initialData(ca)) == hilbertFn(initialData(cb)));
    if (sys == "ez" || sys == "potburgers") {
      // The rankings pick different leaders here.
      bool differ = ca.solved.size() != cb.solved.size();
      for (std::size_t i = 0; !differ && i < ca.solved.size(); ++i) differ = ca.solved[i].leader != cb.solved[i].leader;
      CHECK(differ);
    }
  }
}

TEST_CASE("hilbert coefficients of golden cases match direct counts to order 6") {
  auto check = [](const RifCase& c) {
    HilbertFn h = hilbertFn(initialData(c));
    Reducer red(c);
    for (int k = 0; k <= 6; ++k) {
      long long count = 0;
      for (const auto& u : c.ranking.unknowns()) {
        int n = int(c.vs.argsOf(intern(u)).size());
        // Enumerate multi-indices of order k over n arguments.
        std::vector<int> a(std::size_t(n), 0);
        std::function<void(int, int)> walk = [&](int pos, int left) {
          if (pos == n - 1) {
            a[std::size_t(pos)] = left;
            MultiIndex m{};
            for (int i = 0; i < n; ++i) m[std::size_t(i)] = std::uint8_t(a[std::size_t(i)]);
            count += !red.isPrincipal(Var::deriv(u, m));
            return;
          }
          for (int e = 0; e <= left; ++e) {
            a[std::size_t(pos)] = e;
            walk(pos + 1, left - e);
          }
          a[std::size_t(pos)] = 0;
        };
        walk(0, k);
      }
      CHECK(h.coefficient(k) == count);
    }
  };
  for (const char* name : {"ez", "kp", "heat", "burgers", "potburgers", "ode3", "lgm4", "liouville"}) {
    std::string sys = name;
    CAPTURE(sys);
    SystemFile f = testsupport::loadSystem(name);
    RifCase R = completeSingle(f.dps, rankingFor(f), defaultOptions());
    check(R);
    if (sys == "ode3" || sys == "heat") check(detSys(R).sys);
  }
}
