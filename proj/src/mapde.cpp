#include "delin/mapde.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "delin/errors.hpp"

namespace delin {

namespace {

std::string fresh(const std::vector<const VarSpace*>& spaces, std::string n) {
  auto used = [&](const std::string& s) {
    for (auto* vs : spaces)
      if (vs->declared(s)) return true;
    return false;
  };
  while (used(n)) n += "_";
  return n;
}

using Matrix = std::vector<std::vector<Expr>>;

Expr det(const Matrix& a) {
  std::size_t n = a.size();
  if (n == 0) return Expr(1L);
  if (n == 1) return a[0][0];
  Expr r;
  for (std::size_t c = 0; c < n; ++c) {
    if (a[0][c].isZero()) continue;
    Matrix minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<Expr> row;
      for (std::size_t j = 0; j < n; ++j)
        if (j != c) row.push_back(a[i][j]);
      minor.push_back(row);
    }
    Expr t = a[0][c] * det(minor);
    r = c % 2 ? r - t : r + t;
  }
  return r;
}

// adj(a)[c][r] = (-1)^(r+c) det(minor(r, c)), so a * adj(a) = det(a) I.
Matrix adjugate(const Matrix& a) {
  std::size_t n = a.size();
  Matrix adj(n, std::vector<Expr>(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      Matrix minor;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == r) continue;
        std::vector<Expr> row;
        for (std::size_t j = 0; j < n; ++j)
          if (j != c) row.push_back(a[i][j]);
        minor.push_back(row);
      }
      Expr d = det(minor);
      adj[c][r] = (r + c) % 2 ? -d : d;
    }
  return adj;
}

std::vector<int> rref(std::vector<std::vector<mpq_class>>& rows, std::size_t cols) {
  std::vector<int> piv;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[r], rows[p]);
    mpq_class inv = 1 / rows[r][c];
    for (auto& x : rows[r]) x *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      mpq_class f = rows[i][c];
      for (std::size_t j = c; j < cols; ++j) rows[i][j] -= f * rows[r][j];
    }
    piv.push_back(int(c));
    ++r;
  }
  rows.resize(r);
  return piv;
}

// Basis of {c : rows c = 0}; vector for free column f involves f and earlier columns only.
std::vector<std::vector<mpq_class>> nullspace(std::vector<std::vector<mpq_class>> rows, std::size_t cols) {
  auto piv = rref(rows, cols);
  std::vector<bool> isPiv(cols);
  for (int p : piv) isPiv[p] = true;
  std::vector<std::vector<mpq_class>> out;
  for (std::size_t f = 0; f < cols; ++f) {
    if (isPiv[f]) continue;
    std::vector<mpq_class> v(cols);
    v[f] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -rows[r][f];
    out.push_back(v);
  }
  return out;
}

// Dependent variables as symbols, as in the symmetry space.
Expr jetToSym(const VarSpace& jet, const Expr& e) { return toSymmetrySpace(jet, e); }

Expr symToJet(const VarSpace& jet, const Expr& e) {
  Bindings b;
  for (Var v : e.vars())
    if (v.isSymbol() && jet.role(v.name()) == VarSpace::Role::Dep) b.emplace(v, Expr(Var::deriv(v.name(), {})));
  return b.empty() ? e : substitute(e, b);
}

// The symmetry space with the auxiliary symbols of the jet space, whose
// partials are rewritten in terms of the dependent-variable symbols.
VarSpace withAux(VarSpace vs, const VarSpace& jet) {
  for (const auto& a : jet.aux()) {
    if (vs.declared(a.name)) continue;
    AuxSym s{a.name, {}};
    for (const auto& [v, pd] : a.partials) {
      Var w = v;
      if (v.isDeriv() && jet.role(v.name()) == VarSpace::Role::Dep) {
        if (v.order() != 0) throw InvalidInput("auxiliary " + a.name + " depends on a derivative");
        w = Var::symbol(v.name());
      }
      s.partials.push_back({w, jetToSym(jet, pd)});
    }
    vs.addAux(s);
  }
  return vs;
}

// Replaces derivatives of the named functions by derivatives of their values.
class FunctionBinder {
 public:
  FunctionBinder(const VarSpace& vs, std::unordered_map<NameId, Expr> values) : vs_(vs), values_(std::move(values)) {}

  Expr operator()(const Expr& e) {
    Bindings b;
    for (Var v : e.vars()) {
      if (!v.isDeriv() || !values_.count(v.name())) continue;
      b.emplace(v, value(v));
    }
    return b.empty() ? e : substitute(e, b);
  }

  Expr value(Var v) {
    auto it = cache_.find(v);
    if (it != cache_.end()) return it->second;
    Expr r = totalDerive(vs_, values_.at(v.name()), v.index());
    cache_.emplace(v, r);
    return r;
  }

 private:
  const VarSpace& vs_;
  std::unordered_map<NameId, Expr> values_;
  std::unordered_map<Var, Expr> cache_;
};

bool involvesAny(const Expr& e, const std::set<NameId>& names) {
  for (Var v : e.vars())
    if (v.isDeriv() && names.count(v.name())) return true;
  return false;
}

std::set<NameId> nameSet(const std::vector<std::string>& v) {
  std::set<NameId> s;
  for (const auto& n : v) s.insert(intern(n));
  return s;
}

}  // namespace

std::string toString(Verdict v) {
  switch (v) {
    case Verdict::True:
      return "true";
    case Verdict::False:
      return "false";
    case Verdict::Undetermined:
      return "undetermined";
  }
  return "undetermined";
}

// ---------------------------------------------------------------- mapping system

MapAnsatz defaultMapAnsatz(const VarSpace& jet, const VarSpace& sym) {
  int n = jet.n(), m = jet.m();
  bool single = n == 1 && m == 1;
  std::vector<const VarSpace*> spaces{&jet, &sym};
  auto make = [&](const std::string& base, int count) {
    std::vector<std::string> r;
    for (int i = 0; i < count; ++i) r.push_back(fresh(spaces, single ? base : base + std::to_string(i + 1)));
    return r;
  };
  MapAnsatz a;
  a.psi = make("psi", n);
  a.phi = make("phi", m);
  a.xih = make("xih", n);
  a.etah = make("etah", m);
  for (const auto& x : jet.indep()) a.targetIndep.push_back(x + "h");
  for (const auto& u : jet.dep()) a.targetDep.push_back(u + "h");
  std::vector<std::string> rows = a.psi;
  rows.insert(rows.end(), a.phi.begin(), a.phi.end());
  for (const auto& f : rows) {
    std::vector<Expr> row;
    for (int c = 0; c < n + m; ++c) row.push_back(Expr(Var::deriv(f, unitIndex(c))));
    a.jacobian.push_back(row);
  }
  a.jac = det(a.jacobian);
  return a;
}

MappingSystem assembleMappingSystem(const DetSystem& Sp, const VarSpace& jet, const MapAnsatz& map) {
  MappingSystem ms;
  ms.map = map;
  ms.ansatz = Sp.ansatz;
  VarSpace vs = withAux(Sp.sys.vs, jet);
  for (const auto* names : {&map.xih, &map.etah, &map.phi, &map.psi})
    for (const auto& f : *names) vs.addDep(f);
  int n = jet.n(), m = jet.m();
  DPS base = Sp.sys.toDPS();
  DPS M{vs, base.eqs, base.ineqs};
  auto fx = [&](const std::string& f, int c) { return Expr(Var::deriv(f, unitIndex(c))); };
  auto inf = [&](int c) { return Expr(Var::deriv(Sp.ansatz.all()[c], {})); };
  for (int k = 0; k < n; ++k) M.eqs.push_back(Expr(Var::deriv(map.xih[k], {})));
  for (int k = 0; k < n; ++k) {
    Expr e = Expr(Var::deriv(map.xih[k], {}));
    for (int c = 0; c < n + m; ++c) e = e - inf(c) * fx(map.psi[k], c);
    M.eqs.push_back(e);
  }
  for (int l = 0; l < m; ++l) {
    Expr e = Expr(Var::deriv(map.etah[l], {}));
    for (int c = 0; c < n + m; ++c) e = e - inf(c) * fx(map.phi[l], c);
    M.eqs.push_back(e);
  }
  // etah^j_{uh^k} = 0 in (x,u) coordinates: grad_{zh} = adj(J)^T grad_z / det J.
  Matrix adj = adjugate(map.jacobian);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      Expr e;
      for (int c = 0; c < n + m; ++c) e = e + adj[c][n + k] * fx(map.etah[j], c);
      M.eqs.push_back(e);
    }
  M.ineqs.push_back(map.jac);
  std::vector<std::string> b1 = map.xih;
  b1.insert(b1.end(), map.etah.begin(), map.etah.end());
  for (const auto& f : Sp.ansatz.all()) b1.push_back(f);
  ms.blocks = {b1, map.phi, map.psi};
  ms.ranking = Ranking::block(vs, ms.blocks);
  ms.M = std::move(M);
  return ms;
}

// ---------------------------------------------------------------- pre-equivalence

PreEquivResult preEquivTest(const RifCase& R, const InitialData& idR, const InitialData& idS,
                            const InitialData& idSp) {
  (void)R;
  PreEquivResult res;
  res.dimInfo = {hilbertFn(idR), hilbertFn(idS), hilbertFn(idSp)};
  const auto& [hR, hS, hSp] = res.dimInfo;
  auto dimStr = [](const HilbertFn& h) { return h.finite() ? std::to_string(h.dim()) : std::string("infinity"); };
  if (!hR.finite()) {
    if (hS.finite()) res.failed.push_back("T1: dim S = " + dimStr(hS) + " is finite while dim R is infinite");
    if (hSp.finite()) res.failed.push_back("T2: dim S' = " + dimStr(hSp) + " is finite while dim R is infinite");
    if (!hS.finite() && diffDim(hS) < diffDim(hR))
      res.failed.push_back("T3: d(S) = " + std::to_string(diffDim(hS)) + " < " + std::to_string(diffDim(hR)) +
                           " = d(R)");
    if (!hSp.finite() && diffDim(hSp) < diffDim(hR))
      res.failed.push_back("T4: d(S') = " + std::to_string(diffDim(hSp)) + " < " + std::to_string(diffDim(hR)) +
                           " = d(R)");
  } else {
    long long d = hR.dim();
    if (hS.finite() && hS.dim() < d + 1)
      res.failed.push_back("T5: dim S = " + dimStr(hS) + " < " + std::to_string(d + 1) + " = d+1");
    if (hSp.finite() && hSp.dim() < d)
      res.failed.push_back("T6: dim S' = " + dimStr(hSp) + " < " + std::to_string(d) + " = d");
  }
  if (!res.failed.empty()) res.linearizable = false;
  return res;
}

// ---------------------------------------------------------------- targets

std::vector<std::string> LinearTarget::strings() const {
  std::vector<std::string> out;
  for (const auto& e : eqs) {
    std::string s = vs.varName(e.leader) + " = ";
    bool first = true;
    for (const auto& [v, c] : e.terms) {
      std::string cs = toString(c, coeffSpace);
      bool simple = c.isPolynomial() && c.num().size() == 1;
      if (!first) s += " + ";
      first = false;
      s += (simple ? cs : "(" + cs + ")") + "*" + vs.varName(v);
    }
    if (first) s += "0";
    out.push_back(s);
  }
  return out;
}

DPS LinearTarget::toDPS() const {
  if (!explicitCoefficients) throw InvalidInput("target coefficients are not explicit");
  DPS d{vs, {}, {}};
  for (const auto& e : eqs) {
    Expr x = Expr(e.leader);
    for (const auto& [v, c] : e.terms) x = x - c * Expr(v);
    d.eqs.push_back(x);
  }
  return d;
}

namespace {

using Binder = std::function<Expr(const Expr&)>;

// With `bind`, the map is substituted before elimination so that pivots are
// chosen among coefficients that are nonzero for that map.
LinearTarget extractTargetWith(const RifCase& Q, const MappingSystem& ms, int order, const Binder* bind) {
  const VarSpace& vs = Q.vs;
  const MapAnsatz& map = ms.map;
  int n = int(map.psi.size()), m = int(map.phi.size());
  Reducer red(Q);
  Matrix adj = adjugate(map.jacobian);
  Expr jac = red.reduce(map.jac);
  if (jac.isZero() || (bind && (*bind)(jac).isZero())) throw SingularJacobian("Jacobian of the map vanishes in this case");
  std::set<NameId> block1 = nameSet(ms.blocks[0]);

  auto dz = [&](const Expr& e, int dir, bool target) {
    Expr r;
    int col = target ? dir : n + dir;
    for (int c = 0; c < n + m; ++c)
      if (!adj[c][col].isZero()) r = r + adj[c][col] * totalDerive(vs, e, c);
    return red.reduce(r / jac);
  };

  LinearTarget T;
  T.vs = VarSpace(map.targetIndep, map.targetDep);
  T.coeffSpace = vs;
  Ranking tr = Ranking::orderly(T.vs);

  // Target derivatives up to `order`, ascending.
  std::vector<Var> derivs;
  std::function<void(int, int, MultiIndex)> gen = [&](int l, int pos, MultiIndex a) {
    int ord = 0;
    for (int i = 0; i < n; ++i) ord += a[i];
    if (pos == n) {
      derivs.push_back(Var::deriv(map.targetDep[l], a));
      return;
    }
    for (int e = 0; ord + e <= order; ++e) {
      MultiIndex b = a;
      b[pos] = std::uint8_t(e);
      gen(l, pos + 1, b);
    }
  };
  for (int l = 0; l < m; ++l) gen(l, 0, MultiIndex{});
  std::sort(derivs.begin(), derivs.end(), [&](Var a, Var b) { return tr.less(a, b); });

  std::unordered_map<Var, Expr> value;  // target derivative -> expression over Q's space
  auto valueOf = [&](Var t) -> const Expr& {
    auto it = value.find(t);
    if (it != value.end()) return it->second;
    int l = 0;
    while (map.targetDep[l] != nameOf(t.name())) ++l;
    Expr r;
    if (t.order() == 0) {
      r = red.reduce(Expr(Var::deriv(map.etah[l], {})));
    } else {
      MultiIndex a = t.index();
      int i = 0;
      while (a[i] == 0) ++i;
      a[i]--;
      Expr prev = value.at(t.withIndex(a));
      r = dz(prev, i, true);
    }
    return value.emplace(t, r).first->second;
  };

  using Vec = std::map<Var, Expr>;
  auto vectorize = [&](const Expr& e) {
    std::map<Var, std::vector<Term>> parts;
    for (const auto& t : e.num().terms()) {
      std::optional<Var> key;
      Monomial::Storage rest;
      for (const auto& f : t.m.factors()) {
        if (f.v.isDeriv() && block1.count(f.v.name())) {
          if (key || f.e != 1) throw TargetNotLinear("target infinitesimal is not linear in the parametric data");
          key = f.v;
        } else {
          rest.push_back(f);
        }
      }
      if (!key) throw TargetNotLinear("inhomogeneous term in the target infinitesimal");
      parts[*key].push_back({Monomial::fromSorted(std::move(rest)), t.c});
    }
    Vec v;
    for (auto& [k, ts] : parts) v[k] = Expr::fraction(Poly::fromTerms(ts), e.den());
    return v;
  };

  struct Row {
    Var pivot;
    Vec v;
    std::map<Var, Expr> combo;  // over target derivatives
  };
  std::vector<Row> basis;
  std::vector<Var> leaders;
  auto isPrincipal = [&](Var t) {
    for (Var l : leaders) {
      if (l.name() != t.name()) continue;
      bool ge = true;
      for (int i = 0; i < kMaxArity; ++i) ge = ge && t.index()[i] >= l.index()[i];
      if (ge) return true;
    }
    return false;
  };
  auto rankKey = [&](const Vec& v) {
    std::optional<Var> best;
    for (const auto& [k, c] : v)
      if (!c.isZero() && (!best || Q.ranking.less(*best, k))) best = k;
    return best;
  };

  for (Var t : derivs) {
    if (isPrincipal(t)) continue;
    Vec v = vectorize(valueOf(t));
    if (bind)
      for (auto& [k, c] : v) c = (*bind)(c);
    std::map<Var, Expr> combo{{t, Expr(1L)}};
    for (const auto& row : basis) {
      auto it = v.find(row.pivot);
      if (it == v.end() || it->second.isZero()) continue;
      Expr f = it->second;
      for (const auto& [k, c] : row.v) v[k] = v[k] - f * c;
      for (const auto& [k, c] : row.combo) combo[k] = combo[k] - f * c;
    }
    for (auto& [k, c] : v) c = red.reduce(c);
    auto piv = rankKey(v);
    if (piv) {
      Expr inv = Expr(1L) / v[*piv];
      for (auto& [k, c] : v) c = c * inv;
      for (auto& [k, c] : combo) c = c * inv;
      basis.push_back({*piv, v, combo});
      continue;
    }
    // combo = 0 expresses t through lower target derivatives.
    TargetEq eq{t, {}};
    for (const auto& [k, c] : combo) {
      if (k == t) continue;
      Expr coeff = red.reduce(-c);
      if (coeff.isZero()) continue;
      for (int j = 0; j < m && !bind; ++j)
        if (!dz(coeff, j, false).isZero())
          throw TargetNotLinear("a target coefficient depends on " + map.targetDep[j]);
      eq.terms.push_back({k, coeff});
    }
    std::sort(eq.terms.begin(), eq.terms.end(), [&](const auto& a, const auto& b) { return tr.less(b.first, a.first); });
    T.eqs.push_back(eq);
    leaders.push_back(t);
  }
  return T;
}

}  // namespace

LinearTarget extractTarget(const RifCase& Q, const MappingSystem& ms, int order) {
  return extractTargetWith(Q, ms, order, nullptr);
}

namespace {

// f(xh) with f(psi(z)) == a(z), f rational of bounded degree.
std::optional<Expr> reconstruct(const Expr& a, const std::vector<Expr>& psi, const std::vector<std::string>& xh) {
  std::set<Var> varsSet;
  for (Var v : a.vars()) varsSet.insert(v);
  for (const auto& p : psi)
    for (Var v : p.vars()) varsSet.insert(v);
  std::vector<Var> vars(varsSet.begin(), varsSet.end());
  std::size_t n = psi.size();
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> num(-40, 40), den(1, 9);
  for (int D = 0; D <= 6; ++D) {
    std::vector<std::vector<int>> monos;
    std::function<void(std::size_t, int, std::vector<int>)> rec = [&](std::size_t k, int left, std::vector<int> e) {
      if (k == n) {
        monos.push_back(e);
        return;
      }
      for (int d = 0; d <= left; ++d) {
        e.push_back(d);
        rec(k + 1, left - d, e);
        e.pop_back();
      }
    };
    rec(0, D, {});
    std::size_t K = monos.size();
    std::vector<std::vector<mpq_class>> rows;
    int attempts = 0;
    while (rows.size() < 2 * K + 6 && attempts++ < 400) {
      Point z;
      for (Var v : vars) {
        mpq_class q(num(rng), den(rng));
        q.canonicalize();
        z[v] = q;
      }
      try {
        mpq_class av = evaluate(a, z);
        std::vector<mpq_class> pv;
        for (const auto& p : psi) pv.push_back(evaluate(p, z));
        std::vector<mpq_class> row(2 * K);
        for (std::size_t k = 0; k < K; ++k) {
          mpq_class t = 1;
          for (std::size_t i = 0; i < n; ++i)
            for (int e = 0; e < monos[k][i]; ++e) t *= pv[i];
          row[k] = t;
          row[K + k] = -av * t;
        }
        rows.push_back(row);
      } catch (const DivisionByZeroExpr&) {
      }
    }
    for (const auto& v : nullspace(rows, 2 * K)) {
      Expr P, Qd;
      for (std::size_t k = 0; k < K; ++k) {
        Expr mono(1L);
        for (std::size_t i = 0; i < n; ++i) mono = mono * Expr(Var::symbol(xh[i])).pow(monos[k][i]);
        if (v[k] != 0) P = P + Expr(v[k]) * mono;
        if (v[K + k] != 0) Qd = Qd + Expr(v[K + k]) * mono;
      }
      if (Qd.isZero()) continue;
      Expr f = P / Qd;
      Bindings b;
      for (std::size_t i = 0; i < n; ++i) b.emplace(Var::symbol(xh[i]), psi[i]);
      Expr back;
      try {
        back = substitute(f, b);
      } catch (const DivisionByZeroExpr&) {
        continue;
      }
      if ((back - a).isZero()) return f;
    }
  }
  return std::nullopt;
}

std::unordered_map<NameId, Expr> mapValues(const MapAnsatz& map, const std::vector<MapComponent>& comps) {
  std::unordered_map<NameId, Expr> values;
  auto find = [&](const std::string& target) {
    for (const auto& c : comps)
      if (c.target == target) return c.expr;
    throw InvalidInput("map has no component for " + target);
  };
  for (std::size_t k = 0; k < map.psi.size(); ++k) values[intern(map.psi[k])] = find(map.targetIndep[k]);
  for (std::size_t l = 0; l < map.phi.size(); ++l) values[intern(map.phi[l])] = find(map.targetDep[l]);
  return values;
}

}  // namespace

LinearTarget specializeTarget(const RifCase& Q, const MappingSystem& ms, int order,
                              const std::vector<MapComponent>& map) {
  // Source dependent variables are coordinates of the mapping space.
  std::vector<MapComponent> onSpace;
  for (const auto& mc : map) {
    Bindings b;
    for (Var v : mc.expr.vars())
      if (v.isDeriv() && v.order() == 0 && Q.vs.role(v.name()) == VarSpace::Role::Indep)
        b.emplace(v, Expr(Var::symbol(v.name())));
    onSpace.push_back({mc.target, b.empty() ? mc.expr : substitute(mc.expr, b)});
  }
  FunctionBinder binder(Q.vs, mapValues(ms.map, onSpace));
  Binder bind = [&](const Expr& e) { return binder(e); };
  LinearTarget T = extractTargetWith(Q, ms, order, &bind);
  std::vector<Expr> psi;
  for (const auto& f : ms.map.psi) psi.push_back(binder(Expr(Var::deriv(f, {}))));
  LinearTarget E;
  E.vs = T.vs;
  E.coeffSpace = T.vs;
  E.explicitCoefficients = true;
  for (const auto& eq : T.eqs) {
    TargetEq out{eq.leader, {}};
    for (const auto& [v, a] : eq.terms) {
      auto f = reconstruct(a, psi, ms.map.targetIndep);
      if (!f) throw TargetNotLinear("coefficient " + toString(a, Q.vs) + " is not a function of the target variables");
      if (!f->isZero()) out.terms.push_back({v, *f});
    }
    E.eqs.push_back(out);
  }
  return E;
}

std::optional<RifCase> normalizeCase(const RifCase& Q, const MappingSystem& ms, const LinearTarget& T,
                                     const HilbertFn& hR, const CompleteOptions& o) {
  if (T.vs.n() != 1 || T.vs.m() != 1 || T.eqs.size() != 1) throw InvalidInput("normalization needs a scalar ODE target");
  const TargetEq& eq = T.eqs[0];
  int d = int(eq.leader.order());
  DPS sys = Q.toDPS();
  for (int k = d - 1; k >= std::max(d - 2, 1); --k) {
    MultiIndex a{};
    a[0] = std::uint8_t(k);
    Var t = eq.leader.withIndex(a);
    for (const auto& [v, c] : eq.terms)
      if (v == t) sys.eqs.push_back(Expr(c.num()));
  }
  CompleteOptions co = o;
  co.casesplit = true;
  co.mindim = hR;
  co.designated = ms.blocks[0];
  for (auto& c : completeCases(sys, ms.ranking, co).cases)
    if (hilbertEqual(hilbertFn(c, ms.blocks[0]), hR)) return std::move(c);
  return std::nullopt;
}

// ---------------------------------------------------------------- verification

bool verifyMap(const RifCase& R, const DPS& target, const std::vector<MapComponent>& map) {
  const VarSpace& jet = R.vs;
  const VarSpace& tv = target.vs;
  int n = jet.n(), m = jet.m();
  if (tv.n() != n || tv.m() != m) throw InvalidInput("target and source have different numbers of variables");
  auto find = [&](const std::string& t) {
    for (const auto& c : map)
      if (c.target == t) return c.expr;
    throw InvalidInput("map has no component for " + t);
  };
  std::vector<Expr> psi, phi;
  for (const auto& x : tv.indep()) psi.push_back(find(x));
  for (const auto& u : tv.dep()) phi.push_back(find(u));
  for (const auto* list : {&psi, &phi})
    for (const auto& e : *list) {
      if (!e.den().isConstant()) throw NonPolynomialBinding(toString(e, jet));
      for (Var v : e.vars())
        if (v.isDeriv() && v.order() > 0)
          throw NonPolynomialBinding("binding depends on the derivative " + jet.varName(v));
    }

  // Point Jacobian over (x,u).
  VarSpace sym = withAux(symmetrySpace(jet, {{}, {}}), jet);
  Matrix J;
  for (const auto* list : {&psi, &phi})
    for (const auto& e : *list) {
      std::vector<Expr> row;
      Expr s = jetToSym(jet, e);
      for (int c = 0; c < n + m; ++c) row.push_back(totalDerive(sym, s, c));
      J.push_back(row);
    }
  if (det(J).isZero()) throw SingularJacobian("the map is not invertible");

  Reducer red(R);
  Matrix A(n, std::vector<Expr>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A[i][j] = red.reduce(totalDerive(jet, psi[i], j));
  Expr detA = det(A);
  if (red.reduce(detA).isZero()) throw SingularJacobian("the new independent variables are dependent on solutions");
  Matrix adjA = adjugate(A);

  std::unordered_map<Var, Expr> memo;
  std::function<Expr(int, const MultiIndex&)> uh = [&](int l, const MultiIndex& a) -> Expr {
    Var key = Var::deriv(tv.dep()[l], a);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    Expr r;
    int i = 0;
    while (i < n && a[i] == 0) ++i;
    if (i == n) {
      r = phi[l];
    } else {
      MultiIndex b = a;
      b[i]--;
      Expr prev = uh(l, b);
      Expr s;
      for (int j = 0; j < n; ++j) s = s + adjA[j][i] * totalDerive(jet, prev, j);
      r = red.reduce(s / detA);
    }
    return memo.emplace(key, r).first->second;
  };

  for (const auto& e : target.eqs) {
    Bindings b;
    for (Var v : e.vars()) {
      switch (tv.role(v.name())) {
        case VarSpace::Role::Indep:
          b.emplace(v, psi[tv.position(v.name())]);
          break;
        case VarSpace::Role::Dep:
          b.emplace(v, uh(tv.position(v.name()), v.index()));
          break;
        default:
          break;
      }
    }
    Expr s = substitute(e, b);
    if (!red.reduce(s).isZero()) return false;
  }
  return true;
}

bool verifyMap(const RifCase& R, const LinearTarget& T, const std::vector<MapComponent>& map) {
  return verifyMap(R, T.toDPS(), map);
}

// ---------------------------------------------------------------- heuristic integration

namespace {

struct Ansatz {
  std::vector<Expr> basis;  // monomials in (x,u) times aux powers
};

Ansatz polynomialAnsatz(const VarSpace& space, int degree) {
  std::vector<Var> z;
  for (const auto& x : space.indep()) z.push_back(Var::symbol(x));
  std::vector<Expr> monos;
  std::function<void(std::size_t, int, Expr)> rec = [&](std::size_t k, int left, Expr acc) {
    if (k == z.size()) {
      monos.push_back(acc);
      return;
    }
    for (int d = 0; d <= left; ++d) rec(k + 1, left - d, acc * Expr(z[k]).pow(d));
  };
  rec(0, degree, Expr(1L));
  std::stable_sort(monos.begin(), monos.end(),
                   [](const Expr& a, const Expr& b) { return a.num().totalDegree() < b.num().totalDegree(); });
  Ansatz A;
  A.basis = monos;
  for (const auto& ax : space.aux())
    for (const auto& mo : monos) A.basis.push_back(mo * Expr(Var::symbol(ax.name)));
  return A;
}

// Solutions of linear homogeneous equations for f within the ansatz.
std::vector<Expr> solveLinear(const VarSpace& space, const std::vector<Expr>& eqs, const std::string& f,
                              const Ansatz& A) {
  NameId fid = intern(f);
  std::vector<Poly> nums;
  for (const auto& e : eqs) {
    Poly p = e.num();
    bool linear = true;
    for (const auto& t : p.terms()) {
      int count = 0;
      for (const auto& fac : t.m.factors())
        if (fac.v.isDeriv() && fac.v.name() == fid) count += int(fac.e);
      linear = linear && count == 1;
    }
    // Equations nonlinear in f only filter the candidates later.
    if (linear) nums.push_back(p);
  }
  // Column b: the equations applied to basis function b.
  std::vector<std::vector<Poly>> applied(A.basis.size());
  for (std::size_t b = 0; b < A.basis.size(); ++b) {
    FunctionBinder bind(space, {{fid, A.basis[b]}});
    for (const auto& p : nums) {
      Expr v = bind(Expr(p));
      if (!v.den().isConstant()) return {};
      applied[b].push_back(v.num().scaled(1 / v.den().constant()));
    }
  }
  // Rows: (equation, monomial) coefficients.
  std::vector<std::vector<mpq_class>> rows;
  for (std::size_t q = 0; q < nums.size(); ++q) {
    std::vector<Monomial> monos;
    for (std::size_t b = 0; b < A.basis.size(); ++b)
      for (const auto& t : applied[b][q].terms())
        if (std::find(monos.begin(), monos.end(), t.m) == monos.end()) monos.push_back(t.m);
    for (const auto& mo : monos) {
      std::vector<mpq_class> row(A.basis.size());
      for (std::size_t b = 0; b < A.basis.size(); ++b)
        for (const auto& t : applied[b][q].terms())
          if (t.m == mo) row[b] = t.c;
      rows.push_back(row);
    }
  }
  std::vector<Expr> out;
  for (const auto& v : nullspace(rows, A.basis.size())) {
    Expr e;
    for (std::size_t b = 0; b < v.size(); ++b)
      if (v[b] != 0) e = e + Expr(v[b]) * A.basis[b];
    out.push_back(e);
  }
  return out;
}

// Combinations of per-component candidates, closest to the identity first.
std::vector<std::vector<std::size_t>> combos(const std::vector<std::vector<Expr>>& cands,
                                             const std::function<bool(std::size_t, const Expr&)>& own,
                                             std::size_t limit) {
  std::vector<std::vector<std::size_t>> all{{}};
  for (const auto& c : cands) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& p : all)
      for (std::size_t i = 0; i < c.size(); ++i) {
        auto q = p;
        q.push_back(i);
        next.push_back(q);
      }
    all = std::move(next);
    if (all.size() > 20000) break;
  }
  auto score = [&](const std::vector<std::size_t>& p) {
    int s = 0;
    for (std::size_t k = 0; k < p.size(); ++k) s += own(k, cands[k][p[k]]) ? 1 : 0;
    return s;
  };
  auto sum = [](const std::vector<std::size_t>& p) {
    std::size_t s = 0;
    for (auto i : p) s += i;
    return s;
  };
  std::stable_sort(all.begin(), all.end(), [&](const auto& a, const auto& b) {
    int sa = score(a), sb = score(b);
    if (sa != sb) return sa > sb;
    return sum(a) < sum(b);
  });
  if (all.size() > limit) all.resize(limit);
  return all;
}

}  // namespace

std::optional<std::vector<MapComponent>> heuristicIntegrate(const RifCase& Q, const MappingSystem& ms,
                                                            const VarSpace& jet, int maxDegree) {
  VarSpace space = withAux(Q.vs, jet);
  const MapAnsatz& map = ms.map;
  int n = int(map.psi.size());
  std::set<NameId> block1 = nameSet(ms.blocks[0]), phis = nameSet(map.phi), psis = nameSet(map.psi);

  std::vector<Expr> eqs;
  for (const auto& s : Q.solved) eqs.push_back(Expr(s.leader) - s.rhs);
  for (const auto& c : Q.constraints) eqs.push_back(c);
  std::vector<Expr> psiEqs, phiEqs, pivots;
  for (const auto& e : eqs) {
    if (involvesAny(e, block1)) continue;
    (involvesAny(e, phis) ? phiEqs : psiEqs).push_back(e);
  }
  for (const auto& p : Q.pivots)
    if (!involvesAny(p, block1)) pivots.push_back(p);
  pivots.push_back(map.jac);

  auto eqsFor = [&](const std::vector<Expr>& list, const std::string& f, const std::set<NameId>& group) {
    std::vector<Expr> out;
    NameId id = intern(f);
    for (const auto& e : list) {
      bool mine = false, other = false;
      for (Var v : e.vars()) {
        if (!v.isDeriv() || !group.count(v.name())) continue;
        (v.name() == id ? mine : other) = true;
      }
      // Coupled equations are checked once every component is chosen.
      if (mine && !other) out.push_back(e);
    }
    return out;
  };
  auto ownCoordinate = [&](int c) {
    return [&, c](std::size_t k, const Expr& e) { return !totalDerive(space, e, c + int(k)).isZero(); };
  };
  auto pivotsHold = [&](const std::unordered_map<NameId, Expr>& values, bool complete) {
    FunctionBinder bind(space, values);
    for (const auto& p : pivots) {
      bool known = true;
      for (Var v : p.vars())
        if (v.isDeriv() && (phis.count(v.name()) || psis.count(v.name())) && !values.count(v.name())) known = false;
      if (!known && !complete) continue;
      if (bind(p).isZero()) return false;
    }
    return true;
  };

  for (int D = 1; D <= maxDegree; ++D) {
    Ansatz A = polynomialAnsatz(space, D);
    std::vector<std::vector<Expr>> psiCands;
    for (const auto& f : map.psi) {
      auto sols = solveLinear(space, eqsFor(psiEqs, f, psis), f, A);
      std::vector<Expr> keep;
      for (const auto& s : sols)
        if (!s.isConstant()) keep.push_back(s);
      psiCands.push_back(keep);
    }
    for (const auto& psiPick : combos(psiCands, ownCoordinate(0), 60)) {
      std::unordered_map<NameId, Expr> values;
      for (int k = 0; k < n; ++k) values[intern(map.psi[k])] = psiCands[k][psiPick[k]];
      if (!pivotsHold(values, false)) continue;
      FunctionBinder bind(space, values);
      bool psiOk = true;
      for (const auto& e : psiEqs) psiOk = psiOk && bind(e).isZero();
      if (!psiOk) continue;
      std::vector<Expr> subst;
      for (const auto& e : phiEqs) subst.push_back(bind(e));
      std::vector<std::vector<Expr>> phiCands;
      bool ok = true;
      for (const auto& f : map.phi) {
        auto sols = solveLinear(space, eqsFor(subst, f, phis), f, A);
        if (sols.empty()) ok = false;
        phiCands.push_back(sols);
      }
      if (!ok) continue;
      for (const auto& phiPick : combos(phiCands, ownCoordinate(n), 200)) {
        auto all = values;
        for (std::size_t l = 0; l < map.phi.size(); ++l) all[intern(map.phi[l])] = phiCands[l][phiPick[l]];
        if (!pivotsHold(all, true)) continue;
        // Remaining equations hold for the chosen pair.
        FunctionBinder full(space, all);
        bool sat = true;
        for (const auto& e : eqs)
          if (!involvesAny(e, block1) && !full(e).isZero()) sat = false;
        if (!sat) continue;
        std::vector<MapComponent> out;
        for (int k = 0; k < n; ++k) out.push_back({map.targetIndep[k], symToJet(jet, all[intern(map.psi[k])])});
        for (std::size_t l = 0; l < map.phi.size(); ++l)
          out.push_back({map.targetDep[l], symToJet(jet, all[intern(map.phi[l])])});
        return out;
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- driver

MapDEReport runMapDE(const RifCase& R, const MapDEOptions& o) {
  MapDEReport rep;
  auto note = [&](const std::string& s) { rep.diagnostics.push_back(s); };
  if (!R.constraints.empty()) throw InvalidInput("MapDE needs a leading linear system without constraints");
  for (const auto& s : R.solved)
    if (s.leader.order() == 0) throw InvalidInput("MapDE needs leaders of order at least 1");

  InitialData idR = initialData(R);
  note("ID(R) = " + idR.toString());
  DetSystem S, Sp;
  try {
    S = detSys(R, o.complete);
    if (o.useFallbackS) {
      Sp = S;
      note("S' replaced by S on request");
    } else {
      try {
        DerivedOptions dopt;
        dopt.complete = o.complete;
        Sp = derivedDetSys(S, dopt);
      } catch (const DerivedFallback& e) {
        Sp = S;
        note(std::string("S' replaced by S: ") + e.what());
      }
    }
  } catch (const CompletionBudgetExceeded& e) {
    note(std::string("symmetry completion over budget: ") + e.what());
    rep.verdict = Verdict::Undetermined;
    return rep;
  }
  InitialData idS = initialData(S.sys), idSp = initialData(Sp.sys);
  note("ID(S) = " + idS.toString());
  note("ID(S') = " + idSp.toString());

  PreEquivResult pre = preEquivTest(R, idR, idS, idSp);
  rep.dimInfo = pre.dimInfo;
  rep.failedTests = pre.failed;
  if (R.vs.n() == 1 && R.vs.m() == 1 && R.solved.size() == 1) {
    try {
      rep.lgm = lgmLinTest(R, S);
      note(std::string("LGM test: ") + (rep.lgm->linearizable ? "linearizable" : "not linearizable"));
    } catch (const Error& e) {
      note(std::string("LGM test skipped: ") + e.what());
    }
  }
  if (pre.linearizable == false) {
    for (const auto& f : pre.failed) note("PreEquivTest: " + f);
    rep.verdict = Verdict::False;
    return rep;
  }

  MapAnsatz map = defaultMapAnsatz(R.vs, Sp.sys.vs);
  MappingSystem ms = assembleMappingSystem(Sp, R.vs, map);
  CompleteOptions co = o.complete;
  co.casesplit = true;
  co.mindim = rep.dimInfo.R;
  co.designated = ms.blocks[0];
  Completion P;
  try {
    P = completeCases(ms.M, ms.ranking, co);
  } catch (const CompletionBudgetExceeded& e) {
    note(std::string("mapping system completion over budget: ") + e.what());
    rep.verdict = Verdict::Undetermined;
    rep.mapping = ms;
    return rep;
  }
  rep.completedCases = int(P.cases.size());
  note("mapping system: " + std::to_string(P.cases.size()) + " cases, " + std::to_string(P.pruned.size()) +
       " pruned by mindim, " + std::to_string(P.inconsistent.size()) + " inconsistent");
  for (auto& c : P.cases) {
    HilbertFn h = hilbertFn(c, ms.blocks[0]);
    bool keep = hilbertEqual(h, rep.dimInfo.R);
    note("case " + c.path + ": HF = " + h.toString() + (keep ? " (retained)" : " (rejected)"));
    if (keep) rep.cases.push_back(std::move(c));
  }
  rep.mapping = ms;
  if (rep.cases.empty()) {
    rep.verdict = Verdict::False;
    return rep;
  }
  rep.verdict = Verdict::True;

  if (o.allCases) {
    for (std::size_t i = 0; i < rep.cases.size(); ++i) rep.selected.push_back(i);
  } else {
    for (int c : o.caseSelect)
      if (c >= 1 && std::size_t(c) <= rep.cases.size()) rep.selected.push_back(std::size_t(c - 1));
  }
  int order = R.maxOrder();
  for (std::size_t c : rep.selected) {
    try {
      rep.targets.push_back(extractTarget(rep.cases[c], ms, order));
    } catch (const Error& e) {
      note("case " + std::to_string(c + 1) + ": target extraction failed: " + e.what());
    }
  }
  if (o.normalizeTarget && !rep.selected.empty() && !rep.targets.empty()) {
    try {
      rep.normalizedCase = normalizeCase(rep.cases[rep.selected[0]], ms, rep.targets[0], rep.dimInfo.R, o.complete);
      note(rep.normalizedCase ? "normalized target case found" : "normalization leaves no case of full dimension");
    } catch (const Error& e) {
      note(std::string("normalization skipped: ") + e.what());
    }
  }
  if (!o.integrate) return rep;
  if (rep.normalizedCase) {
    if (auto found = heuristicIntegrate(*rep.normalizedCase, ms, R.vs)) {
      rep.map = found;
      rep.mapCase = rep.selected[0];
      try {
        rep.explicitTarget = specializeTarget(*rep.normalizedCase, ms, order, *found);
        rep.mapVerified = verifyMap(R, *rep.explicitTarget, *found);
        note(std::string("normalized case: explicit map ") + (*rep.mapVerified ? "verified" : "failed verification"));
      } catch (const Error& e) {
        note(std::string("explicit target failed: ") + e.what());
      }
      return rep;
    }
    note("normalized case: no explicit map found");
  }
  // Selected cases first; any retained case yields a valid linearization.
  std::vector<std::size_t> tryOrder = rep.selected;
  for (std::size_t c = 0; c < rep.cases.size(); ++c)
    if (std::find(tryOrder.begin(), tryOrder.end(), c) == tryOrder.end()) tryOrder.push_back(c);
  for (std::size_t c : tryOrder) {
    auto found = heuristicIntegrate(rep.cases[c], ms, R.vs);
    if (!found) {
      note("case " + std::to_string(c + 1) + ": no explicit map found");
      continue;
    }
    rep.map = found;
    rep.mapCase = c;
    try {
      LinearTarget E = specializeTarget(rep.cases[c], ms, order, *found);
      rep.explicitTarget = E;
      rep.mapVerified = verifyMap(R, E, *found);
      note("case " + std::to_string(c + 1) + ": explicit map " +
           (*rep.mapVerified ? "verified" : "failed verification"));
    } catch (const Error& e) {
      note(std::string("explicit target failed: ") + e.what());
    }
    break;
  }
  return rep;
}

nlohmann::json toJson(const LinearTarget& t) {
  nlohmann::json j;
  j["explicit"] = t.explicitCoefficients;
  j["equations"] = t.strings();
  j["indep"] = t.vs.indep();
  j["dep"] = t.vs.dep();
  return j;
}

nlohmann::json toJson(const MapDEReport& r, const VarSpace& jet) {
  nlohmann::json j;
  j["verdict"] = toString(r.verdict);
  j["dimInfo"] = toJson(r.dimInfo);
  j["cases"] = nlohmann::json::array();
  for (const auto& c : r.cases) j["cases"].push_back(toJson(c));
  j["targets"] = nlohmann::json::array();
  for (const auto& t : r.targets) j["targets"].push_back(toJson(t));
  if (r.explicitTarget) j["explicitTarget"] = toJson(*r.explicitTarget);
  if (r.map) {
    j["mapCase"] = *r.mapCase + 1;
    for (const auto& m : *r.map) j["map"][m.target] = toString(m.expr, jet);
    if (r.mapVerified) j["mapVerified"] = *r.mapVerified;
  }
  if (r.normalizedCase) j["normalizedCase"] = toJson(*r.normalizedCase);
  if (r.lgm) j["lgm"] = r.lgm->linearizable;
  j["failedTests"] = r.failedTests;
  j["diagnostics"] = r.diagnostics;
  return j;
}

}  // namespace delin
