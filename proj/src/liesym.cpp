#include "delin/liesym.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "delin/errors.hpp"
#include "delin/kernels.hpp"

namespace delin {

std::vector<std::string> VectorFieldAnsatz::all() const {
  std::vector<std::string> r = xi;
  r.insert(r.end(), eta.begin(), eta.end());
  return r;
}

namespace {

std::string freshName(const VarSpace& vs, std::string n) {
  while (vs.declared(n)) n += "_";
  return n;
}

std::vector<std::string> names(const VarSpace& vs, const std::string& base, int count, bool single) {
  std::vector<std::string> r;
  for (int i = 0; i < count; ++i) r.push_back(freshName(vs, single ? base : base + std::to_string(i + 1)));
  return r;
}

std::vector<std::string> baseArgs(const VarSpace& jet) {
  std::vector<std::string> args = jet.indep();
  args.insert(args.end(), jet.dep().begin(), jet.dep().end());
  return args;
}

long long binom(int n, int k) {
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void subIndices(const MultiIndex& g, int pos, MultiIndex& b, const std::function<void(const MultiIndex&)>& f) {
  if (pos == kMaxArity) {
    f(b);
    return;
  }
  for (int e = 0; e <= g[pos]; ++e) {
    b[pos] = std::uint8_t(e);
    subIndices(g, pos + 1, b, f);
  }
  b[pos] = 0;
}

// Parametric derivatives of order <= maxOrder, ordered like initial data.
std::vector<Var> parametricUpTo(const RifCase& c, int maxOrder) {
  InitialData id = initialData(c);
  std::vector<Var> out;
  auto addCone = [&](const IDItem& it) {
    int left = maxOrder - int(it.deriv.order());
    if (left < 0) return;
    std::function<void(std::size_t, MultiIndex, int)> rec = [&](std::size_t k, MultiIndex a, int rest) {
      if (k == it.free.size()) {
        out.push_back(it.deriv.withIndex(a));
        return;
      }
      for (int e = 0; e <= rest; ++e) {
        MultiIndex b = a;
        b[it.free[k]] = std::uint8_t(b[it.free[k]] + e);
        rec(k + 1, b, rest - e);
      }
    };
    rec(0, it.deriv.index(), left);
  };
  for (const auto& it : id.finite) addCone(it);
  for (const auto& it : id.infinite) addCone(it);
  std::stable_sort(out.begin(), out.end(), [&](Var a, Var b) {
    if (a.order() != b.order()) return a.order() < b.order();
    int ka = c.ranking.unknownIndex(a.name()), kb = c.ranking.unknownIndex(b.name());
    if (ka != kb) return ka < kb;
    return a.index() > b.index();
  });
  return out;
}

mpq_class evalAt(const Expr& e, const Point& z) {
  try {
    return evaluate(e, z);
  } catch (const DivisionByZeroExpr&) {
    throw IrregularPoint("a coefficient of the determining system is singular at the chosen point");
  } catch (const InvalidInput&) {
    throw UnresolvedPivot("coefficients depend on symbols without values at the chosen point");
  }
}

// Normal forms of derivatives of the infinitesimals as coefficient vectors
// over a fixed list of parametric derivatives.
class JetTable {
 public:
  JetTable(const DetSystem& S, std::vector<Var> coords) : S_(S), red_(S.sys), coords_(std::move(coords)) {
    for (std::size_t i = 0; i < coords_.size(); ++i) index_[coords_[i]] = int(i);
    comps_ = S.ansatz.all();
  }

  const std::vector<Var>& coords() const { return coords_; }
  int comps() const { return int(comps_.size()); }
  Var comp(int i, const MultiIndex& a) const { return Var::deriv(comps_[i], a); }
  int compIndex(NameId id) const {
    for (std::size_t i = 0; i < comps_.size(); ++i)
      if (intern(comps_[i]) == id) return int(i);
    return -1;
  }

  const std::vector<Expr>& vec(Var w) {
    auto it = sym_.find(w);
    if (it != sym_.end()) return it->second;
    Expr e = red_.reduce(Expr(w));
    std::vector<std::vector<Term>> parts(coords_.size());
    for (const auto& t : e.num().terms()) {
      int k = -1;
      Monomial::Storage rest;
      for (const auto& f : t.m.factors()) {
        auto ix = index_.find(f.v);
        if (ix != index_.end() && f.e == 1 && k < 0)
          k = ix->second;
        else if (S_.sys.ranking.isUnknown(f.v))
          throw InvalidInput("normal form outside the parametric coordinates; is the system linear homogeneous?");
        else
          rest.push_back(f);
      }
      if (k < 0) throw InvalidInput("determining system is not homogeneous");
      parts[k].push_back({Monomial::fromSorted(std::move(rest)), t.c});
    }
    std::vector<Expr> v(coords_.size());
    for (std::size_t k = 0; k < coords_.size(); ++k)
      if (!parts[k].empty()) v[k] = Expr::fraction(Poly::fromTerms(parts[k]), e.den());
    return sym_.emplace(w, std::move(v)).first->second;
  }

  const std::vector<mpq_class>& num(Var w, const Point& z) {
    auto it = num_.find(w);
    if (it != num_.end()) return it->second;
    const auto& v = vec(w);
    std::vector<mpq_class> r(v.size());
    for (std::size_t k = 0; k < v.size(); ++k)
      if (!v[k].isZero()) r[k] = evalAt(v[k], z);
    return num_.emplace(w, std::move(r)).first->second;
  }

  // Visits the Leibniz terms of D^gamma of component f of [nu, mu]:
  // (binomial, D^beta comp i, D^{gamma-beta+e_i} comp f).
  void leibniz(Var out, const std::function<void(long long, Var, Var)>& f) const {
    int fc = compIndex(out.name());
    MultiIndex g = out.index(), b{};
    subIndices(g, 0, b, [&](const MultiIndex& beta) {
      long long c = 1;
      for (int l = 0; l < kMaxArity; ++l) c *= binom(g[l], beta[l]);
      MultiIndex rest = subIndex(g, beta);
      for (int i = 0; i < comps(); ++i) f(c, comp(i, beta), comp(fc, addIndex(rest, unitIndex(i))));
    });
  }

 private:
  const DetSystem& S_;
  Reducer red_;
  std::vector<Var> coords_;
  std::unordered_map<Var, int> index_;
  std::vector<std::string> comps_;
  std::unordered_map<Var, std::vector<Expr>> sym_;
  std::unordered_map<Var, std::vector<mpq_class>> num_;
};

using Tensor = std::vector<std::vector<std::vector<mpq_class>>>;

// t[a][b][k]: coordinate `outs[k]` of [e_a, e_b] at z.
Tensor numericBrackets(JetTable& T, const std::vector<Var>& outs, const Point& z) {
  std::size_t d = T.coords().size();
  Tensor t(d, std::vector<std::vector<mpq_class>>(d, std::vector<mpq_class>(outs.size())));
  for (std::size_t k = 0; k < outs.size(); ++k) {
    T.leibniz(outs[k], [&](long long c, Var wa, Var wb) {
      const auto& A = T.num(wa, z);
      const auto& B = T.num(wb, z);
      for (std::size_t a = 0; a < d; ++a) {
        if (A[a] == 0) continue;
        for (std::size_t b = 0; b < d; ++b) {
          if (B[b] == 0 || a == b) continue;
          mpq_class v = mpq_class(long(c)) * A[a] * B[b];
          t[a][b][k] += v;
          t[b][a][k] -= v;
        }
      }
    });
  }
  return t;
}

std::vector<Expr> symbolicBracket(JetTable& T, const std::vector<Var>& outs, std::size_t a, std::size_t b) {
  std::vector<Expr> row(outs.size());
  for (std::size_t k = 0; k < outs.size(); ++k) {
    Expr acc;
    T.leibniz(outs[k], [&](long long c, Var wa, Var wb) {
      const auto& A = T.vec(wa);
      const auto& B = T.vec(wb);
      Expr term = A[a] * B[b] - A[b] * B[a];
      if (!term.isZero()) acc = acc + Expr(c) * term;
    });
    row[k] = acc;
  }
  return row;
}

// Row-reduces `rows` in place; returns pivot columns.
std::vector<int> rref(std::vector<std::vector<mpq_class>>& rows) {
  std::vector<int> piv;
  std::size_t r = 0, cols = rows.empty() ? 0 : rows[0].size();
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
      for (std::size_t j = 0; j < cols; ++j) rows[i][j] -= f * rows[r][j];
    }
    piv.push_back(int(c));
    ++r;
  }
  rows.resize(r);
  return piv;
}

std::string combination(const std::vector<mpq_class>& v, const std::string& sym) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] == 0) continue;
    mpq_class a = abs(v[k]);
    if (!s.empty())
      s += v[k] < 0 ? " - " : " + ";
    else if (v[k] < 0)
      s += "-";
    if (a != 1) s += toString(a) + "*";
    s += sym + std::to_string(k + 1);
  }
  return s.empty() ? "0" : s;
}

}  // namespace

VectorFieldAnsatz defaultAnsatz(const VarSpace& jet, const std::string& xi, const std::string& eta) {
  bool single = jet.n() == 1 && jet.m() == 1;
  return {names(jet, xi, jet.n(), single), names(jet, eta, jet.m(), single)};
}

VarSpace prolongationSpace(const VarSpace& jet, const VectorFieldAnsatz& a) {
  VarSpace ext = jet;
  auto args = baseArgs(jet);
  for (const auto& f : a.all()) ext.addFunc({f, args});
  return ext;
}

VarSpace symmetrySpace(const VarSpace& jet, const VectorFieldAnsatz& a) {
  VarSpace s(baseArgs(jet), a.all());
  for (const auto& p : jet.params()) s.addParam(p);
  return s;
}

Expr toSymmetrySpace(const VarSpace& jet, const Expr& e) {
  Bindings b;
  for (Var v : e.vars()) {
    if (!v.isDeriv() || jet.role(v.name()) != VarSpace::Role::Dep) continue;
    if (v.order() != 0) throw InvalidInput("jet variable " + jet.varName(v) + " left in a determining equation");
    b.emplace(v, Expr(Var::symbol(nameOf(v.name()))));
  }
  return b.empty() ? e : substitute(e, b);
}

Expr prolongedEta(const VarSpace& ext, const VectorFieldAnsatz& a, int j, const MultiIndex& alpha) {
  const std::string& u = ext.dep().at(j);
  Expr q = Expr(Var::deriv(a.eta.at(j), {}));
  for (int i = 0; i < ext.n(); ++i) q = q - Expr(Var::deriv(a.xi[i], {})) * Expr(Var::deriv(u, unitIndex(i)));
  Expr r = totalDerive(ext, q, alpha);
  for (int i = 0; i < ext.n(); ++i)
    r = r + Expr(Var::deriv(a.xi[i], {})) * Expr(Var::deriv(u, addIndex(alpha, unitIndex(i))));
  return r;
}

Expr applyProlongation(const VarSpace& ext, const VectorFieldAnsatz& a, const Expr& e) {
  Expr r;
  for (Var v : e.vars()) {
    auto role = ext.role(v.name());
    if (role == VarSpace::Role::Indep && v.isSymbol()) {
      r = r + Expr(Var::deriv(a.xi.at(ext.position(v.name())), {})) * e.diff(v);
    } else if (role == VarSpace::Role::Dep && v.isDeriv()) {
      r = r + prolongedEta(ext, a, ext.position(v.name()), v.index()) * e.diff(v);
    } else if (role == VarSpace::Role::Aux) {
      throw InvalidInput("auxiliary symbols are not supported in symmetry computations");
    }
  }
  return r;
}

std::vector<Expr> determiningEquations(const RifCase& R, const VectorFieldAnsatz& a) {
  VarSpace ext = prolongationSpace(R.vs, a);
  RifCase Rx = R;
  Rx.vs = ext;
  Reducer red(Rx);
  std::vector<Expr> src;
  for (const auto& s : R.solved) src.push_back(Expr(s.leader) - s.rhs);
  for (const auto& c : R.constraints) src.push_back(c);
  std::vector<Expr> out;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& E : src) {
    Expr r = red.reduce(applyProlongation(ext, a, E));
    for (auto& c : decomposeByJet(ext, Expr(r.num()), a.all())) {
      Expr s = Expr(primitiveZ(toSymmetrySpace(R.vs, c).num()));
      if (s.isZero()) continue;
      auto key = std::make_pair(s.num().hash(), s.num().size());
      if (seen.count(key) && std::find(out.begin(), out.end(), s) != out.end()) continue;
      seen.insert(key);
      out.push_back(s);
    }
  }
  return out;
}

DetSystem makeDetSystem(const VarSpace& sym, const VectorFieldAnsatz& a, const std::vector<Expr>& eqs,
                        const CompleteOptions& o) {
  DPS s{sym, eqs, {}};
  Ranking r = Ranking::orderly(sym.indep(), a.all());
  return {completeSingle(s, r, o), a};
}

DetSystem detSys(const RifCase& R, const VectorFieldAnsatz& a, const CompleteOptions& o) {
  return makeDetSystem(symmetrySpace(R.vs, a), a, determiningEquations(R, a), o);
}

DetSystem detSys(const RifCase& R, const CompleteOptions& o) { return detSys(R, defaultAnsatz(R.vs), o); }

Point regularPoint(const DetSystem& S, int skip) {
  static const int primes[] = {1, 2, 3, 5, 7, 11, 13, 17, 19, 23};
  const auto& xs = S.sys.vs.indep();
  int found = 0;
  for (int k = 0; k < 64; ++k) {
    Point z;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mpq_class v(1);
      if (k > 0) {
        v = mpq_class(primes[(k + 2 * i) % 10] + k / 10, primes[(k + i + 1) % 10 / 3]);
        v.canonicalize();
      }
      z[Var::symbol(xs[i])] = v;
    }
    bool ok = true;
    for (const auto& s : S.sys.solved) {
      try {
        ok = ok && evaluate(s.rhs.den(), z) != 0;
      } catch (const InvalidInput&) {
        throw UnresolvedPivot("coefficients depend on symbols without values");
      }
    }
    if (ok && found++ == skip) return z;
  }
  throw IrregularPoint("no regular point among the candidates");
}

// ---------------------------------------------------------------- structure

std::vector<mpq_class> LieStructure::bracket(const std::vector<mpq_class>& a, const std::vector<mpq_class>& b) const {
  std::vector<mpq_class> r(basis.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (b[j] == 0) continue;
      for (std::size_t k = 0; k < r.size(); ++k) r[k] += a[i] * b[j] * c[i][j][k];
    }
  }
  return r;
}

bool LieStructure::abelian() const {
  for (const auto& a : c)
    for (const auto& b : a)
      for (const auto& v : b)
        if (v != 0) return false;
  return true;
}

bool LieStructure::jacobi() const { return jacobiViolations(*this) == 0; }

std::vector<std::string> LieStructure::relations(const std::string& symbol) const {
  std::vector<std::string> r;
  for (int i = 0; i < dim(); ++i)
    for (int j = i + 1; j < dim(); ++j)
      r.push_back("[" + symbol + std::to_string(i + 1) + "," + symbol + std::to_string(j + 1) +
                  "] = " + combination(c[i][j], symbol));
  return r;
}

namespace {

LieStructure structureAt(const DetSystem& S, const InitialData& id, const Point& z0) {
  std::vector<Var> coords;
  for (const auto& it : id.finite) coords.push_back(it.deriv);
  JetTable T(S, coords);
  LieStructure L;
  for (Var v : coords) L.basis.push_back(S.sys.vs.varName(v));
  L.c = numericBrackets(T, coords, z0);
  L.z0 = z0;
  return L;
}

}  // namespace

LieStructure structureConstants(const DetSystem& S, const Point& z0) {
  InitialData id = initialData(S.sys);
  if (!id.infinite.empty()) throw InvalidInput("structure constants need a finite dimensional algebra");
  LieStructure L = structureAt(S, id, z0);
  // A second point only flags whether the initial-data basis changes the constants.
  for (int skip = 0; skip < 3; ++skip) {
    Point z1 = regularPoint(S, skip);
    if (z1 == z0) continue;
    try {
      L.pointDependent = structureAt(S, id, z1).c != L.c;
    } catch (const IrregularPoint&) {
      continue;
    }
    break;
  }
  return L;
}

LieStructure structureConstants(const DetSystem& S) {
  for (int skip = 0; skip < 8; ++skip) {
    try {
      return structureConstants(S, regularPoint(S, skip));
    } catch (const IrregularPoint&) {
    }
  }
  throw IrregularPoint("no regular point found for the structure constants");
}

DerivedAlgebra derivedStructure(const LieStructure& L) {
  std::vector<std::vector<mpq_class>> rows;
  for (int i = 0; i < L.dim(); ++i)
    for (int j = i + 1; j < L.dim(); ++j) rows.push_back(L.c[i][j]);
  auto piv = rref(rows);
  DerivedAlgebra D;
  D.basis = rows;
  D.structure.z0 = L.z0;
  D.structure.pointDependent = L.pointDependent;
  std::size_t r = rows.size();
  for (const auto& w : rows) D.structure.basis.push_back(combination(w, "Y"));
  D.structure.c.assign(r, std::vector<std::vector<mpq_class>>(r, std::vector<mpq_class>(r)));
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b) {
      auto v = L.bracket(rows[a], rows[b]);
      std::vector<mpq_class> check(L.dim());
      for (std::size_t k = 0; k < r; ++k) {
        D.structure.c[a][b][k] = v[piv[k]];
        for (int l = 0; l < L.dim(); ++l) check[l] += v[piv[k]] * rows[k][l];
      }
      if (check != v) throw InvalidInput("derived subspace is not closed; structure constants are inconsistent");
    }
  return D;
}

DetSystem derivedDetSys(const DetSystem& S, const DerivedOptions& o) {
  InitialData id = initialData(S.sys);
  bool finite = id.infinite.empty();
  int top = 0;
  for (const auto& it : id.finite) top = std::max(top, int(it.deriv.order()));
  int inOrder = finite ? top : (o.truncation > 0 ? o.truncation : S.sys.maxOrder() + 1);
  int outOrder = finite ? top : inOrder - 1;
  std::vector<Var> ins = parametricUpTo(S.sys, inOrder);
  std::vector<Var> outs = parametricUpTo(S.sys, outOrder);

  Point z0;
  Tensor t;
  std::unique_ptr<JetTable> T;
  for (int skip = 0;; ++skip) {
    try {
      z0 = regularPoint(S, skip);
      T = std::make_unique<JetTable>(S, ins);
      t = numericBrackets(*T, outs, z0);
      break;
    } catch (const IrregularPoint&) {
      if (skip > 8) throw;
    }
  }

  // Independent brackets at z0, chosen greedily.
  std::vector<std::vector<mpq_class>> basis;
  std::vector<std::pair<std::size_t, std::size_t>> chosen;
  for (std::size_t a = 0; a < ins.size(); ++a)
    for (std::size_t b = a + 1; b < ins.size(); ++b) {
      auto trial = basis;
      trial.push_back(t[a][b]);
      if (rref(trial).size() > basis.size()) {
        basis.push_back(t[a][b]);
        chosen.push_back({a, b});
      }
    }

  // Symbolic row reduction with pivots chosen where the value at z0 is nonzero.
  std::vector<std::vector<Expr>> sym;
  std::vector<std::vector<mpq_class>> num;
  for (auto [a, b] : chosen) {
    sym.push_back(symbolicBracket(*T, outs, a, b));
    num.push_back(t[a][b]);
  }
  std::vector<int> piv;
  std::size_t r = 0;
  for (std::size_t c = 0; c < outs.size() && r < sym.size(); ++c) {
    std::size_t p = r;
    while (p < num.size() && num[p][c] == 0) ++p;
    if (p == num.size()) continue;
    std::swap(sym[r], sym[p]);
    std::swap(num[r], num[p]);
    Expr inv = Expr(1L) / sym[r][c];
    mpq_class ninv = 1 / num[r][c];
    for (std::size_t j = 0; j < outs.size(); ++j) {
      sym[r][j] = sym[r][j] * inv;
      num[r][j] *= ninv;
    }
    for (std::size_t i = 0; i < sym.size(); ++i) {
      if (i == r || sym[i][c].isZero()) continue;
      Expr f = sym[i][c];
      mpq_class nf = num[i][c];
      for (std::size_t j = 0; j < outs.size(); ++j) {
        sym[i][j] = sym[i][j] - f * sym[r][j];
        num[i][j] -= nf * num[r][j];
      }
    }
    piv.push_back(int(c));
    ++r;
  }

  std::vector<Expr> eqs = S.sys.toDPS().eqs;
  for (std::size_t f = 0; f < outs.size(); ++f) {
    if (std::find(piv.begin(), piv.end(), int(f)) != piv.end()) continue;
    Expr e = Expr(outs[f]);
    for (std::size_t i = 0; i < piv.size(); ++i) e = e - sym[i][f] * Expr(outs[piv[i]]);
    eqs.push_back(Expr(e.num()));
  }
  try {
    return makeDetSystem(S.sys.vs, S.ansatz, eqs, o.complete);
  } catch (const CompletionBudgetExceeded& e) {
    if (finite) throw;
    throw DerivedFallback(e.what());
  }
}

// ---------------------------------------------------------------- linearization test

LGMResult lgmLinTest(const RifCase& R, const DetSystem& S) {
  if (R.vs.n() != 1 || R.vs.m() != 1 || R.solved.size() != 1 || !R.constraints.empty())
    throw NotAnODE("expected a single ODE solved for its highest derivative");
  LGMResult res;
  res.order = int(R.solved[0].leader.order());
  int d = res.order;
  if (d < 1) throw NotAnODE("the ODE must have order at least 1");
  InitialData id = initialData(S.sys);
  if (id.infinite.empty()) res.dimL = (long long)id.size();
  if (d == 1) {
    res.linearizable = true;
    return res;
  }
  if (!res.dimL) return res;
  long long dim = *res.dimL;
  if ((d == 2 && dim == 8) || (d > 2 && dim == d + 4)) {
    res.linearizable = true;
  } else if (d > 2 && (dim == d + 1 || dim == d + 2)) {
    DerivedAlgebra D = derivedStructure(structureConstants(S));
    res.dimDerived = D.structure.dim();
    res.derivedAbelian = D.structure.abelian();
    res.linearizable = *res.derivedAbelian && *res.dimDerived == d;
  }
  return res;
}

LGMResult lgmLinTest(const RifCase& R) { return lgmLinTest(R, detSys(R)); }

nlohmann::json toJson(const LieStructure& L) {
  nlohmann::json j;
  j["dim"] = L.dim();
  j["basis"] = L.basis;
  j["relations"] = L.relations();
  j["pointDependent"] = L.pointDependent;
  for (const auto& [v, q] : L.z0) j["point"][nameOf(v.name())] = toString(q);
  return j;
}

}  // namespace delin
