#include "delin/symexpr.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "delin/errors.hpp"

namespace delin {

// ---------------------------------------------------------------- VarSpace

VarSpace::VarSpace(std::vector<std::string> indep, std::vector<std::string> dep, std::vector<FuncSig> funcs) {
  for (auto& s : indep) addIndep(s);
  for (auto& s : dep) addDep(s);
  for (auto& f : funcs) addFunc(std::move(f));
}

void VarSpace::index(const std::string& n, Role r, int pos) {
  NameId id = intern(n);
  if (roles_.count(id)) throw InvalidInput("name declared twice: " + n);
  roles_[id] = {r, pos};
}

void VarSpace::addIndep(const std::string& n) {
  if (indep_.size() >= std::size_t(kMaxArity)) throw InvalidInput("too many independent variables");
  index(n, Role::Indep, int(indep_.size()));
  indep_.push_back(n);
}

void VarSpace::addDep(const std::string& n) {
  index(n, Role::Dep, int(dep_.size()));
  dep_.push_back(n);
}

void VarSpace::addFunc(FuncSig f) {
  if (f.args.size() > std::size_t(kMaxArity)) throw InvalidInput("function arity too large: " + f.name);
  index(f.name, Role::Func, int(funcs_.size()));
  funcs_.push_back(std::move(f));
}

void VarSpace::addAux(AuxSym a) {
  index(a.name, Role::Aux, int(aux_.size()));
  aux_.push_back(std::move(a));
}

void VarSpace::addParam(const std::string& n) {
  index(n, Role::Param, int(params_.size()));
  params_.push_back(n);
}

VarSpace::Role VarSpace::role(NameId id) const {
  auto it = roles_.find(id);
  return it == roles_.end() ? Role::None : it->second.first;
}

int VarSpace::position(NameId id) const {
  auto it = roles_.find(id);
  return it == roles_.end() ? -1 : it->second.second;
}

const std::vector<std::string>& VarSpace::argsOf(NameId id) const {
  auto it = roles_.find(id);
  if (it != roles_.end() && it->second.first == Role::Func) return funcs_[it->second.second].args;
  return indep_;
}

std::vector<std::string> VarSpace::unknowns() const {
  std::vector<std::string> r = dep_;
  for (const auto& f : funcs_) r.push_back(f.name);
  return r;
}

void VarSpace::validate() const {
  if (indep_.empty()) throw InvalidInput("no independent variables declared");
  for (const auto& f : funcs_)
    for (const auto& a : f.args) {
      Role r = role(a);
      if (r != Role::Indep && r != Role::Dep)
        throw InvalidInput("argument " + a + " of " + f.name + " is not a variable");
    }
}

std::string VarSpace::varName(Var v) const {
  const std::string& base = nameOf(v.name());
  if (v.isSymbol() || v.order() == 0) return base;
  MultiIndex a = v.index();
  const auto& args = argsOf(v.name());
  std::string s = base + "[";
  bool first = true;
  for (int k = 0; k < kMaxArity; ++k) {
    for (int r = 0; r < a[k]; ++r) {
      if (!first) s += ",";
      first = false;
      s += k < int(args.size()) ? args[k] : ("#" + std::to_string(k));
    }
  }
  return s + "]";
}

// ---------------------------------------------------------------- total derivatives

Expr totalDeriveVar(const VarSpace& vs, Var v, int i) {
  switch (vs.role(v.name())) {
    case VarSpace::Role::Indep:
      if (v.isSymbol()) return vs.position(v.name()) == i ? Expr(1L) : Expr();
      break;
    case VarSpace::Role::Dep:
      if (v.isDeriv()) return Expr(v.withIndex(addIndex(v.index(), unitIndex(i))));
      break;
    case VarSpace::Role::Func: {
      if (!v.isDeriv()) break;
      const auto& args = vs.argsOf(v.name());
      Expr r;
      for (std::size_t a = 0; a < args.size(); ++a) {
        NameId an = intern(args[a]);
        Expr da;
        if (vs.role(an) == VarSpace::Role::Indep)
          da = vs.position(an) == i ? Expr(1L) : Expr();
        else
          da = Expr(Var::deriv(an, unitIndex(i)));
        if (!da.isZero()) r += Expr(v.withIndex(addIndex(v.index(), unitIndex(int(a))))) * da;
      }
      return r;
    }
    case VarSpace::Role::Aux: {
      const AuxSym& ax = vs.aux()[vs.position(v.name())];
      Expr r;
      for (const auto& [w, pd] : ax.partials) r += pd * totalDeriveVar(vs, w, i);
      return r;
    }
    case VarSpace::Role::Param:
      return Expr();
    case VarSpace::Role::None:
      break;
  }
  throw InvalidInput("cannot differentiate undeclared variable " + vs.varName(v));
}

namespace {

Expr totalDeriveImpl(const VarSpace& vs, const Poly& p, int i, std::unordered_map<Var, Expr>& cache) {
  std::vector<Term> acc;
  Expr extra;
  for (const auto& t : p.terms()) {
    for (const auto& f : t.m.factors()) {
      auto it = cache.find(f.v);
      if (it == cache.end()) it = cache.emplace(f.v, totalDeriveVar(vs, f.v, i)).first;
      const Expr& dv = it->second;
      if (dv.isZero()) continue;
      Monomial rest = t.m.withDegree(f.v, f.e - 1);
      mpq_class c = t.c * f.e;
      if (dv.isPolynomial()) {
        for (const auto& dt : dv.num().terms()) acc.push_back({rest * dt.m, c * dt.c});
      } else {
        extra += Expr(Poly(rest, c)) * dv;
      }
    }
  }
  Expr r(Poly::fromTerms(std::move(acc)));
  if (!extra.isZero()) r += extra;
  return r;
}

}  // namespace

Poly totalDerivePoly(const VarSpace& vs, const Poly& p, int i) {
  std::unordered_map<Var, Expr> cache;
  Expr r = totalDeriveImpl(vs, p, i, cache);
  if (!r.isPolynomial()) throw InvalidInput("total derivative is not polynomial");
  return r.num();
}

Expr totalDerive(const VarSpace& vs, const Expr& e, int i) {
  if (i < 0 || i >= vs.n()) throw InvalidInput("independent variable index out of range");
  std::unordered_map<Var, Expr> cache;
  Expr dn = totalDeriveImpl(vs, e.num(), i, cache);
  if (e.isPolynomial()) return dn;
  Expr dd = totalDeriveImpl(vs, e.den(), i, cache);
  if (dd.isZero()) return dn / Expr(e.den());
  if (dn.isPolynomial() && dd.isPolynomial()) {
    const Poly& d = e.den();
    Poly g = gcd(d, dd.num());
    Poly d1 = g.isConstant() ? d : divExact(d, g);
    Poly dd1 = g.isConstant() ? dd.num() : divExact(dd.num(), g);
    return Expr::fraction(dn.num() * d1 - e.num() * dd1, d * d1);
  }
  Expr den(e.den());
  return (dn * den - Expr(e.num()) * dd) / (den * den);
}

Expr totalDerive(const VarSpace& vs, const Expr& e, const MultiIndex& alpha) {
  Expr r = e;
  for (int i = 0; i < kMaxArity; ++i)
    for (int k = 0; k < alpha[i]; ++k) r = totalDerive(vs, r, i);
  return r;
}

// ---------------------------------------------------------------- jet decomposition

std::function<bool(Var)> jetPredicate(const VarSpace& vs, const std::vector<std::string>& unknowns) {
  std::set<NameId> baseDeps;
  for (const auto& u : unknowns) {
    NameId id = intern(u);
    if (vs.role(id) != VarSpace::Role::Func) continue;
    for (const auto& a : vs.argsOf(id))
      if (vs.role(a) == VarSpace::Role::Dep) baseDeps.insert(intern(a));
  }
  return [&vs, baseDeps](Var v) {
    if (!v.isDeriv() || vs.role(v.name()) != VarSpace::Role::Dep) return false;
    return !(v.order() == 0 && baseDeps.count(v.name()));
  };
}

std::vector<JetCoefficient> decomposeByJet(const Expr& e, const std::function<bool(Var)>& isJet) {
  std::vector<JetCoefficient> out;
  if (e.isZero()) return out;
  for (Var v : e.den().vars())
    if (isJet(v)) throw NonPolynomialInJet("jet variable in denominator");
  std::map<std::vector<std::uint64_t>, std::size_t> idx;
  std::vector<std::pair<Monomial, std::vector<Term>>> groups;
  for (const auto& t : e.num().terms()) {
    Monomial::Storage jet, rest;
    std::vector<std::uint64_t> key;
    for (const auto& f : t.m.factors()) {
      if (isJet(f.v)) {
        jet.push_back(f);
        key.push_back(f.v.bits());
        key.push_back(f.e);
      } else {
        rest.push_back(f);
      }
    }
    auto it = idx.find(key);
    if (it == idx.end()) {
      it = idx.emplace(key, groups.size()).first;
      groups.emplace_back(Monomial::fromSorted(std::move(jet)), std::vector<Term>{});
    }
    groups[it->second].second.push_back({Monomial::fromSorted(std::move(rest)), t.c});
  }
  for (auto& [m, terms] : groups)
    out.push_back({m, Expr::fraction(Poly::fromSortedTerms(std::move(terms)), e.den())});
  std::sort(out.begin(), out.end(), [](const JetCoefficient& a, const JetCoefficient& b) {
    return a.jets.compare(b.jets) > 0;
  });
  return out;
}

std::vector<Expr> decomposeByJet(const VarSpace& vs, const Expr& e, const std::vector<std::string>& unknowns) {
  std::vector<Expr> r;
  for (auto& jc : decomposeByJet(e, jetPredicate(vs, unknowns))) r.push_back(std::move(jc.coeff));
  return r;
}

// ---------------------------------------------------------------- trees

TreePtr Tree::number(const mpq_class& q) {
  auto t = std::make_shared<Tree>();
  t->kind = Kind::Num;
  t->num = q;
  return t;
}

TreePtr Tree::var(Var v) {
  auto t = std::make_shared<Tree>();
  t->kind = Kind::Atom;
  t->atom = v;
  return t;
}

TreePtr Tree::binary(Kind k, TreePtr a, TreePtr b) {
  auto t = std::make_shared<Tree>();
  t->kind = k;
  t->kids = {std::move(a), std::move(b)};
  return t;
}

TreePtr Tree::power(TreePtr a, int e) {
  auto t = std::make_shared<Tree>();
  t->kind = Kind::Pow;
  t->exponent = e;
  t->kids = {std::move(a)};
  return t;
}

TreePtr Tree::negate(TreePtr a) {
  auto t = std::make_shared<Tree>();
  t->kind = Kind::Neg;
  t->kids = {std::move(a)};
  return t;
}

Expr normalize(const Tree& t) {
  switch (t.kind) {
    case Tree::Kind::Num:
      return Expr(t.num);
    case Tree::Kind::Atom:
      return Expr(t.atom);
    case Tree::Kind::Add:
      return normalize(*t.kids[0]) + normalize(*t.kids[1]);
    case Tree::Kind::Sub:
      return normalize(*t.kids[0]) - normalize(*t.kids[1]);
    case Tree::Kind::Mul:
      return normalize(*t.kids[0]) * normalize(*t.kids[1]);
    case Tree::Kind::Div:
      return normalize(*t.kids[0]) / normalize(*t.kids[1]);
    case Tree::Kind::Pow:
      return normalize(*t.kids[0]).pow(t.exponent);
    case Tree::Kind::Neg:
      return -normalize(*t.kids[0]);
  }
  return Expr();
}

// ---------------------------------------------------------------- printing

std::string toString(const mpq_class& q) { return q.get_str(); }

std::string toString(const Poly& p, const VarSpace& vs) {
  if (p.isZero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& t : p.terms()) {
    mpq_class c = t.c;
    bool neg = c < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) s += "-";
    } else {
      s += neg ? " - " : " + ";
    }
    first = false;
    std::string mono;
    for (const auto& f : t.m.factors()) {
      if (!mono.empty()) mono += "*";
      mono += vs.varName(f.v);
      if (f.e > 1) mono += "^" + std::to_string(f.e);
    }
    if (mono.empty()) {
      s += toString(c);
    } else if (c == 1) {
      s += mono;
    } else {
      s += toString(c) + "*" + mono;
    }
  }
  return s;
}

std::string toString(const Expr& e, const VarSpace& vs) {
  if (e.isPolynomial()) return toString(e.num(), vs);
  std::string n = toString(e.num(), vs);
  std::string d = toString(e.den(), vs);
  bool simpleNum = e.num().size() == 1 && e.num().lc() > 0;
  bool simpleDen = e.den().size() == 1 && e.den().lc() == 1 && e.den().lt().m.factors().size() == 1;
  return (simpleNum ? n : "(" + n + ")") + "/" + (simpleDen ? d : "(" + d + ")");
}

}  // namespace delin
