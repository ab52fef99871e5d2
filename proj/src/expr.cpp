#include "delin/expr.hpp"

#include <algorithm>

#include "delin/errors.hpp"

namespace delin {

namespace {

void makeMonic(Poly& num, Poly& den) {
  mpq_class c = den.lc();
  if (c != 1) {
    mpq_class inv = 1 / c;
    num = num.scaled(inv);
    den = den.scaled(inv);
  }
}

}  // namespace

Expr Expr::fraction(const Poly& num, const Poly& den) {
  if (den.isZero()) throw DivisionByZeroExpr("denominator is zero");
  Expr e;
  if (num.isZero()) return e;
  if (den.isConstant()) {
    e.num_ = num.scaled(1 / den.constant());
    e.den_ = Poly(1L);
    return e;
  }
  Poly g = gcd(num, den);
  if (g.isConstant()) {
    e.num_ = num;
    e.den_ = den;
  } else {
    e.num_ = divExact(num, g);
    e.den_ = divExact(den, g);
  }
  makeMonic(e.num_, e.den_);
  if (e.den_.isConstant()) {
    e.num_ = e.num_.scaled(1 / e.den_.constant());
    e.den_ = Poly(1L);
  }
  return e;
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.isZero()) return b;
  if (b.isZero()) return a;
  Expr r;
  if (a.den_ == b.den_) {
    Poly n = a.num_ + b.num_;
    if (a.den_.isOne()) {
      r.num_ = std::move(n);
      return r;
    }
    return Expr::fraction(n, a.den_);
  }
  if (a.den_.isOne()) {
    r.num_ = a.num_ * b.den_ + b.num_;
    r.den_ = b.den_;
    return r;
  }
  if (b.den_.isOne()) {
    r.num_ = a.num_ + b.num_ * a.den_;
    r.den_ = a.den_;
    return r;
  }
  Poly g = gcd(a.den_, b.den_);
  Poly ad = a.den_, bd = b.den_;
  if (!g.isConstant()) {
    ad = divExact(a.den_, g);
    bd = divExact(b.den_, g);
  }
  Poly n = a.num_ * bd + b.num_ * ad;
  Poly d = ad * b.den_;
  if (n.isZero()) return r;
  if (!g.isConstant()) {
    Poly g2 = gcd(n, g);
    if (!g2.isConstant()) {
      n = divExact(n, g2);
      d = divExact(d, g2);
    }
  }
  r.num_ = std::move(n);
  r.den_ = std::move(d);
  makeMonic(r.num_, r.den_);
  return r;
}

Expr Expr::operator-() const {
  Expr r = *this;
  r.num_ = -r.num_;
  return r;
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  Expr r;
  if (a.isZero() || b.isZero()) return r;
  if (a.den_.isOne() && b.den_.isOne()) {
    r.num_ = a.num_ * b.num_;
    return r;
  }
  Poly an = a.num_, bn = b.num_, ad = a.den_, bd = b.den_;
  if (!bd.isOne()) {
    Poly g = gcd(an, bd);
    if (!g.isConstant()) an = divExact(an, g), bd = divExact(bd, g);
  }
  if (!ad.isOne()) {
    Poly g = gcd(bn, ad);
    if (!g.isConstant()) bn = divExact(bn, g), ad = divExact(ad, g);
  }
  r.num_ = an * bn;
  r.den_ = ad * bd;
  makeMonic(r.num_, r.den_);
  return r;
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.isZero()) throw DivisionByZeroExpr("division by zero expression");
  Expr inv;
  inv.num_ = b.den_;
  inv.den_ = b.num_;
  makeMonic(inv.num_, inv.den_);
  return a * inv;
}

Expr Expr::pow(int k) const {
  if (k < 0) return Expr(1L) / pow(-k);
  Expr r;
  if (k == 0) return Expr(1L);
  if (isZero()) return r;
  r.num_ = num_.pow(unsigned(k));
  r.den_ = den_.pow(unsigned(k));
  return r;
}

int Expr::compare(const Expr& o) const {
  int c = num_.compare(o.num_);
  return c ? c : den_.compare(o.den_);
}

std::vector<Var> Expr::vars() const {
  std::vector<Var> a = num_.vars(), b = den_.vars(), r;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

Expr Expr::diff(Var v) const {
  if (den_.isOne()) return Expr(num_.diff(v));
  Poly dd = den_.diff(v);
  Poly nd = num_.diff(v);
  if (dd.isZero()) return fraction(nd, den_);
  Poly g = gcd(den_, dd);
  Poly d1 = g.isConstant() ? den_ : divExact(den_, g);
  Poly dd1 = g.isConstant() ? dd : divExact(dd, g);
  return fraction(nd * d1 - num_ * dd1, den_ * d1);
}

// ---------------------------------------------------------------- substitution

Expr substitute(const Poly& p, const Bindings& b) {
  if (b.empty() || p.isConstant()) return Expr(p);
  // Bound variables present in p.
  std::vector<Var> pv = p.vars();
  struct Bound {
    Var v;
    const Expr* e;
    int group;
    std::vector<Poly> npow;
  };
  std::vector<Bound> bound;
  for (Var v : pv) {
    auto it = b.find(v);
    if (it != b.end()) bound.push_back({v, &it->second, -1, {}});
  }
  if (bound.empty()) return Expr(p);
  struct Group {
    Poly den;
    std::uint32_t maxExp = 0;
    std::vector<Poly> dpow;
  };
  std::vector<Group> groups;
  for (auto& bd : bound) {
    if (bd.e->isPolynomial()) continue;
    for (std::size_t k = 0; k < groups.size(); ++k)
      if (groups[k].den == bd.e->den()) bd.group = int(k);
    if (bd.group < 0) {
      bd.group = int(groups.size());
      groups.push_back({bd.e->den(), 0, {}});
    }
  }
  auto findBound = [&](Var v) -> Bound* {
    for (auto& bd : bound)
      if (bd.v == v) return &bd;
    return nullptr;
  };
  // Per-term group exponents.
  std::vector<std::vector<std::uint32_t>> sExp(p.size(), std::vector<std::uint32_t>(groups.size(), 0));
  for (std::size_t t = 0; t < p.size(); ++t) {
    for (const auto& f : p.terms()[t].m.factors()) {
      Bound* bd = findBound(f.v);
      if (bd && bd->group >= 0) sExp[t][bd->group] += f.e;
    }
    for (std::size_t k = 0; k < groups.size(); ++k) groups[k].maxExp = std::max(groups[k].maxExp, sExp[t][k]);
  }
  auto npow = [](Bound& bd, std::uint32_t e) -> const Poly& {
    if (bd.npow.empty()) bd.npow.push_back(Poly(1L));
    while (bd.npow.size() <= e) bd.npow.push_back(bd.npow.back() * bd.e->num());
    return bd.npow[e];
  };
  auto dpow = [](Group& g, std::uint32_t e) -> const Poly& {
    if (g.dpow.empty()) g.dpow.push_back(Poly(1L));
    while (g.dpow.size() <= e) g.dpow.push_back(g.dpow.back() * g.den);
    return g.dpow[e];
  };
  std::vector<Term> acc;
  for (std::size_t t = 0; t < p.size(); ++t) {
    const Term& term = p.terms()[t];
    Monomial::Storage rest;
    Poly prod(term.c);
    for (const auto& f : term.m.factors()) {
      Bound* bd = findBound(f.v);
      if (bd) {
        prod = prod * npow(*bd, f.e);
      } else {
        rest.push_back(f);
      }
    }
    for (std::size_t k = 0; k < groups.size(); ++k) {
      std::uint32_t e = groups[k].maxExp - sExp[t][k];
      if (e) prod = prod * dpow(groups[k], e);
    }
    Monomial rm = Monomial::fromSorted(std::move(rest));
    for (const auto& pt : prod.terms()) acc.push_back({pt.m * rm, pt.c});
  }
  Poly num = Poly::fromTerms(std::move(acc));
  if (num.isZero()) return Expr();
  if (groups.empty()) return Expr(num);
  Poly den(1L);
  for (auto& g : groups) {
    std::uint32_t e = g.maxExp;
    while (e > 0) {
      auto q = tryDivide(num, g.den);
      if (!q) break;
      num = std::move(*q);
      --e;
    }
    if (e) den = den * dpow(g, e);
  }
  return Expr::fraction(num, den);
}

Expr substitute(const Expr& e, const Bindings& b) {
  if (b.empty()) return e;
  Expr n = substitute(e.num(), b);
  if (e.isPolynomial()) return n;
  Expr d = substitute(e.den(), b);
  if (d.isZero()) throw DivisionByZeroExpr("denominator vanishes after substitution");
  return n / d;
}

mpq_class evaluate(const Poly& p, const Point& pt) {
  mpq_class s = 0;
  for (const auto& t : p.terms()) {
    mpq_class v = t.c;
    for (const auto& f : t.m.factors()) {
      auto it = pt.find(f.v);
      if (it == pt.end()) throw InvalidInput("evaluation point misses a variable");
      for (std::uint32_t k = 0; k < f.e; ++k) v *= it->second;
    }
    s += v;
  }
  return s;
}

mpq_class evaluate(const Expr& e, const Point& pt) {
  mpq_class d = evaluate(e.den(), pt);
  if (d == 0) throw DivisionByZeroExpr("denominator vanishes at point");
  return evaluate(e.num(), pt) / d;
}

Expr partialEvaluate(const Expr& e, const Point& pt) {
  Bindings b;
  for (Var v : e.vars()) {
    auto it = pt.find(v);
    if (it != pt.end()) b.emplace(v, Expr(it->second));
  }
  return substitute(e, b);
}

}  // namespace delin
