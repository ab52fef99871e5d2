#include "delin/poly.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace delin {

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(Var v, std::uint32_t e) {
  if (e) f_.push_back({v, e});
}

Monomial Monomial::fromSorted(Storage f) {
  Monomial m;
  m.f_ = std::move(f);
  return m;
}

std::uint32_t Monomial::degree(Var v) const {
  for (const auto& p : f_)
    if (p.v == v) return p.e;
  return 0;
}

unsigned Monomial::totalDegree() const {
  unsigned s = 0;
  for (const auto& p : f_) s += p.e;
  return s;
}

bool Monomial::divides(const Monomial& m) const {
  std::size_t j = 0;
  for (const auto& p : f_) {
    while (j < m.f_.size() && m.f_[j].v > p.v) ++j;
    if (j == m.f_.size() || m.f_[j].v != p.v || m.f_[j].e < p.e) return false;
    ++j;
  }
  return true;
}

Monomial Monomial::operator/(const Monomial& d) const {
  Monomial r;
  std::size_t j = 0;
  for (const auto& p : f_) {
    if (j < d.f_.size() && d.f_[j].v == p.v) {
      if (d.f_[j].e > p.e) throw std::logic_error("monomial division not exact");
      if (p.e > d.f_[j].e) r.f_.push_back({p.v, p.e - d.f_[j].e});
      ++j;
    } else {
      r.f_.push_back(p);
    }
  }
  if (j != d.f_.size()) throw std::logic_error("monomial division not exact");
  return r;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial r;
  r.f_.reserve(a.f_.size() + b.f_.size());
  std::size_t i = 0, j = 0;
  while (i < a.f_.size() && j < b.f_.size()) {
    if (a.f_[i].v > b.f_[j].v) {
      r.f_.push_back(a.f_[i++]);
    } else if (b.f_[j].v > a.f_[i].v) {
      r.f_.push_back(b.f_[j++]);
    } else {
      r.f_.push_back({a.f_[i].v, a.f_[i].e + b.f_[j].e});
      ++i, ++j;
    }
  }
  while (i < a.f_.size()) r.f_.push_back(a.f_[i++]);
  while (j < b.f_.size()) r.f_.push_back(b.f_[j++]);
  return r;
}

Monomial Monomial::gcd(const Monomial& a, const Monomial& b) {
  Monomial r;
  std::size_t i = 0, j = 0;
  while (i < a.f_.size() && j < b.f_.size()) {
    if (a.f_[i].v > b.f_[j].v) {
      ++i;
    } else if (b.f_[j].v > a.f_[i].v) {
      ++j;
    } else {
      r.f_.push_back({a.f_[i].v, std::min(a.f_[i].e, b.f_[j].e)});
      ++i, ++j;
    }
  }
  return r;
}

Monomial Monomial::lcm(const Monomial& a, const Monomial& b) {
  Monomial r;
  std::size_t i = 0, j = 0;
  while (i < a.f_.size() && j < b.f_.size()) {
    if (a.f_[i].v > b.f_[j].v) {
      r.f_.push_back(a.f_[i++]);
    } else if (b.f_[j].v > a.f_[i].v) {
      r.f_.push_back(b.f_[j++]);
    } else {
      r.f_.push_back({a.f_[i].v, std::max(a.f_[i].e, b.f_[j].e)});
      ++i, ++j;
    }
  }
  while (i < a.f_.size()) r.f_.push_back(a.f_[i++]);
  while (j < b.f_.size()) r.f_.push_back(b.f_[j++]);
  return r;
}

Monomial Monomial::withDegree(Var v, std::uint32_t e) const {
  Monomial r;
  bool placed = false;
  for (const auto& p : f_) {
    if (!placed && p.v <= v) {
      placed = true;
      if (e) r.f_.push_back({v, e});
      if (p.v == v) continue;
    }
    r.f_.push_back(p);
  }
  if (!placed && e) r.f_.push_back({v, e});
  return r;
}

int Monomial::compare(const Monomial& o) const {
  std::size_t n = std::min(f_.size(), o.f_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (f_[i].v != o.f_[i].v) return f_[i].v > o.f_[i].v ? 1 : -1;
    if (f_[i].e != o.f_[i].e) return f_[i].e > o.f_[i].e ? 1 : -1;
  }
  if (f_.size() != o.f_.size()) return f_.size() > o.f_.size() ? 1 : -1;
  return 0;
}

std::size_t Monomial::hash() const {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (const auto& p : f_) {
    h ^= std::hash<Var>()(p.v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= p.e + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

// ---------------------------------------------------------------- Poly

Poly::Poly(long c) {
  if (c != 0) t_.push_back({Monomial(), mpq_class(c)});
}

Poly::Poly(const mpq_class& c) {
  if (c != 0) t_.push_back({Monomial(), c});
  if (!t_.empty()) t_[0].c.canonicalize();
}

Poly::Poly(Var v) { t_.push_back({Monomial(v), mpq_class(1)}); }

Poly::Poly(const Monomial& m, const mpq_class& c) {
  if (c != 0) t_.push_back({m, c});
}

Poly Poly::fromSortedTerms(std::vector<Term> terms) {
  Poly p;
  p.t_ = std::move(terms);
  return p;
}

Poly Poly::fromTerms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.m.compare(b.m) > 0; });
  Poly p;
  for (auto& t : terms) {
    if (!p.t_.empty() && p.t_.back().m == t.m) {
      p.t_.back().c += t.c;
      if (p.t_.back().c == 0) p.t_.pop_back();
    } else if (t.c != 0) {
      p.t_.push_back(std::move(t));
    }
  }
  return p;
}

mpq_class Poly::constant() const {
  if (!t_.empty() && t_.back().m.isOne()) return t_.back().c;
  return 0;
}

namespace {

std::vector<Term> mergeAdd(const std::vector<Term>& a, const std::vector<Term>& b, bool negateB) {
  std::vector<Term> r;
  r.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    int c = a[i].m.compare(b[j].m);
    if (c > 0) {
      r.push_back(a[i++]);
    } else if (c < 0) {
      r.push_back(b[j]);
      if (negateB) r.back().c = -r.back().c;
      ++j;
    } else {
      mpq_class s = negateB ? mpq_class(a[i].c - b[j].c) : mpq_class(a[i].c + b[j].c);
      if (s != 0) r.push_back({a[i].m, std::move(s)});
      ++i, ++j;
    }
  }
  while (i < a.size()) r.push_back(a[i++]);
  while (j < b.size()) {
    r.push_back(b[j]);
    if (negateB) r.back().c = -r.back().c;
    ++j;
  }
  return r;
}

}  // namespace

Poly operator+(const Poly& a, const Poly& b) {
  if (a.isZero()) return b;
  if (b.isZero()) return a;
  return Poly::fromSortedTerms(mergeAdd(a.t_, b.t_, false));
}

Poly operator-(const Poly& a, const Poly& b) {
  if (b.isZero()) return a;
  return Poly::fromSortedTerms(mergeAdd(a.t_, b.t_, true));
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& t : r.t_) t.c = -t.c;
  return r;
}

Poly Poly::scaled(const mpq_class& c) const {
  if (c == 0) return Poly();
  Poly r = *this;
  for (auto& t : r.t_) t.c *= c;
  return r;
}

Poly Poly::mulTerm(const Monomial& m, const mpq_class& c) const {
  if (c == 0) return Poly();
  Poly r;
  r.t_.reserve(t_.size());
  for (const auto& t : t_) r.t_.push_back({t.m * m, t.c * c});
  return r;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.isZero() || b.isZero()) return Poly();
  const Poly& small = a.size() <= b.size() ? a : b;
  const Poly& big = a.size() <= b.size() ? b : a;
  if (small.size() == 1) return big.mulTerm(small.t_[0].m, small.t_[0].c);
  // Each row t*big is sorted; merge rows pairwise.
  std::vector<std::vector<Term>> rows;
  rows.reserve(small.size());
  for (const auto& t : small.t_) rows.push_back(big.mulTerm(t.m, t.c).t_);
  while (rows.size() > 1) {
    std::vector<std::vector<Term>> next;
    next.reserve((rows.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < rows.size(); i += 2) next.push_back(mergeAdd(rows[i], rows[i + 1], false));
    if (rows.size() % 2) next.push_back(std::move(rows.back()));
    rows = std::move(next);
  }
  return Poly::fromSortedTerms(std::move(rows[0]));
}

Poly Poly::pow(unsigned k) const {
  Poly r(1L), b = *this;
  while (k) {
    if (k & 1) r = r * b;
    k >>= 1;
    if (k) b = b * b;
  }
  return r;
}

bool Poly::operator==(const Poly& o) const {
  if (t_.size() != o.t_.size()) return false;
  for (std::size_t i = 0; i < t_.size(); ++i)
    if (!(t_[i].m == o.t_[i].m) || t_[i].c != o.t_[i].c) return false;
  return true;
}

int Poly::compare(const Poly& o) const {
  std::size_t n = std::min(t_.size(), o.t_.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = t_[i].m.compare(o.t_[i].m);
    if (c) return c;
    int d = cmp(t_[i].c, o.t_[i].c);
    if (d) return d > 0 ? 1 : -1;
  }
  if (t_.size() != o.t_.size()) return t_.size() > o.t_.size() ? 1 : -1;
  return 0;
}

std::size_t Poly::hash() const {
  std::size_t h = t_.size();
  for (const auto& t : t_) {
    h ^= t.m.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= std::hash<std::string>()(t.c.get_str()) + (h << 6) + (h >> 2);
  }
  return h;
}

std::vector<Var> Poly::vars() const {
  std::vector<Var> vs;
  for (const auto& t : t_)
    for (const auto& p : t.m.factors()) vs.push_back(p.v);
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

bool Poly::contains(Var v) const {
  for (const auto& t : t_)
    if (t.m.degree(v)) return true;
  return false;
}

std::uint32_t Poly::degree(Var v) const {
  std::uint32_t d = 0;
  for (const auto& t : t_) d = std::max(d, t.m.degree(v));
  return d;
}

unsigned Poly::totalDegree() const {
  unsigned d = 0;
  for (const auto& t : t_) d = std::max(d, t.m.totalDegree());
  return d;
}

std::vector<Poly> Poly::coeffs(Var v) const {
  std::vector<std::vector<Term>> parts(degree(v) + 1);
  for (const auto& t : t_) {
    std::uint32_t e = t.m.degree(v);
    parts[e].push_back({e ? t.m.withDegree(v, 0) : t.m, t.c});
  }
  std::vector<Poly> r;
  r.reserve(parts.size());
  for (auto& p : parts) r.push_back(fromSortedTerms(std::move(p)));
  return r;
}

Poly Poly::coeff(Var v, std::uint32_t e) const {
  std::vector<Term> r;
  for (const auto& t : t_)
    if (t.m.degree(v) == e) r.push_back({e ? t.m.withDegree(v, 0) : t.m, t.c});
  return fromSortedTerms(std::move(r));
}

Poly Poly::diff(Var v) const {
  std::vector<Term> r;
  for (const auto& t : t_) {
    std::uint32_t e = t.m.degree(v);
    if (e) r.push_back({t.m.withDegree(v, e - 1), t.c * e});
  }
  // Lowering one exponent of v keeps the lex order among these terms.
  return fromSortedTerms(std::move(r));
}

Monomial Poly::monomialContent() const {
  if (t_.empty()) return Monomial();
  Monomial g = t_[0].m;
  for (std::size_t i = 1; i < t_.size() && !g.isOne(); ++i) g = Monomial::gcd(g, t_[i].m);
  return g;
}

Poly Poly::divMonomial(const Monomial& m) const {
  if (m.isOne()) return *this;
  Poly r;
  r.t_.reserve(t_.size());
  for (const auto& t : t_) r.t_.push_back({t.m / m, t.c});
  return r;
}

// ---------------------------------------------------------------- division, gcd

std::optional<Poly> tryDivide(const Poly& a, const Poly& b) {
  if (b.isZero()) throw std::domain_error("division by zero polynomial");
  if (a.isZero()) return Poly();
  if (b.size() == 1) {
    const Term& bt = b.lt();
    std::vector<Term> q;
    q.reserve(a.size());
    for (const auto& t : a.terms()) {
      if (!bt.m.divides(t.m)) return std::nullopt;
      q.push_back({t.m / bt.m, t.c / bt.c});
    }
    return Poly::fromSortedTerms(std::move(q));
  }
  // Quick degree screen.
  for (const auto& p : b.lt().m.factors())
    if (a.degree(p.v) < p.e) return std::nullopt;
  std::vector<Term> q;
  Poly r = a;
  const Term& bt = b.lt();
  while (!r.isZero()) {
    const Term& rt = r.lt();
    if (!bt.m.divides(rt.m)) return std::nullopt;
    Monomial qm = rt.m / bt.m;
    mpq_class qc = rt.c / bt.c;
    r = r - b.mulTerm(qm, qc);
    q.push_back({std::move(qm), std::move(qc)});
  }
  return Poly::fromSortedTerms(std::move(q));
}

Poly divExact(const Poly& a, const Poly& b) {
  auto q = tryDivide(a, b);
  if (!q) throw std::logic_error("polynomial division not exact");
  return *q;
}

Poly prem(const Poly& a, const Poly& b, Var v) {
  std::uint32_t db = b.degree(v);
  Poly lb = b.coeff(v, db);
  Poly r = a;
  while (!r.isZero()) {
    std::uint32_t dr = r.degree(v);
    if (dr < db) break;
    Poly lr = r.coeff(v, dr);
    r = lb * r - (lr * b).mulTerm(Monomial(v, dr - db), 1);
  }
  return r;
}

Poly primitiveZ(const Poly& p) {
  if (p.isZero()) return p;
  mpz_class den = 1, num = 0;
  for (const auto& t : p.terms()) {
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.c.get_den_mpz_t());
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), t.c.get_num_mpz_t());
  }
  mpq_class f(den, num);
  f.canonicalize();
  if (p.lc() < 0) f = -f;
  if (f == 1) return p;
  return p.scaled(f);
}

namespace {

Poly gcdImpl(const Poly& a, const Poly& b);

// gcd of a list of polynomials, exiting early on 1.
Poly gcdList(std::vector<Poly> ps) {
  std::sort(ps.begin(), ps.end(), [](const Poly& x, const Poly& y) { return x.size() < y.size(); });
  Poly g;
  for (const auto& p : ps) {
    if (p.isZero()) continue;
    g = g.isZero() ? primitiveZ(p) : gcdImpl(g, p);
    if (g.isConstant()) return Poly(1L);
  }
  return g;
}

// Coefficients of p viewed as a polynomial in the variables `sel`.
std::vector<Poly> coeffsIn(const Poly& p, const std::vector<Var>& sel) {
  std::vector<std::pair<std::vector<VarPow>, std::vector<Term>>> order;
  std::map<std::vector<std::uint64_t>, std::size_t> index;
  for (const auto& t : p.terms()) {
    std::vector<std::uint64_t> key;
    Monomial::Storage rest;
    for (const auto& f : t.m.factors()) {
      if (std::binary_search(sel.begin(), sel.end(), f.v)) {
        key.push_back(f.v.bits());
        key.push_back(f.e);
      } else {
        rest.push_back(f);
      }
    }
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, order.size()).first;
      order.emplace_back();
    }
    order[it->second].second.push_back({Monomial::fromSorted(std::move(rest)), t.c});
  }
  std::vector<Poly> r;
  r.reserve(order.size());
  for (auto& g : order) r.push_back(Poly::fromSortedTerms(std::move(g.second)));
  return r;
}

Poly contentIn(const Poly& p, Var v) { return gcdList(p.coeffs(v)); }

Poly primitivePart(const Poly& p, Var v) {
  Poly c = contentIn(p, v);
  Poly q = c.isConstant() ? p : divExact(p, c);
  return primitiveZ(q);
}

Poly prsGcd(Poly a, Poly b, Var v) {
  if (a.degree(v) < b.degree(v)) std::swap(a, b);
  while (true) {
    Poly r = prem(a, b, v);
    if (r.isZero()) return primitiveZ(b);
    if (r.degree(v) == 0) return Poly(1L);
    a = std::move(b);
    b = primitivePart(r, v);
  }
}

Poly gcdImpl(const Poly& a0, const Poly& b0) {
  if (a0.isZero()) return primitiveZ(b0);
  if (b0.isZero()) return primitiveZ(a0);
  if (a0.isConstant() || b0.isConstant()) return Poly(1L);
  Poly a = primitiveZ(a0), b = primitiveZ(b0);
  if (a == b) return a;
  Monomial ma = a.monomialContent(), mb = b.monomialContent();
  Monomial mg = Monomial::gcd(ma, mb);
  a = a.divMonomial(ma);
  b = b.divMonomial(mb);
  Poly g;
  if (a.isConstant() || b.isConstant()) {
    g = Poly(1L);
  } else {
    std::vector<Var> va = a.vars(), vb = b.vars();
    std::vector<Var> onlyA, onlyB;
    std::set_difference(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(onlyA));
    std::set_difference(vb.begin(), vb.end(), va.begin(), va.end(), std::back_inserter(onlyB));
    if (!onlyA.empty()) {
      auto cs = coeffsIn(a, onlyA);
      cs.push_back(b);
      g = gcdList(std::move(cs));
    } else if (!onlyB.empty()) {
      auto cs = coeffsIn(b, onlyB);
      cs.push_back(a);
      g = gcdList(std::move(cs));
    } else {
      if (b.size() <= a.size() && tryDivide(a, b)) {
        g = b;
      } else if (a.size() <= b.size() && tryDivide(b, a)) {
        g = a;
      } else {
        Var v = va[0];
        std::uint32_t best = ~0u;
        for (Var w : va) {
          std::uint32_t d = std::max(a.degree(w), b.degree(w));
          if (d < best) best = d, v = w;
        }
        Poly ca = contentIn(a, v), cb = contentIn(b, v);
        Poly c = gcdImpl(ca, cb);
        Poly pa = ca.isConstant() ? a : divExact(a, ca);
        Poly pb = cb.isConstant() ? b : divExact(b, cb);
        g = primitiveZ(c * prsGcd(pa, pb, v));
      }
    }
  }
  if (!mg.isOne()) g = g.mulTerm(mg, 1);
  return primitiveZ(g);
}

void splitInto(const Poly& p0, std::vector<Poly>& out) {
  Poly p = primitiveZ(p0);
  if (p.isConstant()) return;
  Monomial m = p.monomialContent();
  for (const auto& f : m.factors())
    for (std::uint32_t k = 0; k < f.e; ++k) out.push_back(Poly(f.v));
  p = p.divMonomial(m);
  if (p.isConstant()) return;
  for (Var v : p.vars()) {
    Poly c = contentIn(p, v);
    if (!c.isConstant()) {
      splitInto(c, out);
      splitInto(divExact(p, c), out);
      return;
    }
  }
  for (Var v : p.vars()) {
    if (p.degree(v) < 2) continue;
    Poly g = gcdImpl(p, p.diff(v));
    if (!g.isConstant()) {
      splitInto(g, out);
      splitInto(divExact(p, g), out);
      return;
    }
  }
  out.push_back(p);
}

}  // namespace

Poly gcd(const Poly& a, const Poly& b) { return gcdImpl(a, b); }

std::vector<Poly> contentFactors(const Poly& p) {
  std::vector<Poly> out;
  splitInto(p, out);
  std::sort(out.begin(), out.end(), [](const Poly& x, const Poly& y) { return x.compare(y) < 0; });
  return out;
}

}  // namespace delin
