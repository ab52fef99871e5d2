#pragma once

#include <gmpxx.h>

#include <boost/container/small_vector.hpp>
#include <cstdint>
#include <optional>
#include <vector>

#include "delin/var.hpp"

namespace delin {

struct VarPow {
  Var v;
  std::uint32_t e;
  bool operator==(const VarPow&) const = default;
};

// Power product, factors kept sorted by variable in descending order.
class Monomial {
 public:
  using Storage = boost::container::small_vector<VarPow, 4>;

  Monomial() = default;
  explicit Monomial(Var v, std::uint32_t e = 1);

  bool isOne() const { return f_.empty(); }
  const Storage& factors() const { return f_; }
  std::uint32_t degree(Var v) const;
  unsigned totalDegree() const;

  bool divides(const Monomial& m) const;
  Monomial operator/(const Monomial& d) const;  // exact
  friend Monomial operator*(const Monomial& a, const Monomial& b);
  static Monomial gcd(const Monomial& a, const Monomial& b);
  static Monomial lcm(const Monomial& a, const Monomial& b);
  Monomial withDegree(Var v, std::uint32_t e) const;

  // Lexicographic comparison with larger variables more significant.
  int compare(const Monomial& o) const;
  bool operator==(const Monomial& o) const { return f_ == o.f_; }
  std::size_t hash() const;

  // Construction from already sorted factors.
  static Monomial fromSorted(Storage f);

 private:
  Storage f_;
};

struct Term {
  Monomial m;
  mpq_class c;
};

// Multivariate polynomial over Q. Terms sorted by descending monomial,
// no zero coefficients, so the representation is canonical.
class Poly {
 public:
  Poly() = default;
  Poly(long c);
  Poly(const mpq_class& c);
  Poly(Var v);
  Poly(const Monomial& m, const mpq_class& c);

  // Sorts and merges arbitrary terms.
  static Poly fromTerms(std::vector<Term> terms);
  // Terms must already be sorted descending with distinct monomials.
  static Poly fromSortedTerms(std::vector<Term> terms);

  bool isZero() const { return t_.empty(); }
  bool isConstant() const { return t_.empty() || (t_.size() == 1 && t_[0].m.isOne()); }
  bool isOne() const { return t_.size() == 1 && t_[0].m.isOne() && t_[0].c == 1; }
  mpq_class constant() const;  // constant term
  const std::vector<Term>& terms() const { return t_; }
  std::size_t size() const { return t_.size(); }
  const Term& lt() const { return t_.front(); }
  const mpq_class& lc() const { return t_.front().c; }

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly operator-() const;
  Poly& operator+=(const Poly& b) { return *this = *this + b; }
  Poly& operator-=(const Poly& b) { return *this = *this - b; }
  Poly& operator*=(const Poly& b) { return *this = *this * b; }
  Poly scaled(const mpq_class& c) const;
  Poly mulTerm(const Monomial& m, const mpq_class& c) const;
  Poly pow(unsigned k) const;

  bool operator==(const Poly& o) const;
  bool operator!=(const Poly& o) const { return !(*this == o); }
  int compare(const Poly& o) const;  // total order for canonical sorting
  std::size_t hash() const;

  std::vector<Var> vars() const;  // ascending, unique
  bool contains(Var v) const;
  std::uint32_t degree(Var v) const;
  unsigned totalDegree() const;
  std::vector<Poly> coeffs(Var v) const;  // index = exponent of v
  Poly coeff(Var v, std::uint32_t e) const;
  Poly diff(Var v) const;
  Monomial monomialContent() const;
  Poly divMonomial(const Monomial& m) const;  // exact

 private:
  std::vector<Term> t_;
};

// Exact division; nullopt if b does not divide a.
std::optional<Poly> tryDivide(const Poly& a, const Poly& b);
Poly divExact(const Poly& a, const Poly& b);
// Pseudo-remainder of a by b w.r.t. v.
Poly prem(const Poly& a, const Poly& b, Var v);
// Integer-coefficient primitive associate with positive leading coefficient.
Poly primitiveZ(const Poly& p);
// Greatest common divisor, returned in primitiveZ form (gcd(0,0) = 0).
Poly gcd(const Poly& a, const Poly& b);
// Factors obtained by recursive content splitting (not a full factorization).
std::vector<Poly> contentFactors(const Poly& p);

}  // namespace delin
