#pragma once

#include <functional>
#include <unordered_map>
#include <vector>

#include "delin/poly.hpp"

namespace delin {

// Rational function num/den over Q, gcd(num, den) = 1, den monic
// (leading coefficient 1 in the lex term order). Zero is 0/1.
class Expr {
 public:
  Expr() : den_(1L) {}
  Expr(long c) : num_(c), den_(1L) {}
  Expr(const mpq_class& c) : num_(c), den_(1L) {}
  Expr(Var v) : num_(v), den_(1L) {}
  Expr(Poly p) : num_(std::move(p)), den_(1L) {}

  static Expr fraction(const Poly& num, const Poly& den);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool isZero() const { return num_.isZero(); }
  bool isConstant() const { return num_.isConstant() && den_.isOne(); }
  bool isPolynomial() const { return den_.isOne(); }
  mpq_class constant() const { return num_.constant(); }

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  Expr operator-() const;
  Expr& operator+=(const Expr& b) { return *this = *this + b; }
  Expr& operator-=(const Expr& b) { return *this = *this - b; }
  Expr& operator*=(const Expr& b) { return *this = *this * b; }
  Expr& operator/=(const Expr& b) { return *this = *this / b; }
  Expr pow(int k) const;

  bool operator==(const Expr& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Expr& o) const { return !(*this == o); }
  int compare(const Expr& o) const;
  std::size_t hash() const { return num_.hash() * 31 + den_.hash(); }

  std::vector<Var> vars() const;
  bool contains(Var v) const { return num_.contains(v) || den_.contains(v); }
  Expr diff(Var v) const;  // partial derivative

 private:
  Poly num_, den_;
};

using Bindings = std::unordered_map<Var, Expr>;
using Point = std::unordered_map<Var, mpq_class>;

// Simultaneous substitution followed by normalization.
Expr substitute(const Expr& e, const Bindings& b);
Expr substitute(const Poly& p, const Bindings& b);

mpq_class evaluate(const Poly& p, const Point& pt);
// Throws DivisionByZeroExpr when the denominator vanishes.
mpq_class evaluate(const Expr& e, const Point& pt);
// Substitutes the rational values of the variables present in pt.
Expr partialEvaluate(const Expr& e, const Point& pt);

}  // namespace delin

template <>
struct std::hash<delin::Expr> {
  std::size_t operator()(const delin::Expr& e) const noexcept { return e.hash(); }
};
