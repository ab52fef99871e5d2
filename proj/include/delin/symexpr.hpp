#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "delin/expr.hpp"

namespace delin {

struct FuncSig {
  std::string name;
  std::vector<std::string> args;
};

// Auxiliary symbol standing for a transcendental function (e.g. w = exp(c*v)),
// known to the kernel only through its partial derivatives.
struct AuxSym {
  std::string name;
  std::vector<std::pair<Var, Expr>> partials;  // d(name)/d(var)
};

// Declared names of a system: independent and dependent variables, unknown
// functions of some of them, auxiliary symbols and constant parameters.
class VarSpace {
 public:
  enum class Role { None, Indep, Dep, Func, Aux, Param };

  VarSpace() = default;
  VarSpace(std::vector<std::string> indep, std::vector<std::string> dep, std::vector<FuncSig> funcs = {});

  void addIndep(const std::string& n);
  void addDep(const std::string& n);
  void addFunc(FuncSig f);
  void addAux(AuxSym a);
  void addParam(const std::string& n);

  const std::vector<std::string>& indep() const { return indep_; }
  const std::vector<std::string>& dep() const { return dep_; }
  const std::vector<FuncSig>& funcs() const { return funcs_; }
  const std::vector<AuxSym>& aux() const { return aux_; }
  const std::vector<std::string>& params() const { return params_; }
  int n() const { return int(indep_.size()); }
  int m() const { return int(dep_.size()); }

  Role role(NameId id) const;
  Role role(const std::string& name) const { return role(intern(name)); }
  int position(NameId id) const;  // index within its role list
  bool declared(const std::string& name) const { return role(name) != Role::None; }

  // Argument names over which derivatives of `name` are indexed.
  const std::vector<std::string>& argsOf(NameId id) const;

  Var x(int i) const { return Var::symbol(indep_.at(i)); }
  Var u(int j, const MultiIndex& a = {}) const { return Var::deriv(dep_.at(j), a); }
  Var func(int k, const MultiIndex& a = {}) const { return Var::deriv(funcs_.at(k).name, a); }

  // Names of all unknowns (deps then funcs).
  std::vector<std::string> unknowns() const;

  // Throws InvalidInput on broken invariants.
  void validate() const;

  // DSL rendering of a variable, e.g. u[x,x,y].
  std::string varName(Var v) const;

 private:
  void index(const std::string& n, Role r, int pos);

  std::vector<std::string> indep_, dep_, params_;
  std::vector<FuncSig> funcs_;
  std::vector<AuxSym> aux_;
  std::unordered_map<NameId, std::pair<Role, int>> roles_;
};

// Total derivative D_i w.r.t. indep(i).
Expr totalDerive(const VarSpace& vs, const Expr& e, int i);
Poly totalDerivePoly(const VarSpace& vs, const Poly& p, int i);
// Total derivative of a single variable (1 for x_i, jet shift, chain rule ...).
Expr totalDeriveVar(const VarSpace& vs, Var v, int i);
// D^alpha e.
Expr totalDerive(const VarSpace& vs, const Expr& e, const MultiIndex& alpha);

// Jet variables for decomposition: derivatives of dependent variables except
// the order-0 ones that occur as arguments of the listed unknown functions.
std::function<bool(Var)> jetPredicate(const VarSpace& vs, const std::vector<std::string>& unknowns);

struct JetCoefficient {
  Monomial jets;
  Expr coeff;
};
// Coefficients of distinct power products of the jet variables.
std::vector<JetCoefficient> decomposeByJet(const Expr& e, const std::function<bool(Var)>& isJet);
std::vector<Expr> decomposeByJet(const VarSpace& vs, const Expr& e, const std::vector<std::string>& unknowns);

// Raw expression trees produced by the parser.
struct Tree;
using TreePtr = std::shared_ptr<const Tree>;
struct Tree {
  enum class Kind { Num, Atom, Add, Sub, Mul, Div, Pow, Neg };
  Kind kind = Kind::Num;
  mpq_class num;
  Var atom;
  int exponent = 0;
  std::vector<TreePtr> kids;

  static TreePtr number(const mpq_class& q);
  static TreePtr var(Var v);
  static TreePtr binary(Kind k, TreePtr a, TreePtr b);
  static TreePtr power(TreePtr a, int e);
  static TreePtr negate(TreePtr a);
};
Expr normalize(const Tree& t);

// Text rendering in the DSL syntax.
std::string toString(const Poly& p, const VarSpace& vs);
std::string toString(const Expr& e, const VarSpace& vs);
std::string toString(const mpq_class& q);

}  // namespace delin
