#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "delin/dec.hpp"
#include "delin/dimension.hpp"

namespace delin {

// Names of the infinitesimals xi^i(x,u), eta^j(x,u).
struct VectorFieldAnsatz {
  std::vector<std::string> xi, eta;
  std::vector<std::string> all() const;
};

// "xi"/"eta" for one independent and one dependent variable, otherwise
// indexed names; a trailing underscore is added on clashes with declared names.
VectorFieldAnsatz defaultAnsatz(const VarSpace& jet, const std::string& xi = "xi", const std::string& eta = "eta");

// Jet space extended by the infinitesimals as functions of (x,u).
VarSpace prolongationSpace(const VarSpace& jet, const VectorFieldAnsatz& a);
// Space where (x,u) are independent and the infinitesimals are the unknowns.
VarSpace symmetrySpace(const VarSpace& jet, const VectorFieldAnsatz& a);
// Rewrites an expression over the prolongation space into the symmetry space.
Expr toSymmetrySpace(const VarSpace& jet, const Expr& e);

// Prolonged infinitesimal eta^{j,(alpha)} over the prolongation space.
Expr prolongedEta(const VarSpace& ext, const VectorFieldAnsatz& a, int j, const MultiIndex& alpha);
// pr V applied to e.
Expr applyProlongation(const VarSpace& ext, const VectorFieldAnsatz& a, const Expr& e);

// Linearized symmetry conditions of R, split by jet monomials, in the symmetry space.
std::vector<Expr> determiningEquations(const RifCase& R, const VectorFieldAnsatz& a);

struct DetSystem {
  RifCase sys;  // over the symmetry space
  VectorFieldAnsatz ansatz;
};

DetSystem detSys(const RifCase& R, const VectorFieldAnsatz& a, const CompleteOptions& o = defaultOptions());
DetSystem detSys(const RifCase& R, const CompleteOptions& o = defaultOptions());
// Completes linear homogeneous equations given directly in a symmetry space.
DetSystem makeDetSystem(const VarSpace& sym, const VectorFieldAnsatz& a, const std::vector<Expr>& eqs,
                        const CompleteOptions& o = defaultOptions());

// A rational point of the symmetry space where the coefficients of S are
// defined; tries a fixed list of candidates.
Point regularPoint(const DetSystem& S, int skip = 0);

struct LieStructure {
  std::vector<std::string> basis;  // initial-data labels, Y1..Yd in this order
  std::vector<std::vector<std::vector<mpq_class>>> c;  // c[i][j][k]: [Yi,Yj] = sum_k c Yk
  Point z0;
  bool pointDependent = false;  // constants differ at a second regular point

  int dim() const { return int(basis.size()); }
  std::vector<mpq_class> bracket(const std::vector<mpq_class>& a, const std::vector<mpq_class>& b) const;
  bool abelian() const;
  bool jacobi() const;
  // e.g. "[Y1,Y2] = -Y1 - 2*Y2"
  std::vector<std::string> relations(const std::string& symbol = "Y") const;
};

LieStructure structureConstants(const DetSystem& S, const Point& z0);
LieStructure structureConstants(const DetSystem& S);

struct DerivedAlgebra {
  std::vector<std::vector<mpq_class>> basis;  // reduced row echelon, coordinates in L's basis
  LieStructure structure;                      // in terms of `basis`
};
DerivedAlgebra derivedStructure(const LieStructure& L);

struct DerivedOptions {
  CompleteOptions complete = defaultOptions();
  // Jet order used for infinite algebras: brackets are compared on jets of
  // order < truncation. Zero picks the highest leader order of S plus one.
  int truncation = 0;
};

// Determining system of the derived algebra: S together with the linear
// relations that brackets satisfy among parametric derivatives.
DetSystem derivedDetSys(const DetSystem& S, const DerivedOptions& o = {});

// Linearizability test for a single ODE solved for its highest derivative.
struct LGMResult {
  bool linearizable = false;
  int order = 0;
  std::optional<long long> dimL;  // empty when infinite
  std::optional<int> dimDerived;
  std::optional<bool> derivedAbelian;
};
LGMResult lgmLinTest(const RifCase& R, const DetSystem& S);
LGMResult lgmLinTest(const RifCase& R);

nlohmann::json toJson(const LieStructure& L);

}  // namespace delin
