#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "delin/hilbert.hpp"
#include "delin/ranking.hpp"
#include "delin/symexpr.hpp"

namespace delin {

// Differential polynomial system: eqs = 0, ineqs != 0.
struct DPS {
  VarSpace vs;
  std::vector<Expr> eqs;
  std::vector<Expr> ineqs;
};

struct SolvedEq {
  Var leader;
  Expr rhs;
};

// A completed case: leader = rhs equations, pivots != 0, and leading-nonlinear
// constraints = 0. `path` records the branch choices that produced it.
struct RifCase {
  VarSpace vs;
  Ranking ranking;
  std::vector<SolvedEq> solved;  // ascending leader rank
  std::vector<Expr> pivots;
  std::vector<Expr> constraints;
  std::string path;

  const SolvedEq* find(Var leader) const;
  int maxOrder() const;
  // Solved equations, constraints and pivots as a DPS.
  DPS toDPS() const;
};

// Reduction modulo a case. Caches normal forms of principal derivatives, so
// an instance must not be shared between threads.
class Reducer {
 public:
  explicit Reducer(const RifCase& c);
  void rebuild();  // after the case was modified in place

  bool isPrincipal(Var v) const;
  Expr nf(Var v);
  Expr reduce(const Expr& e);
  Expr derive(const Expr& e, int i) { return reduce(totalDerive(c_->vs, e, i)); }
  Expr derive(const Expr& e, const MultiIndex& a);
  const RifCase& rifCase() const { return *c_; }

 private:
  struct ConstraintInfo {
    Poly p;
    Var leader;
    std::uint32_t deg;
    Poly init;
  };
  bool needsWork(const Poly& p) const;

  const RifCase* c_;
  std::vector<std::vector<std::pair<MultiIndex, std::size_t>>> leaders_;  // per unknown
  std::vector<ConstraintInfo> constraints_;
  std::unordered_map<Var, Expr> cache_;
};

Expr reduce(const Expr& e, const RifCase& c);
Expr totalDerive(const Expr& e, int i, const RifCase& modulo);
// Cross-derivative conditions of all leader pairs, reduced; empty iff complete.
std::vector<Expr> integrabilityPairs(const RifCase& c);

struct CompleteOptions {
  bool casesplit = true;
  // Prune cases whose parametric-data upper bound over `designated` unknowns
  // falls below this (see hilbertBelow). Empty designated list = all unknowns.
  std::optional<HilbertFn> mindim;
  std::vector<std::string> designated;
  int extraOrder = 6;  // prolongation budget beyond the input order
  int maxCases = 64;
  bool parallel = true;
};

struct Completion {
  std::vector<RifCase> cases;         // sorted by branch path
  std::vector<std::string> pruned;    // branch paths dropped by mindim
  std::vector<std::string> inconsistent;
  std::vector<std::string> log;
};

Completion completeCases(const DPS& s, const Ranking& r, const CompleteOptions& o = {});
std::vector<RifCase> complete(const DPS& s, const Ranking& r, const CompleteOptions& o = {});
// Completion expected to yield exactly one case (no splitting).
RifCase completeSingle(const DPS& s, const Ranking& r, const CompleteOptions& o = {});

// Default budget, honouring the DELIN_BUDGET environment variable ("N" or "N:cases").
CompleteOptions defaultOptions();

// Upper bound on parametric data of the listed unknowns from the current
// leaders (solved and constraint leaders).
HilbertFn leaderBound(const RifCase& c, const std::vector<std::string>& unknowns);

}  // namespace delin
