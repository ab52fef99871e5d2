#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "delin/dimension.hpp"
#include "delin/liesym.hpp"
#include "delin/parser.hpp"

namespace delin {

// Unknown map (xh, uh) = (psi(x,u), phi(x,u)) and the target infinitesimals
// xih, etah, all functions of (x,u) in the symmetry space.
struct MapAnsatz {
  std::vector<std::string> psi, phi, xih, etah;
  std::vector<std::string> targetIndep, targetDep;  // names of xh, uh
  std::vector<std::vector<Expr>> jacobian;          // rows psi..., phi...; columns x..., u...
  Expr jac;                                         // det of `jacobian`
};

MapAnsatz defaultMapAnsatz(const VarSpace& jet, const VarSpace& sym);

struct MappingSystem {
  DPS M;
  MapAnsatz map;
  VectorFieldAnsatz ansatz;
  std::vector<std::vector<std::string>> blocks;  // [[xih, etah, xi, eta], [phi], [psi]]
  Ranking ranking;
};

MappingSystem assembleMappingSystem(const DetSystem& Sprime, const VarSpace& jet, const MapAnsatz& map);

enum class Verdict { False, True, Undetermined };
std::string toString(Verdict v);

struct PreEquivResult {
  std::optional<bool> linearizable;  // false or undecided
  DimInfo dimInfo;
  std::vector<std::string> failed;  // e.g. "T3: d(S) = 1 < 2 = d(R)"
};

PreEquivResult preEquivTest(const RifCase& R, const InitialData& idR, const InitialData& idS,
                            const InitialData& idSp);

// Linear target equations leader = sum coeff * term over the target space.
// Coefficients live in `coeffSpace`: the mapping space when implicit, the
// target space when explicit.
struct TargetEq {
  Var leader;
  std::vector<std::pair<Var, Expr>> terms;
};
struct LinearTarget {
  VarSpace vs;
  VarSpace coeffSpace;
  std::vector<TargetEq> eqs;
  bool explicitCoefficients = false;

  std::vector<std::string> strings() const;
  DPS toDPS() const;  // only for explicit targets
};

// Linear relations among derivatives of the target infinitesimals in case Q.
LinearTarget extractTarget(const RifCase& Q, const MappingSystem& ms, int order);
// Target of case Q for an explicit map over the source variables, with the
// coefficients rewritten as rational functions of the target variables.
LinearTarget specializeTarget(const RifCase& Q, const MappingSystem& ms, int order,
                              const std::vector<MapComponent>& map);

// Map bindings over the source jet space: target name -> expression in (x,u).
bool verifyMap(const RifCase& R, const DPS& target, const std::vector<MapComponent>& map);
bool verifyMap(const RifCase& R, const LinearTarget& T, const std::vector<MapComponent>& map);

// Best-effort explicit map for case Q, over the source jet space.
std::optional<std::vector<MapComponent>> heuristicIntegrate(const RifCase& Q, const MappingSystem& ms,
                                                            const VarSpace& jet, int maxDegree = 4);

// Laguerre-Forsyth form of a scalar ODE target: adds a_{d-1} = a_{d-2} = 0 to
// case Q and re-completes; the first case keeping HF(R) is returned.
std::optional<RifCase> normalizeCase(const RifCase& Q, const MappingSystem& ms, const LinearTarget& T,
                                     const HilbertFn& hR, const CompleteOptions& o);

struct MapDEOptions {
  CompleteOptions complete = defaultOptions();
  bool allCases = false;
  std::vector<int> caseSelect{1};  // 1-based, ignored when allCases
  bool useFallbackS = false;
  bool integrate = true;
  bool normalizeTarget = false;
};

struct MapDEReport {
  Verdict verdict = Verdict::Undetermined;
  DimInfo dimInfo;
  std::optional<LGMResult> lgm;
  std::vector<RifCase> cases;  // retained cases Q
  std::vector<std::size_t> selected;
  std::vector<LinearTarget> targets;
  std::optional<std::vector<MapComponent>> map;
  std::optional<std::size_t> mapCase;  // index into cases
  std::optional<LinearTarget> explicitTarget;
  std::optional<bool> mapVerified;
  std::optional<RifCase> normalizedCase;
  std::vector<std::string> diagnostics;
  std::vector<std::string> failedTests;
  std::optional<MappingSystem> mapping;
  int completedCases = 0;
};

MapDEReport runMapDE(const RifCase& R, const MapDEOptions& o = {});

nlohmann::json toJson(const MapDEReport& r, const VarSpace& jet);
nlohmann::json toJson(const LinearTarget& t);

}  // namespace delin
