#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "delin/symexpr.hpp"

namespace delin {

// Riquier ranking: rows of integer weights over the columns
// (indep_1..indep_n, unknown_1..unknown_k). Derivatives are compared by their
// weight vectors lexicographically; ties fall back to (unknown index, reverse
// lexicographic multi-index).
class Ranking {
 public:
  Ranking() = default;
  Ranking(std::vector<std::string> indep, std::vector<std::string> unknowns, std::vector<std::vector<long>> matrix);

  static Ranking orderly(const std::vector<std::string>& indep, const std::vector<std::string>& unknowns);
  static Ranking orderly(const VarSpace& vs) { return orderly(vs.indep(), vs.unknowns()); }
  // Earlier blocks rank strictly above later ones; orderly inside a block.
  static Ranking block(const std::vector<std::string>& indep, const std::vector<std::vector<std::string>>& blocks);
  static Ranking block(const VarSpace& vs, const std::vector<std::vector<std::string>>& blocks) {
    return block(vs.indep(), blocks);
  }

  const std::vector<std::string>& indep() const { return indep_; }
  const std::vector<std::string>& unknowns() const { return unknowns_; }
  const std::vector<std::vector<long>>& matrix() const { return matrix_; }

  bool isUnknown(Var v) const { return v.isDeriv() && unknownIndex(v.name()) >= 0; }
  int unknownIndex(NameId id) const;
  // -1, 0, 1 as a is lower, equal, higher ranked than b.
  int compare(Var a, Var b) const;
  bool less(Var a, Var b) const { return compare(a, b) < 0; }

  // Highest ranked unknown derivative in p, or nullopt if none.
  std::optional<Var> leader(const Poly& p) const;
  bool hasUnknowns(const Poly& p) const;

  // Every indep column must be lexicographically positive.
  bool positive() const;

 private:
  std::vector<std::string> indep_, unknowns_;
  std::vector<NameId> ids_;
  std::vector<std::vector<long>> matrix_;
};

// {"indep": [...], "unknowns": [...], "matrix": [[...], ...]}
nlohmann::json toJson(const Ranking& r);
Ranking rankingFromJson(const nlohmann::json& j);

}  // namespace delin
