#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "delin/dec.hpp"
#include "delin/hilbert.hpp"

namespace delin {

// One piece of initial data: the derivative `deriv` of an unknown, given as a
// constant (free empty) or as an arbitrary function of the listed arguments
// with the remaining arguments fixed at the regular point.
struct IDItem {
  Var deriv;
  std::vector<int> free;
};

struct InitialData {
  std::vector<IDItem> finite;
  std::vector<IDItem> infinite;
  std::vector<std::string> args;  // coordinates the multi-indices refer to
  std::string point = "z0";
  VarSpace vs;

  std::size_t size() const { return finite.size() + infinite.size(); }
  std::string itemString(const IDItem& it) const;  // e.g. u[x](x0,y0) or u(x0,y)
  std::string toString() const;                    // e.g. [u[x](x0,y0) = c1, u(x0,y) = f1(y)]
};

// Parametric derivatives of a completed case, optionally restricted to some
// unknowns. Items are ordered by (order, unknown, multi-index descending).
InitialData initialData(const RifCase& c, const std::optional<std::vector<std::string>>& restrictTo = std::nullopt);
HilbertFn hilbertFn(const InitialData& id);

inline HilbertFn hilbertFn(const RifCase& c,
                           const std::optional<std::vector<std::string>>& restrictTo = std::nullopt) {
  return hilbertFn(initialData(c, restrictTo));
}

// Dimension data of R, S and S'.
struct DimInfo {
  HilbertFn R, S, Sp;
};

nlohmann::json toJson(const HilbertFn& h);
nlohmann::json toJson(const DimInfo& d);
nlohmann::json toJson(const RifCase& c);
nlohmann::json toJson(const InitialData& id);

}  // namespace delin
