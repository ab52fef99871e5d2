#include "delin/dimension.hpp"

#include <algorithm>

namespace delin {

namespace {

std::string pointCoord(const std::string& a) { return a + "0"; }

}  // namespace

std::string InitialData::itemString(const IDItem& it) const {
  std::string s = vs.varName(it.deriv) + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) s += ",";
    bool free = std::find(it.free.begin(), it.free.end(), int(i)) != it.free.end();
    s += free ? args[i] : pointCoord(args[i]);
  }
  return s + ")";
}

std::string InitialData::toString() const {
  std::string s = "[";
  int c = 0, f = 0;
  auto sep = [&] {
    if (s.size() > 1) s += ", ";
  };
  for (const auto& it : finite) {
    sep();
    s += itemString(it) + " = c" + std::to_string(++c);
  }
  for (const auto& it : infinite) {
    sep();
    s += itemString(it) + " = f" + std::to_string(++f) + "(";
    for (std::size_t k = 0; k < it.free.size(); ++k) s += (k ? "," : "") + args[it.free[k]];
    s += ")";
  }
  return s + "]";
}

InitialData initialData(const RifCase& c, const std::optional<std::vector<std::string>>& restrictTo) {
  InitialData id;
  id.vs = c.vs;
  id.args = c.ranking.indep();
  int n = int(id.args.size());
  const auto& names = restrictTo ? *restrictTo : c.ranking.unknowns();
  std::vector<IDItem> items;
  for (const auto& name : c.ranking.unknowns()) {
    if (std::find(names.begin(), names.end(), name) == names.end()) continue;
    NameId nid = intern(name);
    std::vector<MultiIndex> ls;
    for (const auto& s : c.solved)
      if (s.leader.name() == nid) ls.push_back(s.leader.index());
    for (const auto& ce : c.constraints) {
      auto l = c.ranking.leader(ce.num());
      if (l && l->name() == nid) ls.push_back(l->index());
    }
    for (const auto& cone : complementCones(ls, n)) items.push_back({Var::deriv(name, cone.base), cone.free});
  }
  std::stable_sort(items.begin(), items.end(), [&](const IDItem& a, const IDItem& b) {
    if (a.deriv.order() != b.deriv.order()) return a.deriv.order() < b.deriv.order();
    int ka = c.ranking.unknownIndex(a.deriv.name()), kb = c.ranking.unknownIndex(b.deriv.name());
    if (ka != kb) return ka < kb;
    return a.deriv.index() > b.deriv.index();
  });
  for (auto& it : items) (it.free.empty() ? id.finite : id.infinite).push_back(std::move(it));
  return id;
}

HilbertFn hilbertFn(const InitialData& id) {
  HilbertFn h;
  for (const auto& it : id.finite) h = h + HilbertFn::monomial(int(it.deriv.order()), 0);
  for (const auto& it : id.infinite) h = h + HilbertFn::monomial(int(it.deriv.order()), int(it.free.size()));
  return h;
}

nlohmann::json toJson(const HilbertFn& h) {
  nlohmann::json j;
  j["numerator"] = h.numerator();
  j["ddim"] = h.ddim();
  if (h.finite())
    j["dim"] = h.dim();
  else
    j["dim"] = "infinite";
  j["text"] = h.toString();
  j["rational"] = h.toRationalString();
  return j;
}

nlohmann::json toJson(const InitialData& id) {
  nlohmann::json j;
  j["point"] = id.point;
  j["finite"] = nlohmann::json::array();
  j["infinite"] = nlohmann::json::array();
  for (const auto& it : id.finite) j["finite"].push_back(id.itemString(it));
  for (const auto& it : id.infinite) {
    nlohmann::json f;
    f["item"] = id.itemString(it);
    for (int k : it.free) f["free"].push_back(id.args[k]);
    j["infinite"].push_back(f);
  }
  j["text"] = id.toString();
  return j;
}

nlohmann::json toJson(const DimInfo& d) {
  return {{"R", toJson(d.R)}, {"S", toJson(d.S)}, {"Sprime", toJson(d.Sp)}};
}

nlohmann::json toJson(const RifCase& c) {
  nlohmann::json j;
  j["path"] = c.path;
  j["solved"] = nlohmann::json::array();
  j["pivots"] = nlohmann::json::array();
  j["constraints"] = nlohmann::json::array();
  for (const auto& s : c.solved) j["solved"].push_back({{"leader", c.vs.varName(s.leader)}, {"rhs", toString(s.rhs, c.vs)}});
  for (const auto& p : c.pivots) j["pivots"].push_back(toString(p, c.vs));
  for (const auto& e : c.constraints) j["constraints"].push_back(toString(e, c.vs));
  return j;
}

}  // namespace delin
