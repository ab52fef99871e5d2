#include "delin/ranking.hpp"

#include "delin/errors.hpp"

namespace delin {

Ranking::Ranking(std::vector<std::string> indep, std::vector<std::string> unknowns,
                 std::vector<std::vector<long>> matrix)
    : indep_(std::move(indep)), unknowns_(std::move(unknowns)), matrix_(std::move(matrix)) {
  if (indep_.size() > std::size_t(kMaxArity)) throw InvalidInput("too many independent variables for a ranking");
  std::size_t cols = indep_.size() + unknowns_.size();
  for (const auto& row : matrix_) {
    if (row.size() != cols) throw InvalidInput("ranking matrix row has wrong width");
    for (long w : row)
      if (w < 0) throw InvalidInput("ranking weights must be non-negative");
  }
  for (const auto& u : unknowns_) ids_.push_back(intern(u));
  if (!positive()) throw InvalidInput("ranking matrix is not positive");
}

Ranking Ranking::orderly(const std::vector<std::string>& indep, const std::vector<std::string>& unknowns) {
  return block(indep, {unknowns});
}

Ranking Ranking::block(const std::vector<std::string>& indep, const std::vector<std::vector<std::string>>& blocks) {
  std::size_t n = indep.size();
  std::vector<std::string> unk;
  for (const auto& b : blocks) unk.insert(unk.end(), b.begin(), b.end());
  std::size_t k = unk.size(), cols = n + k;
  std::vector<std::vector<long>> m;
  if (blocks.size() > 1) {
    std::vector<long> row(cols, 0);
    std::size_t c = n;
    for (std::size_t b = 0; b < blocks.size(); ++b)
      for (std::size_t j = 0; j < blocks[b].size(); ++j) row[c++] = long(blocks.size() - 1 - b);
    m.push_back(row);
  }
  std::vector<long> total(cols, 0);
  for (std::size_t i = 0; i < n; ++i) total[i] = 1;
  m.push_back(total);
  if (k > 1) {
    std::vector<long> row(cols, 0);
    for (std::size_t j = 0; j < k; ++j) row[n + j] = long(k - 1 - j);
    m.push_back(row);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::vector<long> row(cols, 0);
    row[i] = 1;
    m.push_back(row);
  }
  return Ranking(indep, unk, m);
}

int Ranking::unknownIndex(NameId id) const {
  for (std::size_t j = 0; j < ids_.size(); ++j)
    if (ids_[j] == id) return int(j);
  return -1;
}

int Ranking::compare(Var a, Var b) const {
  if (a == b) return 0;
  int ka = unknownIndex(a.name()), kb = unknownIndex(b.name());
  if (ka < 0 || kb < 0 || !a.isDeriv() || !b.isDeriv()) throw InvalidInput("ranking compares a non-unknown");
  MultiIndex ia = a.index(), ib = b.index();
  std::size_t n = indep_.size();
  for (const auto& row : matrix_) {
    long wa = row[n + ka], wb = row[n + kb];
    for (std::size_t i = 0; i < n; ++i) {
      wa += row[i] * ia[i];
      wb += row[i] * ib[i];
    }
    if (wa != wb) return wa > wb ? 1 : -1;
  }
  if (ka != kb) return ka < kb ? 1 : -1;
  for (int i = int(n) - 1; i >= 0; --i)
    if (ia[i] != ib[i]) return ia[i] > ib[i] ? 1 : -1;
  return 0;
}

std::optional<Var> Ranking::leader(const Poly& p) const {
  std::optional<Var> best;
  for (const auto& t : p.terms())
    for (const auto& f : t.m.factors()) {
      if (!isUnknown(f.v)) continue;
      if (!best || compare(f.v, *best) > 0) best = f.v;
    }
  return best;
}

bool Ranking::hasUnknowns(const Poly& p) const {
  for (const auto& t : p.terms())
    for (const auto& f : t.m.factors())
      if (isUnknown(f.v)) return true;
  return false;
}

bool Ranking::positive() const {
  for (std::size_t i = 0; i < indep_.size(); ++i) {
    bool ok = false;
    for (const auto& row : matrix_) {
      if (row[i] == 0) continue;
      ok = row[i] > 0;
      break;
    }
    if (!ok) return false;
  }
  return true;
}

}  // namespace delin

namespace delin {

nlohmann::json toJson(const Ranking& r) {
  return {{"indep", r.indep()}, {"unknowns", r.unknowns()}, {"matrix", r.matrix()}};
}

Ranking rankingFromJson(const nlohmann::json& j) {
  try {
    return Ranking(j.at("indep").get<std::vector<std::string>>(), j.at("unknowns").get<std::vector<std::string>>(),
                   j.at("matrix").get<std::vector<std::vector<long>>>());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("bad ranking json: ") + e.what());
  }
}

}  // namespace delin
