#include "delin/dec.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <map>
#include <memory>
#include <set>
#include <tuple>

#include "delin/errors.hpp"

namespace delin {

namespace {

bool isDerivOf(Var v, Var leader) {
  return v.isDeriv() && v.name() == leader.name() && dividesIndex(leader.index(), v.index());
}

bool containsDerivOf(const Poly& p, Var leader) {
  for (const auto& t : p.terms())
    for (const auto& f : t.m.factors())
      if (isDerivOf(f.v, leader)) return true;
  return false;
}

bool containsDerivOf(const Expr& e, Var leader) {
  return containsDerivOf(e.num(), leader) || containsDerivOf(e.den(), leader);
}

std::pair<Poly, unsigned> premCount(const Poly& a, const Poly& b, Var v) {
  std::uint32_t db = b.degree(v);
  Poly lb = b.coeff(v, db);
  Poly r = a;
  unsigned steps = 0;
  while (!r.isZero()) {
    std::uint32_t dr = r.degree(v);
    if (dr < db) break;
    Poly lr = r.coeff(v, dr);
    r = lb * r - (lr * b).mulTerm(Monomial(v, dr - db), 1);
    ++steps;
  }
  return {r, steps};
}

// Divides out the gcd of the coefficients of p viewed as a polynomial in the
// unknown derivatives. Returns 1 when p has no unknowns.
Poly removeBaseContent(const Poly& p, const Ranking& r) {
  if (!r.hasUnknowns(p)) return Poly(1L);
  std::map<std::vector<std::uint64_t>, std::vector<Term>> groups;
  Monomial unknownPart;
  for (const auto& t : p.terms()) {
    std::vector<std::uint64_t> key;
    Monomial::Storage rest, unk;
    for (const auto& f : t.m.factors()) {
      if (r.isUnknown(f.v)) {
        key.push_back(f.v.bits());
        key.push_back(f.e);
        unk.push_back(f);
      } else {
        rest.push_back(f);
      }
    }
    unknownPart = Monomial::fromSorted(std::move(unk));
    groups[key].push_back({Monomial::fromSorted(std::move(rest)), t.c});
  }
  // A single unknown monomial times a coefficient.
  if (groups.size() == 1) return Poly(unknownPart, 1);
  Poly g;
  for (auto& [key, terms] : groups) {
    Poly c = Poly::fromSortedTerms(terms);
    g = g.isZero() ? primitiveZ(c) : gcd(g, c);
    if (g.isConstant()) return primitiveZ(p);
  }
  return primitiveZ(divExact(p, g));
}

}  // namespace

// ---------------------------------------------------------------- RifCase

const SolvedEq* RifCase::find(Var leader) const {
  for (const auto& s : solved)
    if (s.leader == leader) return &s;
  return nullptr;
}

int RifCase::maxOrder() const {
  int m = 0;
  for (const auto& s : solved) m = std::max(m, int(s.leader.order()));
  return m;
}

DPS RifCase::toDPS() const {
  DPS d{vs, {}, pivots};
  for (const auto& s : solved) d.eqs.push_back(Expr(s.leader) - s.rhs);
  for (const auto& c : constraints) d.eqs.push_back(c);
  return d;
}

// ---------------------------------------------------------------- Reducer

Reducer::Reducer(const RifCase& c) : c_(&c) { rebuild(); }

void Reducer::rebuild() {
  cache_.clear();
  leaders_.assign(c_->ranking.unknowns().size(), {});
  for (std::size_t i = 0; i < c_->solved.size(); ++i) {
    Var l = c_->solved[i].leader;
    int k = c_->ranking.unknownIndex(l.name());
    if (k < 0) throw InvalidInput("solved leader is not an unknown of the ranking");
    leaders_[k].push_back({l.index(), i});
  }
  constraints_.clear();
  for (const auto& e : c_->constraints) {
    const Poly& p = e.num();
    auto l = c_->ranking.leader(p);
    if (!l) continue;
    std::uint32_t d = p.degree(*l);
    constraints_.push_back({p, *l, d, p.coeff(*l, d)});
  }
}

bool Reducer::isPrincipal(Var v) const {
  if (!v.isDeriv()) return false;
  int k = c_->ranking.unknownIndex(v.name());
  if (k < 0) return false;
  MultiIndex a = v.index();
  for (const auto& [b, idx] : leaders_[k])
    if (dividesIndex(b, a)) return true;
  return false;
}

Expr Reducer::nf(Var v) {
  if (!isPrincipal(v)) return Expr(v);
  auto it = cache_.find(v);
  if (it != cache_.end()) return it->second;
  int k = c_->ranking.unknownIndex(v.name());
  MultiIndex a = v.index();
  const std::pair<MultiIndex, std::size_t>* best = nullptr;
  for (const auto& l : leaders_[k]) {
    if (!dividesIndex(l.first, a)) continue;
    if (!best || order(l.first) > order(best->first)) best = &l;
  }
  Expr r;
  if (best->first == a) {
    r = c_->solved[best->second].rhs;
  } else {
    int i = 0;
    while (a[i] <= best->first[i]) ++i;
    MultiIndex w = a;
    --w[i];
    r = reduce(totalDerive(c_->vs, nf(v.withIndex(w)), i));
  }
  cache_.emplace(v, r);
  return r;
}

bool Reducer::needsWork(const Poly& p) const {
  for (const auto& t : p.terms())
    for (const auto& f : t.m.factors()) {
      if (isPrincipal(f.v)) return true;
      for (const auto& c : constraints_)
        if (f.v == c.leader && f.e >= c.deg) return true;
    }
  return false;
}

Expr Reducer::reduce(const Expr& e0) {
  Expr e = e0;
  if (!needsWork(e.num()) && !needsWork(e.den())) return e;
  Bindings b;
  for (Var v : e.vars())
    if (isPrincipal(v)) b.emplace(v, nf(v));
  if (!b.empty()) {
    try {
      e = substitute(e, b);
    } catch (const DivisionByZeroExpr&) {
      throw PivotViolation("a denominator reduces to zero modulo the case");
    }
  }
  for (int pass = 0; pass < 16 && !constraints_.empty(); ++pass) {
    bool changed = false;
    for (const auto& c : constraints_) {
      if (e.num().degree(c.leader) < c.deg) continue;
      auto [r, steps] = premCount(e.num(), c.p, c.leader);
      e = Expr::fraction(r, c.init.pow(steps) * e.den());
      changed = true;
    }
    if (!changed) break;
  }
  return e;
}

Expr Reducer::derive(const Expr& e, const MultiIndex& a) {
  Expr r = e;
  for (int i = 0; i < kMaxArity; ++i)
    for (int k = 0; k < a[i]; ++k) r = derive(r, i);
  return r;
}

Expr reduce(const Expr& e, const RifCase& c) {
  Reducer r(c);
  return r.reduce(e);
}

Expr totalDerive(const Expr& e, int i, const RifCase& modulo) {
  Reducer r(modulo);
  return r.derive(e, i);
}

namespace {

// Condition for a pair of solved equations with the same unknown.
Expr pairCondition(Reducer& red, const SolvedEq& a, const SolvedEq& b) {
  MultiIndex g = lcmIndex(a.leader.index(), b.leader.index());
  Expr pa = red.derive(a.rhs, subIndex(g, a.leader.index()));
  Expr pb = red.derive(b.rhs, subIndex(g, b.leader.index()));
  return pa - pb;
}

bool chainSkip(const std::vector<const SolvedEq*>& same, const SolvedEq* a, const SolvedEq* b) {
  MultiIndex ia = a->leader.index(), ib = b->leader.index(), g = lcmIndex(ia, ib);
  for (const SolvedEq* c : same) {
    if (c == a || c == b) continue;
    MultiIndex ic = c->leader.index();
    if (dividesIndex(ic, g) && lcmIndex(ia, ic) != g && lcmIndex(ib, ic) != g) return true;
  }
  return false;
}

}  // namespace

std::vector<Expr> integrabilityPairs(const RifCase& c) {
  Reducer red(c);
  std::vector<Expr> out;
  for (std::size_t k = 0; k < c.ranking.unknowns().size(); ++k) {
    NameId id = intern(c.ranking.unknowns()[k]);
    std::vector<const SolvedEq*> same;
    for (const auto& s : c.solved)
      if (s.leader.name() == id) same.push_back(&s);
    for (std::size_t i = 0; i < same.size(); ++i)
      for (std::size_t j = i + 1; j < same.size(); ++j) {
        if (chainSkip(same, same[i], same[j])) continue;
        Expr cond = pairCondition(red, *same[i], *same[j]);
        if (!cond.isZero()) out.push_back(cond);
      }
  }
  for (const auto& ce : c.constraints) {
    for (int i = 0; i < c.vs.n(); ++i) {
      Expr d = red.derive(ce, i);
      if (!d.isZero()) out.push_back(d);
    }
  }
  return out;
}

HilbertFn leaderBound(const RifCase& c, const std::vector<std::string>& unknowns) {
  const auto& names = unknowns.empty() ? c.ranking.unknowns() : unknowns;
  int n = int(c.ranking.indep().size());
  HilbertFn h;
  for (const auto& name : names) {
    NameId id = intern(name);
    std::vector<MultiIndex> ls;
    for (const auto& s : c.solved)
      if (s.leader.name() == id) ls.push_back(s.leader.index());
    for (const auto& ce : c.constraints) {
      auto l = c.ranking.leader(ce.num());
      if (l && l->name() == id) ls.push_back(l->index());
    }
    h = h + hilbertOfCones(complementCones(ls, n));
  }
  return h;
}

// ---------------------------------------------------------------- completion engine

namespace {

enum class Status { Done, Split, Inconsistent, Pruned };

struct Pending {
  Poly p;
  bool clean = false;
};

class Worker {
 public:
  Worker(RifCase c, const CompleteOptions& o, int maxOrder)
      : c_(std::move(c)), opts_(&o), maxOrder_(maxOrder), red_(std::make_unique<Reducer>(c_)) {}
  Worker(const Worker& w)
      : c_(w.c_),
        opts_(w.opts_),
        maxOrder_(w.maxOrder_),
        pending_(w.pending_),
        pivots_(w.pivots_),
        versions_(w.versions_),
        clock_(w.clock_),
        checked_(w.checked_),
        red_(std::make_unique<Reducer>(c_)),
        log_(w.log_) {}
  // The reducer points into c_, so moves rebuild it.
  Worker(Worker&& w) noexcept
      : children(std::move(w.children)),
        c_(std::move(w.c_)),
        opts_(w.opts_),
        maxOrder_(w.maxOrder_),
        pending_(std::move(w.pending_)),
        pivots_(std::move(w.pivots_)),
        versions_(std::move(w.versions_)),
        clock_(w.clock_),
        checked_(std::move(w.checked_)),
        red_(std::make_unique<Reducer>(c_)),
        log_(std::move(w.log_)) {}
  Worker& operator=(const Worker&) = delete;

  void addEquation(const Poly& p) { pending_.push_back({p, false}); }
  // Adds the unknown-dependent factors of p as pivots; false if p is zero.
  bool addPivot(const Poly& p);

  Status run();
  std::vector<Worker> children;
  RifCase result() const;
  const std::string& path() const { return c_.path; }
  const std::vector<std::string>& log() const { return log_; }

 private:
  struct Classified {
    Poly p;
    Var leader;
    std::uint32_t deg;
    Poly init;
    Poly initUnknown;  // init with known-nonzero factors removed (1 if none left)
  };

  Poly stripKnown(const Poly& p) const;
  Classified classify(const Poly& p) const;
  Status solve(const Classified& e);
  Status addConstraint(const Classified& e);
  Status afterChange(Var leader);
  std::vector<Poly> conditions();
  void syncPivots();
  void branch(const std::vector<Poly>& eqs, const Poly& factorProduct, const std::vector<Poly>& factors);

  RifCase c_;
  const CompleteOptions* opts_;
  int maxOrder_;
  std::vector<Pending> pending_;
  std::vector<Poly> pivots_;
  std::unordered_map<Var, int> versions_;
  int clock_ = 0;
  std::set<std::tuple<std::uint64_t, std::uint64_t, int, int>> checked_;
  std::unique_ptr<Reducer> red_;
  std::vector<std::string> log_;
};

Poly Worker::stripKnown(const Poly& p0) const {
  Poly p = removeBaseContent(primitiveZ(p0), c_.ranking);
  if (p.isConstant()) return Poly(1L);
  bool changed = true;
  while (changed && !p.isConstant()) {
    changed = false;
    for (const auto& f : pivots_) {
      auto q = tryDivide(p, f);
      if (q) {
        p = *q;
        changed = true;
      }
    }
  }
  p = removeBaseContent(primitiveZ(p), c_.ranking);
  return p;
}

bool Worker::addPivot(const Poly& p) {
  if (p.isZero()) return false;
  for (const auto& f : contentFactors(p)) {
    if (!c_.ranking.hasUnknowns(f)) continue;
    if (std::find(pivots_.begin(), pivots_.end(), f) == pivots_.end()) pivots_.push_back(f);
  }
  return true;
}

Worker::Classified Worker::classify(const Poly& p) const {
  Classified c;
  c.p = p;
  c.leader = *c_.ranking.leader(p);
  c.deg = p.degree(c.leader);
  c.init = p.coeff(c.leader, c.deg);
  c.initUnknown = stripKnown(c.init);
  return c;
}

void Worker::syncPivots() {
  c_.pivots.clear();
  for (const auto& f : pivots_) c_.pivots.push_back(Expr(f));
}

RifCase Worker::result() const {
  RifCase r = c_;
  std::sort(r.solved.begin(), r.solved.end(),
            [&](const SolvedEq& a, const SolvedEq& b) { return r.ranking.less(a.leader, b.leader); });
  r.pivots.clear();
  std::vector<Poly> ps = pivots_;
  std::sort(ps.begin(), ps.end(), [](const Poly& a, const Poly& b) { return a.compare(b) < 0; });
  for (const auto& f : ps) r.pivots.push_back(Expr(f));
  return r;
}

Status Worker::afterChange(Var leader) {
  // Pivots involving derivatives of the new leader are re-reduced.
  std::vector<Poly> keep, redo;
  for (const auto& f : pivots_) (containsDerivOf(f, leader) ? redo : keep).push_back(f);
  if (!redo.empty()) {
    pivots_ = keep;
    for (const auto& f : redo) {
      Expr r = red_->reduce(Expr(f));
      if (r.isZero()) return Status::Inconsistent;
      addPivot(r.num());
    }
  }
  if (opts_->mindim) {
    syncPivots();
    HilbertFn bound = leaderBound(c_, opts_->designated);
    if (hilbertBelow(bound, *opts_->mindim)) {
      log_.push_back("pruned: bound " + bound.toString() + " below " + opts_->mindim->toString());
      return Status::Pruned;
    }
  }
  return Status::Done;
}

Status Worker::solve(const Classified& e) {
  Var l = e.leader;
  if (int(l.order()) > maxOrder_)
    throw CompletionBudgetExceeded("prolongation order " + std::to_string(l.order()) + " exceeds budget");
  Expr rhs = Expr::fraction(-e.p.coeff(l, 0), e.init);
  // Equations whose leaders are derivatives of l go back to pending.
  std::vector<SolvedEq> kept;
  for (auto& s : c_.solved) {
    if (isDerivOf(s.leader, l)) {
      pending_.push_back({(Expr(s.leader) - s.rhs).num(), false});
    } else {
      kept.push_back(std::move(s));
    }
  }
  c_.solved = std::move(kept);
  c_.solved.push_back({l, rhs});
  std::vector<Expr> keptC;
  for (auto& ce : c_.constraints) {
    if (containsDerivOf(ce, l))
      pending_.push_back({ce.num(), false});
    else
      keptC.push_back(ce);
  }
  c_.constraints = std::move(keptC);
  red_->rebuild();
  for (auto& s : c_.solved) {
    if (s.leader == l || !containsDerivOf(s.rhs, l)) continue;
    s.rhs = red_->reduce(s.rhs);
    versions_[s.leader] = ++clock_;
  }
  red_->rebuild();
  versions_[l] = ++clock_;
  for (auto& pe : pending_)
    if (pe.clean && containsDerivOf(pe.p, l)) pe.clean = false;
  return afterChange(l);
}

Status Worker::addConstraint(const Classified& e) {
  Var l = e.leader;
  if (int(l.order()) + 1 > maxOrder_)
    throw CompletionBudgetExceeded("prolongation order " + std::to_string(l.order() + 1) + " exceeds budget");
  std::vector<Expr> keptC;
  for (auto& ce : c_.constraints) {
    if (ce.num().contains(l))
      pending_.push_back({ce.num(), false});
    else
      keptC.push_back(ce);
  }
  c_.constraints = std::move(keptC);
  c_.constraints.push_back(Expr(e.p));
  red_->rebuild();
  for (auto& s : c_.solved) {
    if (s.rhs.num().degree(l) < e.deg && s.rhs.den().degree(l) < e.deg) continue;
    s.rhs = red_->reduce(s.rhs);
    versions_[s.leader] = ++clock_;
  }
  red_->rebuild();
  for (int i = 0; i < c_.vs.n(); ++i) pending_.push_back({totalDerive(c_.vs, Expr(e.p), i).num(), false});
  for (auto& pe : pending_)
    if (pe.clean && pe.p.degree(l) >= e.deg) pe.clean = false;
  return afterChange(l);
}

std::vector<Poly> Worker::conditions() {
  std::vector<Poly> out;
  for (std::size_t k = 0; k < c_.ranking.unknowns().size(); ++k) {
    NameId id = intern(c_.ranking.unknowns()[k]);
    std::vector<const SolvedEq*> same;
    for (const auto& s : c_.solved)
      if (s.leader.name() == id) same.push_back(&s);
    for (std::size_t i = 0; i < same.size(); ++i)
      for (std::size_t j = i + 1; j < same.size(); ++j) {
        const SolvedEq *a = same[i], *b = same[j];
        if (b->leader < a->leader) std::swap(a, b);
        auto key = std::make_tuple(a->leader.bits(), b->leader.bits(), versions_[a->leader], versions_[b->leader]);
        if (checked_.count(key)) continue;
        checked_.insert(key);
        if (chainSkip(same, a, b)) continue;
        MultiIndex g = lcmIndex(a->leader.index(), b->leader.index());
        if (int(order(g)) > maxOrder_)
          throw CompletionBudgetExceeded("integrability condition of order " + std::to_string(order(g)) +
                                         " exceeds budget");
        Expr cond = pairCondition(*red_, *a, *b);
        if (!cond.isZero()) out.push_back(cond.num());
      }
  }
  return out;
}

void Worker::branch(const std::vector<Poly>& eqs, const Poly& product, const std::vector<Poly>& factors) {
  Worker a(*this), b(*this);
  a.c_.path += "a";
  b.c_.path += "b";
  for (const auto& f : factors) a.addPivot(f);
  for (const auto& p : eqs) {
    a.pending_.push_back({p, false});
    b.pending_.push_back({p, false});
  }
  b.pending_.push_back({product, false});
  a.log_.push_back("split: assume nonzero");
  b.log_.push_back("split: assume zero");
  children.push_back(std::move(a));
  children.push_back(std::move(b));
}

Status Worker::run() {
  while (true) {
    // Reduce pending equations.
    std::vector<Poly> eqs;
    for (auto& pe : pending_) {
      Poly p = pe.p;
      if (!pe.clean) {
        Expr r = red_->reduce(Expr(p));
        if (r.isZero()) continue;
        p = r.num();
        if (!c_.ranking.hasUnknowns(p)) return Status::Inconsistent;
        p = stripKnown(p);
        if (p.isConstant()) return Status::Inconsistent;
      }
      if (std::find(eqs.begin(), eqs.end(), p) == eqs.end()) eqs.push_back(p);
    }
    pending_.clear();
    if (eqs.empty()) {
      auto conds = conditions();
      if (conds.empty()) {
        syncPivots();
        return Status::Done;
      }
      for (auto& p : conds) pending_.push_back({p, false});
      continue;
    }
    std::vector<Classified> cls;
    for (const auto& p : eqs) cls.push_back(classify(p));
    auto lowest = [&](auto pred) -> int {
      int best = -1;
      for (int i = 0; i < int(cls.size()); ++i) {
        if (!pred(cls[i])) continue;
        if (best < 0) {
          best = i;
          continue;
        }
        int c = c_.ranking.compare(cls[i].leader, cls[best].leader);
        if (c < 0 || (c == 0 && cls[i].p.size() < cls[best].p.size())) best = i;
      }
      return best;
    };
    auto requeue = [&](int except) {
      for (int i = 0; i < int(cls.size()); ++i)
        if (i != except) pending_.push_back({cls[i].p, true});
    };
    int pick = lowest([](const Classified& c) { return c.deg == 1 && c.initUnknown.isConstant(); });
    if (pick >= 0) {
      requeue(pick);
      Status s = solve(cls[pick]);
      if (s != Status::Done) return s;
      continue;
    }
    pick = lowest([](const Classified& c) { return c.deg > 1 && c.initUnknown.isConstant(); });
    if (pick >= 0) {
      const Classified& e = cls[pick];
      Poly sep = stripKnown(e.p.diff(e.leader));
      if (sep.isConstant() || !opts_->casesplit) {
        if (!sep.isConstant()) addPivot(sep);
        requeue(pick);
        Status s = addConstraint(e);
        if (s != Status::Done) return s;
        continue;
      }
      std::vector<Poly> factors;
      for (const auto& f : contentFactors(sep))
        if (c_.ranking.hasUnknowns(f)) factors.push_back(f);
      branch(eqs, sep, factors);
      return Status::Split;
    }
    // Every equation has an initial that may vanish: split on the lowest.
    pick = lowest([](const Classified&) { return true; });
    const Classified& e = cls[pick];
    std::vector<Poly> factors;
    for (const auto& f : contentFactors(e.initUnknown))
      if (c_.ranking.hasUnknowns(f)) factors.push_back(f);
    if (!opts_->casesplit) {
      for (const auto& f : factors) addPivot(f);
      log_.push_back("assumed nonzero without splitting");
      for (const auto& p : eqs) pending_.push_back({p, false});
      continue;
    }
    branch(eqs, e.initUnknown, factors);
    return Status::Split;
  }
}

int inputOrder(const DPS& s, const Ranking& r) {
  int m = 0;
  for (const auto& e : s.eqs)
    for (Var v : e.vars())
      if (r.isUnknown(v)) m = std::max(m, int(v.order()));
  return m;
}

void checkSpace(const DPS& s, const Ranking& r) {
  s.vs.validate();
  if (r.indep() != s.vs.indep()) throw InvalidInput("ranking and system have different independent variables");
  for (const auto& u : r.unknowns()) {
    NameId id = intern(u);
    auto role = s.vs.role(id);
    if (role == VarSpace::Role::Dep) continue;
    if (role == VarSpace::Role::Func && s.vs.argsOf(id) == s.vs.indep()) continue;
    throw InvalidInput("ranked unknown " + u + " must be a dependent variable or a function of all independents");
  }
}

}  // namespace

CompleteOptions defaultOptions() {
  CompleteOptions o;
  if (const char* b = std::getenv("DELIN_BUDGET")) {
    std::string s(b);
    auto colon = s.find(':');
    try {
      o.extraOrder = std::stoi(s.substr(0, colon));
      if (colon != std::string::npos) o.maxCases = std::stoi(s.substr(colon + 1));
    } catch (const std::exception&) {
      throw InvalidInput("DELIN_BUDGET must look like N or N:cases");
    }
  }
  return o;
}

Completion completeCases(const DPS& s, const Ranking& r, const CompleteOptions& o) {
  checkSpace(s, r);
  Completion out;
  RifCase root;
  root.vs = s.vs;
  root.ranking = r;
  int maxOrder = inputOrder(s, r) + o.extraOrder;
  std::vector<Worker> frontier;
  frontier.emplace_back(root, o, maxOrder);
  Worker& w = frontier.back();
  for (const auto& e : s.ineqs) {
    if (e.isZero()) return out;  // 0 != 0: empty locus
    w.addPivot(e.num());
  }
  for (const auto& e : s.eqs) {
    if (e.isZero()) continue;
    if (!e.isPolynomial()) w.addPivot(e.den());
    w.addEquation(e.num());
  }
  int leaves = 1;
  while (!frontier.empty()) {
    std::vector<Status> st(frontier.size());
    std::vector<std::exception_ptr> err(frontier.size());
    const int count = int(frontier.size());
#pragma omp parallel for schedule(dynamic) if (o.parallel && count > 1)
    for (int i = 0; i < count; ++i) {
      try {
        st[i] = frontier[i].run();
      } catch (...) {
        err[i] = std::current_exception();
      }
    }
    for (auto& e : err)
      if (e) std::rethrow_exception(e);
    std::vector<Worker> next;
    for (int i = 0; i < count; ++i) {
      Worker& wk = frontier[i];
      for (const auto& l : wk.log()) out.log.push_back((wk.path().empty() ? "root" : wk.path()) + ": " + l);
      switch (st[i]) {
        case Status::Done:
          out.cases.push_back(wk.result());
          break;
        case Status::Pruned:
          out.pruned.push_back(wk.path());
          break;
        case Status::Inconsistent:
          out.inconsistent.push_back(wk.path());
          break;
        case Status::Split:
          ++leaves;
          if (leaves > o.maxCases)
            throw CompletionBudgetExceeded("case count exceeds " + std::to_string(o.maxCases));
          for (auto& c : wk.children) next.push_back(std::move(c));
          break;
      }
    }
    frontier = std::move(next);
  }
  std::sort(out.cases.begin(), out.cases.end(), [](const RifCase& a, const RifCase& b) { return a.path < b.path; });
  std::sort(out.log.begin(), out.log.end());
  return out;
}

std::vector<RifCase> complete(const DPS& s, const Ranking& r, const CompleteOptions& o) {
  return completeCases(s, r, o).cases;
}

RifCase completeSingle(const DPS& s, const Ranking& r, const CompleteOptions& o) {
  CompleteOptions q = o;
  q.casesplit = false;
  auto cs = complete(s, r, q);
  if (cs.size() != 1) throw InvalidInput("system is inconsistent");
  return cs[0];
}

}  // namespace delin
