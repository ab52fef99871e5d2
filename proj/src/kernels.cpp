#include "delin/kernels.hpp"

#include <exception>

#include "delin/errors.hpp"

namespace delin {

std::vector<Expr> reduceBatchSerial(const RifCase& c, const std::vector<Expr>& es) {
  Reducer red(c);
  std::vector<Expr> out;
  out.reserve(es.size());
  for (const auto& e : es) out.push_back(red.reduce(e));
  return out;
}

std::vector<Expr> reduceBatch(const RifCase& c, const std::vector<Expr>& es) {
  std::vector<Expr> out(es.size());
  long n = long(es.size());
  std::exception_ptr failure;
#pragma omp parallel if (n > 1)
  {
    Reducer red(c);
#pragma omp for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
      try {
        out[std::size_t(i)] = red.reduce(es[std::size_t(i)]);
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

namespace {

std::vector<mpq_class> row(const std::vector<Expr>& es, const Point& p) {
  std::vector<mpq_class> r;
  r.reserve(es.size());
  try {
    for (const auto& e : es) r.push_back(evaluate(e, p));
  } catch (const DivisionByZeroExpr&) {
    r.clear();
  }
  return r;
}

// Brackets of basis elements through the constants: [e_i, e_j] = c[i][j].
std::vector<mpq_class> bracketWith(const LieStructure& L, const std::vector<mpq_class>& v, int k) {
  int d = L.dim();
  std::vector<mpq_class> r(std::size_t(d), 0);
  for (int i = 0; i < d; ++i) {
    if (v[std::size_t(i)] == 0) continue;
    for (int l = 0; l < d; ++l) r[std::size_t(l)] += v[std::size_t(i)] * L.c[std::size_t(i)][std::size_t(k)][std::size_t(l)];
  }
  return r;
}

bool jacobiAt(const LieStructure& L, int i, int j, int k) {
  auto a = bracketWith(L, L.c[std::size_t(i)][std::size_t(j)], k);
  auto b = bracketWith(L, L.c[std::size_t(j)][std::size_t(k)], i);
  auto e = bracketWith(L, L.c[std::size_t(k)][std::size_t(i)], j);
  for (std::size_t l = 0; l < a.size(); ++l)
    if (a[l] + b[l] + e[l] != 0) return false;
  return true;
}

}  // namespace

std::vector<std::vector<mpq_class>> evaluateBatchSerial(const std::vector<Expr>& es, const std::vector<Point>& pts) {
  std::vector<std::vector<mpq_class>> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(row(es, p));
  return out;
}

std::vector<std::vector<mpq_class>> evaluateBatch(const std::vector<Expr>& es, const std::vector<Point>& pts) {
  std::vector<std::vector<mpq_class>> out(pts.size());
  long n = long(pts.size());
#pragma omp parallel for schedule(dynamic) if (n > 1)
  for (long p = 0; p < n; ++p) out[std::size_t(p)] = row(es, pts[std::size_t(p)]);
  return out;
}

long jacobiViolationsSerial(const LieStructure& L) {
  int d = L.dim();
  long bad = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j)
      for (int k = j; k < d; ++k) bad += !jacobiAt(L, i, j, k);
  return bad;
}

long jacobiViolations(const LieStructure& L) {
  int d = L.dim();
  long bad = 0;
#pragma omp parallel for collapse(2) schedule(dynamic) reduction(+ : bad) if (d > 2)
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (j < i) continue;
      for (int k = j; k < d; ++k) bad += !jacobiAt(L, i, j, k);
    }
  return bad;
}

}  // namespace delin
