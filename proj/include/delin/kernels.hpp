#pragma once

#include <vector>

#include "delin/dec.hpp"
#include "delin/liesym.hpp"

namespace delin {

// OpenMP kernels. Each has a serial reference that the tests compare against
// and bench/ times against.

// Normal forms of `es` modulo case c; one Reducer per thread.
std::vector<Expr> reduceBatch(const RifCase& c, const std::vector<Expr>& es);
std::vector<Expr> reduceBatchSerial(const RifCase& c, const std::vector<Expr>& es);

// values[p][i] = es[i] at pts[p]; a point where some denominator vanishes
// gets an empty row.
std::vector<std::vector<mpq_class>> evaluateBatch(const std::vector<Expr>& es, const std::vector<Point>& pts);
std::vector<std::vector<mpq_class>> evaluateBatchSerial(const std::vector<Expr>& es, const std::vector<Point>& pts);

// Number of triples (i <= j <= k) violating the Jacobi identity.
long jacobiViolations(const LieStructure& L);
long jacobiViolationsSerial(const LieStructure& L);

}  // namespace delin
