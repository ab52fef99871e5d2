#pragma once

#include <random>
#include <vector>

#include "delin/symexpr.hpp"

namespace testsupport {

using namespace delin;

inline MultiIndex mi(std::initializer_list<int> l) {
  MultiIndex m{};
  int i = 0;
  for (int v : l) m[i++] = std::uint8_t(v);
  return m;
}

inline Poly randomPoly(std::mt19937& rng, const std::vector<Var>& vars, int terms, int maxDeg, int coeffRange = 5) {
  std::uniform_int_distribution<int> cd(-coeffRange, coeffRange), dd(0, maxDeg);
  std::vector<Term> ts;
  for (int t = 0; t < terms; ++t) {
    Monomial m;
    for (Var v : vars) {
      int e = dd(rng);
      if (e && dd(rng) > maxDeg / 2) m = m * Monomial(v, e);
    }
    int c = cd(rng);
    if (c) ts.push_back({m, mpq_class(c)});
  }
  return Poly::fromTerms(ts);
}

inline mpq_class randomRational(std::mt19937& rng, int range = 9) {
  std::uniform_int_distribution<int> nd(-range, range), dd(1, range);
  mpq_class q(nd(rng), dd(rng));
  q.canonicalize();
  return q;
}

inline Point randomPoint(std::mt19937& rng, const std::vector<Var>& vars) {
  Point p;
  for (Var v : vars) p[v] = randomRational(rng);
  return p;
}

}  // namespace testsupport
