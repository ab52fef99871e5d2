// Parallel kernels against their serial references.
#include <benchmark/benchmark.h>

#include <random>

#include "delin/kernels.hpp"
#include "delin/mapde.hpp"
#include "delin/parser.hpp"

using namespace delin;

namespace {

std::string systemsDir() { return DELIN_SYSTEMS_DIR; }

const RifCase& ode3() {
  static RifCase R = [] {
    DPS s = readSystemFile(systemsDir() + "/ode3.sys").dps;
    return completeSingle(s, Ranking::orderly(s.vs), defaultOptions());
  }();
  return R;
}

// Random jet polynomials up to one order above the leader.
std::vector<Expr> workload(int n) {
  std::mt19937 rng(1);
  std::vector<Var> vars{Var::symbol("x"), Var::deriv("u", {})};
  MultiIndex a{};
  for (int k = 1; k <= 4; ++k) {
    a[0] = std::uint8_t(k);
    vars.push_back(Var::deriv("u", a));
  }
  std::vector<Expr> es;
  for (int i = 0; i < n; ++i) {
    Expr e;
    for (int t = 0; t < 4; ++t) {
      Expr m(long(rng() % 9) - 4);
      for (int f = 0; f < 2; ++f) m = m * Expr(vars[rng() % vars.size()]);
      e = e + m;
    }
    es.push_back(e);
  }
  return es;
}

std::vector<Point> points(int n) {
  std::mt19937 rng(2);
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i)
    pts.push_back({{Var::symbol("x"), mpq_class(long(rng() % 17) + 1, 3)},
                   {Var::deriv("u", {}), mpq_class(long(rng() % 13) + 1, 5)},
                   {Var::deriv("u", unitIndex(0)), mpq_class(long(rng() % 11))},
                   {Var::deriv("u", addIndex(unitIndex(0), unitIndex(0))), mpq_class(long(rng() % 5))}});
  return pts;
}

void BM_ReduceSerial(benchmark::State& st) {
  auto es = workload(int(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(reduceBatchSerial(ode3(), es));
}
void BM_ReduceParallel(benchmark::State& st) {
  auto es = workload(int(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(reduceBatch(ode3(), es));
}

void BM_EvaluateSerial(benchmark::State& st) {
  std::vector<Expr> es{ode3().solved[0].rhs};
  auto pts = points(int(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(evaluateBatchSerial(es, pts));
}
void BM_EvaluateParallel(benchmark::State& st) {
  std::vector<Expr> es{ode3().solved[0].rhs};
  auto pts = points(int(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(evaluateBatch(es, pts));
}

LieStructure randomAlgebra(int d) {
  std::mt19937 rng(3);
  LieStructure L;
  for (int i = 0; i < d; ++i) L.basis.push_back("Y" + std::to_string(i + 1));
  L.c.assign(std::size_t(d), std::vector<std::vector<mpq_class>>(std::size_t(d), std::vector<mpq_class>(std::size_t(d))));
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        mpq_class v(long(rng() % 5) - 2);
        L.c[std::size_t(i)][std::size_t(j)][std::size_t(k)] = v;
        L.c[std::size_t(j)][std::size_t(i)][std::size_t(k)] = -v;
      }
  return L;
}

void BM_JacobiSerial(benchmark::State& st) {
  LieStructure L = randomAlgebra(int(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(jacobiViolationsSerial(L));
}
void BM_JacobiParallel(benchmark::State& st) {
  LieStructure L = randomAlgebra(int(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(jacobiViolations(L));
}

// Mapping system of the d = 3 LGM equation, which splits into cases.
const MappingSystem& lgm3Mapping() {
  static MappingSystem ms = [] {
    DPS s = readSystemFile(systemsDir() + "/lgm3.sys").dps;
    RifCase R = completeSingle(s, Ranking::orderly(s.vs), defaultOptions());
    DetSystem S = detSys(R);
    return assembleMappingSystem(S, R.vs, defaultMapAnsatz(R.vs, S.sys.vs));
  }();
  return ms;
}

void BM_CasesSerial(benchmark::State& st) {
  CompleteOptions o = defaultOptions();
  o.parallel = false;
  for (auto _ : st) benchmark::DoNotOptimize(completeCases(lgm3Mapping().M, lgm3Mapping().ranking, o));
}
void BM_CasesParallel(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(completeCases(lgm3Mapping().M, lgm3Mapping().ranking, defaultOptions()));
}

}  // namespace

BENCHMARK(BM_ReduceSerial)->Arg(16)->Arg(64);
BENCHMARK(BM_ReduceParallel)->Arg(16)->Arg(64);
BENCHMARK(BM_EvaluateSerial)->Arg(256)->Arg(2048);
BENCHMARK(BM_EvaluateParallel)->Arg(256)->Arg(2048);
BENCHMARK(BM_JacobiSerial)->Arg(8)->Arg(16);
BENCHMARK(BM_JacobiParallel)->Arg(8)->Arg(16);
BENCHMARK(BM_CasesSerial);
BENCHMARK(BM_CasesParallel);

BENCHMARK_MAIN();
