#include <benchmark/benchmark.h>

#include "ppopt/compiler.hpp"
#include "ppopt/groebner.hpp"
#include "ppopt/linalg.hpp"
#include "ppopt/mpc.hpp"
#include "ppopt/poly_io.hpp"
#include "ppopt/solver.hpp"

using namespace ppopt;

namespace {

const ExpansionResult& duffing_expansion() {
  static ExpansionResult exp = expand_horizon(duffing_problem());
  return exp;
}

const CompiledProblem& duffing_artifact() {
  static CompiledProblem artifact = [] {
    CompiledProblem a = compile(duffing_expansion().program);
    a.mpc = duffing_expansion().metadata;
    return a;
  }();
  return artifact;
}

void BM_PolynomialMultiply(benchmark::State& state) {
  RingPtr ring = Ring::make({"u", "v", "x"});
  QPolynomial a = parse_polynomial("(u + 2*v - x + 1)^4", ring);
  QPolynomial b = parse_polynomial("(u - v + 3*x - 2)^4", ring);
  for (auto _ : state) {
    benchmark::DoNotOptimize(a * b);
  }
}
BENCHMARK(BM_PolynomialMultiply);

void BM_BuchbergerQuinticBranch(benchmark::State& state) {
  const auto& program = duffing_expansion().program;
  KktSystem sys = kkt_subideal(program, ActiveSet{0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(buchberger(sys.ideal, MonomialOrder::grevlex()));
  }
}
BENCHMARK(BM_BuchbergerQuinticBranch);

void BM_ClassifyBranch(benchmark::State& state) {
  const auto& program = duffing_expansion().program;
  KktSystem sys = kkt_subideal(program, ActiveSet{static_cast<std::uint32_t>(state.range(0))});
  for (auto _ : state) {
    benchmark::DoNotOptimize(classify_and_build(sys, MonomialOrder::grevlex()));
  }
}
BENCHMARK(BM_ClassifyBranch)->Arg(0)->Arg(1)->Arg(64);

void BM_OfflineCompile(benchmark::State& state) {
  const auto& program = duffing_expansion().program;
  CompileOptions opts;
  opts.jobs = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(compile(program, opts));
  }
}
BENCHMARK(BM_OfflineCompile)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_EigenDecompose(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  SplitMix64 rng(7);
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m.at(i, j) = rng.next_signed_unit();
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(eigen_decompose(m));
  }
}
BENCHMARK(BM_EigenDecompose)->Arg(5)->Arg(20)->Arg(50);

void BM_OnlineSolve(benchmark::State& state) {
  OnlineSolver solver(duffing_artifact());
  std::vector<double> x = {2.5, 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(solver.solve(x));
  }
}
BENCHMARK(BM_OnlineSolve)->Unit(benchmark::kMillisecond);

void BM_ClosedLoopStep(benchmark::State& state) {
  OnlineSolver solver(duffing_artifact());
  std::vector<double> x = {2.5, 1.0};
  for (auto _ : state) {
    Trajectory t = simulate(solver, x, 1);
    benchmark::DoNotOptimize(t);
  }
}
BENCHMARK(BM_ClosedLoopStep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
