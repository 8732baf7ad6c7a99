#include <benchmark/benchmark.h>

#include "cutfn/construct.hpp"
#include "cutfn/limit.hpp"
#include "cutfn/verify.hpp"

namespace {

using cutfn::EpsilonSchedule;
using cutfn::PwlFunction;
using cutfn::Rational;

EpsilonSchedule standard() {
  return EpsilonSchedule::geometric(Rational(1, 2), Rational(1, 2),
                                    Rational(1, 4));
}

void BM_Build(benchmark::State& state) {
  EpsilonSchedule s = standard();
  auto depth = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    PwlFunction f = cutfn::build(s, depth);
    benchmark::DoNotOptimize(f.breakpoints().size());
  }
}
BENCHMARK(BM_Build)->Arg(6)->Arg(10)->Arg(12);

void BM_VertexScan(benchmark::State& state) {
  EpsilonSchedule s = standard();
  PwlFunction f = cutfn::build(s, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto r = cutfn::check_subadditive(f, {});
    benchmark::DoNotOptimize(r.holds);
  }
}
BENCHMARK(BM_VertexScan)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_VertexScanGeneric(benchmark::State& state) {
  EpsilonSchedule s = standard();
  PwlFunction f = cutfn::build(s, static_cast<std::size_t>(state.range(0)));
  cutfn::CheckOptions opts;
  opts.force_generic = true;
  for (auto _ : state) {
    auto r = cutfn::check_subadditive(f, opts);
    benchmark::DoNotOptimize(r.holds);
  }
}
BENCHMARK(BM_VertexScanGeneric)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_Eval(benchmark::State& state) {
  EpsilonSchedule s = standard();
  PwlFunction f = cutfn::build(s, 10);
  Rational x(355, 1130);
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.eval(x));
  }
}
BENCHMARK(BM_Eval);

void BM_EvalLimit(benchmark::State& state) {
  EpsilonSchedule s = standard();
  Rational x(355, 1130), tol(1, 1000000000L);
  for (auto _ : state) {
    auto e = cutfn::eval_limit(s, x, tol);
    benchmark::DoNotOptimize(e.depth);
  }
}
BENCHMARK(BM_EvalLimit);

}  // namespace

BENCHMARK_MAIN();
