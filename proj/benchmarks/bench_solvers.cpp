#include <benchmark/benchmark.h>

#include "affproj/affproj.hpp"

namespace {

using namespace affproj;

enum class Method { map, alg1, alg2 };

SolveResult solve(Method method, std::span<const AffineSet> sets, const Vector& x0,
                  WindowPolicy policy, const SolverOptions& opt) {
  const std::size_t k = sets.size();
  switch (method) {
    case Method::map:
      return run_map(sets, x0, CyclicSchedule::cyclic(0, k), opt);
    case Method::alg1:
      return run_alg1(sets, x0, CyclicSchedule::cyclic(0, k), policy, opt);
    case Method::alg2:
      return run_alg2(sets, x0, CyclicSchedule::cyclic(1, k), policy, opt);
  }
  return {};
}

WindowPolicy policy_for(Method method, std::int64_t q) {
  if (method == Method::map) {
    return WindowPolicy::all();
  }
  return q <= 0 ? WindowPolicy::all() : WindowPolicy::last_q(static_cast<std::size_t>(q));
}

void report(benchmark::State& state, const SolveResult& r) {
  state.counters["iterations"] = static_cast<double>(r.iterations);
  state.counters["converged"] = r.converged ? 1.0 : 0.0;
}

// range(0): q, 0 = keep all hyperplanes
template <Method method>
void BM_Experiment1(benchmark::State& state) {
  const auto ex = mmup::experiment1();
  const auto& prob = ex.problem;
  const Vector x0 = flatten(prob.x0());
  SolverOptions opt;
  opt.stop.tol = 1e-8;
  opt.stop.max_iter = 2000;
  opt.record_residuals = false;
  opt.metric = [&prob](const Vector& x) { return mmup::s_pencil_residual(prob, x); };
  opt.stop.measure = opt.metric;
  const auto policy = policy_for(method, state.range(0));
  SolveResult r;
  for (auto _ : state) {
    r = solve(method, prob.sets(), x0, policy, opt);
    benchmark::DoNotOptimize(r.solution.data());
  }
  report(state, r);
}

template <Method method>
void BM_Experiment2(benchmark::State& state) {
  const auto ex = mmup::experiment2();
  const auto& prob = ex.problem;
  const Vector x0 = flatten(prob.x0());
  SolverOptions opt;
  opt.stop.tol = 1e-10;
  opt.stop.max_iter = 200;
  opt.record_residuals = false;
  opt.metric = [&prob](const Vector& x) { return mmup::s_pencil_residual(prob, x); };
  opt.stop.measure = opt.metric;
  const auto policy = policy_for(method, state.range(0));
  SolveResult r;
  for (auto _ : state) {
    r = solve(method, prob.sets(), x0, policy, opt);
    benchmark::DoNotOptimize(r.solution.data());
  }
  report(state, r);
}

// range(0): dimension, range(1): q
template <Method method>
void BM_RandomFamily(benchmark::State& state) {
  RandomFamilySpec spec;
  spec.dim = state.range(0);
  spec.k = 3;
  spec.seed = 11;
  const auto fam = make_random_family(spec);
  SolverOptions opt;
  opt.stop.tol = 1e-10;
  opt.stop.max_iter = 20000;
  opt.record_residuals = false;
  const auto policy = policy_for(method, state.range(1));
  SolveResult r;
  for (auto _ : state) {
    r = solve(method, fam.sets, fam.x0, policy, opt);
    benchmark::DoNotOptimize(r.solution.data());
  }
  report(state, r);
}

void BM_DirectProjection(benchmark::State& state) {
  RandomFamilySpec spec;
  spec.dim = state.range(0);
  spec.k = 3;
  spec.seed = 11;
  const auto fam = make_random_family(spec);
  const auto rows = stack(fam.sets);
  for (auto _ : state) {
    Vector p = direct_projection(fam.x0, rows);
    benchmark::DoNotOptimize(p.data());
  }
}

}  // namespace

BENCHMARK(BM_Experiment1<Method::map>)->Arg(0)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Experiment1<Method::alg1>)->DenseRange(2, 5)->Arg(0)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Experiment1<Method::alg2>)->DenseRange(1, 5)->Arg(0)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Experiment2<Method::map>)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Experiment2<Method::alg1>)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Experiment2<Method::alg2>)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RandomFamily<Method::map>)->Args({20, 0})->Args({60, 0})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RandomFamily<Method::alg1>)
    ->Args({20, 3})
    ->Args({60, 3})
    ->Args({60, 0})
    ->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RandomFamily<Method::alg2>)
    ->Args({20, 2})
    ->Args({60, 2})
    ->Args({60, 0})
    ->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_DirectProjection)->Arg(20)->Arg(60)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
