#include <benchmark/benchmark.h>

#include "haantjes/candidate.hpp"
#include "haantjes/concomitants.hpp"
#include "haantjes/hydro.hpp"
#include "haantjes/manifest.hpp"
#include "haantjes/pipeline.hpp"
#include "haantjes/symmetry_metric.hpp"

namespace {

using namespace haantjes;

void BM_Jet1Operator(benchmark::State& state) {
  const auto m = load_manifest("a3-frobenius");
  const auto k = m.field("K3");
  const std::vector<double> p = m.chart.base;
  for (auto _ : state) benchmark::DoNotOptimize(jet1(*k, std::span<const double>(p)));
}
BENCHMARK(BM_Jet1Operator);

void BM_NijenhuisTorsion(benchmark::State& state) {
  const auto k = make_expr_field(3, Valence::Tensor11, {"0", "1", "0", "0", "0", "1", "u1", "u2", "u3"});
  const std::vector<double> p = {0.5, -0.3, 0.7};
  for (auto _ : state) benchmark::DoNotOptimize(nijenhuis_torsion(*k, p));
}
BENCHMARK(BM_NijenhuisTorsion);

void BM_HaantjesTorsion(benchmark::State& state) {
  const auto k = make_expr_field(3, Valence::Tensor11, {"0", "1", "0", "0", "0", "1", "u1", "u2", "u3"});
  const std::vector<double> p = {0.5, -0.3, 0.7};
  for (auto _ : state) benchmark::DoNotOptimize(haantjes_torsion(*k, p));
}
BENCHMARK(BM_HaantjesTorsion);

void BM_FrameRiemannOracle(benchmark::State& state) {
  const auto m = load_manifest("scaling");
  const auto c = candidate_from_manifest(m);
  for (auto _ : state) benchmark::DoNotOptimize(riemann_from_metric_oracle(c, m.field("E"), m.chart.base));
}
BENCHMARK(BM_FrameRiemannOracle);

void BM_FullCertification(benchmark::State& state) {
  const auto m = load_manifest("a3-frobenius");
  CheckOptions o;
  o.points = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_checks(m, o));
}
BENCHMARK(BM_FullCertification)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_Rk4Step(benchmark::State& state) {
  const auto m = load_manifest("a3-frobenius");
  const auto u0 = initial_state(m.chart, m.simulate, static_cast<int>(state.range(0)));
  const auto k = m.field("K2");
  for (auto _ : state) benchmark::DoNotOptimize(integrate_flow(u0, *k, m.chart, 1e-4, 1));
}
BENCHMARK(BM_Rk4Step)->Arg(128)->Arg(512)->Unit(benchmark::kMicrosecond);

void BM_Rk4StepFourier(benchmark::State& state) {
  const auto m = load_manifest("a3-frobenius");
  const auto u0 = initial_state(m.chart, m.simulate, static_cast<int>(state.range(0)));
  const auto k = m.field("K2");
  for (auto _ : state)
    benchmark::DoNotOptimize(integrate_flow(u0, *k, m.chart, 1e-4, 1, SpatialOperator::Fourier));
}
BENCHMARK(BM_Rk4StepFourier)->Arg(128)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
