#include <benchmark/benchmark.h>

#include "fiberorient/validation.hpp"

namespace {

using namespace fo;

ModelSpec make_spec(ModelKind m, ClosureKind c, double CI) {
  ModelSpec s;
  s.model = m;
  s.closure = c;
  s.params.CI = CI;
  return s;
}

void BM_Closure(benchmark::State& st, ClosureKind kind) {
  const Mat3 a = unpack(reference_state());
  for (auto _ : st) benchmark::DoNotOptimize(eval_closure(kind, a));
}
BENCHMARK_CAPTURE(BM_Closure, LIN, ClosureKind::LIN);
BENCHMARK_CAPTURE(BM_Closure, HYB1, ClosureKind::HYB1);
BENCHMARK_CAPTURE(BM_Closure, HL2, ClosureKind::HL2);
BENCHMARK_CAPTURE(BM_Closure, IBOF, ClosureKind::IBOF);
BENCHMARK_CAPTURE(BM_Closure, ORT, ClosureKind::ORT);
BENCHMARK_CAPTURE(BM_Closure, VST, ClosureKind::VST);

void BM_ModelJacobian(benchmark::State& st, ModelKind model) {
  const auto spec = jacobian_grid_spec(model, ClosureKind::ORT);
  const auto flow = decompose(jacobian_grid_velocity_gradient());
  const Mat3 a = unpack(reference_state());
  for (auto _ : st) benchmark::DoNotOptimize(model_jacobian(spec, a, flow));
}
BENCHMARK_CAPTURE(BM_ModelJacobian, FT, ModelKind::FT);
BENCHMARK_CAPTURE(BM_ModelJacobian, pARD, ModelKind::pARD);
BENCHMARK_CAPTURE(BM_ModelJacobian, pARD_RSC, ModelKind::pARD_RSC);

void BM_NewtonShear(benchmark::State& st) {
  const auto spec = make_spec(ModelKind::FT, ClosureKind::VST, 0.0311);
  const auto flow = build_flow(FlowPreset{FlowKind::SS, 1.0, std::nullopt});
  const Vec5 guess = default_guess(FlowKind::SS);
  for (auto _ : st) benchmark::DoNotOptimize(newton_steady(spec, flow, guess));
}
BENCHMARK(BM_NewtonShear)->Unit(benchmark::kMicrosecond);

// 1000 RK4 steps, no recording.
void BM_Rk4Shear(benchmark::State& st) {
  const auto spec = make_spec(ModelKind::FT, ClosureKind::ORT, 0.0311);
  const auto flow = build_flow(FlowPreset{FlowKind::SS, 1.0, std::nullopt});
  Rk4Options o;
  o.t_end = 10.0;
  o.steady_tol = 0.0;
  o.record_every = 0;
  const Vec5 a0 = pack(Mat3::Identity() / 3.0);
  for (auto _ : st) benchmark::DoNotOptimize(rk4_transient(spec, flow, a0, o));
  st.SetItemsProcessed(st.iterations() * 1000);
}
BENCHMARK(BM_Rk4Shear)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
