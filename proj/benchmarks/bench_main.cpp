#include <vector>

#include <benchmark/benchmark.h>

#include <skewflow/attractor.hpp>
#include <skewflow/chaos.hpp>
#include <skewflow/cocycle.hpp>
#include <skewflow/nonlinear.hpp>
#include <skewflow/systems.hpp>

using namespace skewflow;

namespace {

// polar linear integration over a unit of time per iteration
void BM_PolarIntegration(benchmark::State& state) {
  const auto fam = systems::quasiperiodic(0.2);
  const double horizon = static_cast<double>(state.range(0));
  TrajectoryOptions opt;
  opt.output_dt = horizon;
  for (auto _ : state) {
    auto traj = integrate_polar_linear(fam, TorusPoint::origin(2), 0.3, 0.0, horizon, opt);
    benchmark::DoNotOptimize(traj.back().log_r);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PolarIntegration)->Arg(100)->Arg(1000);

void BM_NonlinearFull(benchmark::State& state) {
  const auto fam = systems::autonomous_hopf(0.5);
  NonlinearOptions opt;
  opt.trajectory.output_dt = 50.0;
  for (auto _ : state) {
    auto traj = integrate_full(fam, TorusPoint::origin(1), {0.0, 2.0}, 50.0, opt);
    benchmark::DoNotOptimize(traj.back().y.x);
  }
}
BENCHMARK(BM_NonlinearFull);

void BM_Cocycle(benchmark::State& state) {
  const auto fam = systems::quasiperiodic(0.1);
  for (auto _ : state) {
    auto res = propagate_cocycle(fam, TorusPoint::origin(2), 1000.0);
    benchmark::DoNotOptimize(res.state.log_scale);
  }
}
BENCHMARK(BM_Cocycle);

// one base point, 16 angles
void BM_PullbackFiber(benchmark::State& state) {
  const auto cfg = make_dissipative(systems::quasiperiodic(state.range(0) / 100.0), 0.1);
  const auto angles = projective_angles(16);
  for (auto _ : state) {
    auto est = pullback_fiber(cfg, TorusPoint::origin(2), angles);
    benchmark::DoNotOptimize(est.front().value);
  }
}
BENCHMARK(BM_PullbackFiber)->Arg(50)->Arg(0)->Unit(benchmark::kMillisecond);

// one base point, 32 angles, t = 500
void BM_DensityFiber(benchmark::State& state) {
  const auto fam = systems::quasiperiodic_rotating(0.0);
  const auto angles = projective_angles(32);
  for (auto _ : state) {
    auto v = density_fiber(fam, TorusPoint::origin(2), angles, 500.0);
    benchmark::DoNotOptimize(v.front());
  }
}
BENCHMARK(BM_DensityFiber)->Unit(benchmark::kMillisecond);

void BM_PairTrack(benchmark::State& state) {
  const auto cfg = make_dissipative(systems::quasiperiodic(0.5), 0.1);
  PairOptions opt;
  opt.horizon = 2000.0;
  for (auto _ : state) {
    auto d = pair_distance_track(cfg, TorusPoint::origin(2), {0.1, 0.5}, {1.2, 1.0}, opt);
    benchmark::DoNotOptimize(d.d_min);
  }
}
BENCHMARK(BM_PairTrack)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
