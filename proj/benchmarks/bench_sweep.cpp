#include <benchmark/benchmark.h>

#include "soilmap/sim.hpp"

using namespace soilmap;

namespace {

const double kDeg = M_PI / 180.0;

Scenario bench_scenario(int n) {
  Scenario sc = parse_scenario(R"({
    "default_soil": {"c": 8000, "phi_deg": 30, "gamma": 16000}
  })");
  sc.nx = n;
  sc.ny = n;
  sc.resolution = 0.1;
  return sc;
}

void BM_ProcessSweep(benchmark::State& state) {
  const Scenario sc = bench_scenario(static_cast<int>(state.range(0)));
  GridMap map = make_map(sc);
  BladePose pose0 =
      make_blade_pose({3.0, 0.05 * sc.ny, -0.12}, 0.0, 80.0 * kDeg, 1.85, 0.6);
  for (auto _ : state) {
    BladePose pose1 = pose0;
    pose1.p += Eigen::Vector3d(0.1, 0.0, 0.0);
    benchmark::DoNotOptimize(process_sweep(map, pose0, pose1, sc));
    pose0 = pose1;
    if (pose0.p.x() > 0.1 * sc.nx - 4.0) {
      // restart the pass on fresh terrain
      state.PauseTiming();
      map = make_map(sc);
      pose0 = make_blade_pose({3.0, 0.05 * sc.ny, -0.12}, 0.0, 80.0 * kDeg,
                              1.85, 0.6);
      state.ResumeTiming();
    }
  }
}
BENCHMARK(BM_ProcessSweep)->Arg(100)->Arg(200)->Arg(400)
    ->Unit(benchmark::kMillisecond);

void BM_FitWindow(benchmark::State& state) {
  SoilProperties truth{8e3, 0.5, 1000.0, 0.3, 1.6e4};
  MeasurementWindow win;
  win.alpha = 0.0;
  win.rho = 80.0 * kDeg;
  win.w = 1.85;
  CutGeometry g{0.0, win.rho, 0.0, win.w, 0.0, 0.0};
  g.beta = fee::resolve_beta(truth, g);
  const int steps = static_cast<int>(state.range(0));
  for (int t = 0; t < steps; ++t) {
    g.d = 0.01 + 0.24 * t / (steps - 1);
    g.Q = 150.0 * t;
    win.d.push_back(g.d);
    win.q.push_back(g.Q);
    win.f.push_back(fee::fee_force(truth, g));
  }
  EstimatorConfig cfg = EstimatorConfig::defaults();
  cfg.lower[2] = cfg.upper[2] = cfg.init[2] = 1000.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_soil_properties(win, cfg));
  }
}
BENCHMARK(BM_FitWindow)->Arg(10)->Arg(20)->Arg(40)
    ->Unit(benchmark::kMillisecond);

void BM_FeeMagnitude(benchmark::State& state) {
  SoilProperties s{8e3, 0.5, 1000.0, 0.3, 1.6e4};
  CutGeometry g{0.01, 80.0 * kDeg, 0.15, 1.85, 300.0, 0.0};
  g.beta = fee::resolve_beta(s, g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fee::fee_magnitude(s, g));
  }
}
BENCHMARK(BM_FeeMagnitude);

}  // namespace

BENCHMARK_MAIN();
