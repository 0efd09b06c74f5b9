#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "soilmap/gridmap_io.hpp"
#include "soilmap/sim.hpp"

using namespace soilmap;
namespace fs = std::filesystem;

namespace {

const double kDeg = M_PI / 180.0;

const char* kSmallScenario = R"({
  "map": {"nx": 120, "ny": 80, "resolution": 0.1, "h0": 0.0, "sigma0": 0.05},
  "default_soil": {"c": 8000, "phi_deg": 30, "c_a": 500, "delta_deg": 18,
                   "gamma": 16000},
  "pushes": [{"start": [2.0, 4.0], "heading_deg": 0, "length": 3.0,
              "depth_start": 0.0, "depth_end": 0.1, "steps": 30}],
  "noise_std": 0.0,
  "seed": 11
})";

}  // namespace

TEST_CASE("parse_scenario fills fields and defaults") {
  const Scenario sc = parse_scenario(kSmallScenario);
  CHECK(sc.nx == 120);
  CHECK(sc.ny == 80);
  CHECK(sc.resolution == doctest::Approx(0.1));
  REQUIRE(sc.pushes.size() == 1);
  CHECK(sc.pushes[0].steps == 30);
  CHECK(sc.pushes[0].rake == doctest::Approx(80.0 * kDeg));
  CHECK(sc.swell == doctest::Approx(1.2));
  CHECK(sc.erosion.c_l == doctest::Approx(25.0));
  CHECK(sc.erosion.phi_l == doctest::Approx(0.26));
  // default region covers the raster
  REQUIRE(!sc.regions.empty());
  CHECK(sc.soilAt(5.0, 3.0).c == doctest::Approx(8000.0));
  CHECK(sc.soilAt(5.0, 3.0).phi == doctest::Approx(30.0 * kDeg));
}

TEST_CASE("later regions override earlier ones") {
  Scenario sc = parse_scenario(R"({
    "default_soil": {"c": 1000, "phi_deg": 20, "gamma": 14000},
    "regions": [
      {"rect": [0, 0, 10, 10], "soil": {"c": 5000, "phi_deg": 25}},
      {"rect": [4, 4, 6, 6], "soil": {"c": 30000, "phi_deg": 35}}
    ]
  })");
  CHECK(sc.soilAt(15.0, 15.0).c == doctest::Approx(1000.0));
  CHECK(sc.soilAt(2.0, 2.0).c == doctest::Approx(5000.0));
  CHECK(sc.soilAt(5.0, 5.0).c == doctest::Approx(30000.0));
}

TEST_CASE("invalid scenarios raise ScenarioError") {
  CHECK_THROWS_AS(parse_scenario("{not json"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario(R"({"pushes": [{"start": [0, 0],
    "steps": 1}]})"),
                  ScenarioError);
  CHECK_THROWS_AS(parse_scenario(R"({"pushes": [{"length": 3}]})"),
                  ScenarioError);
}

TEST_CASE("window csv round-trips") {
  MeasurementWindow w;
  w.alpha = 0.02;
  w.rho = 1.4;
  w.w = 1.85;
  for (int t = 0; t < 5; ++t) {
    w.d.push_back(0.01 * t);
    w.q.push_back(30.0 * t);
    w.f.push_back({100.0 * t, -20.0 * t});
  }
  const fs::path file = fs::temp_directory_path() / "soilmap_window.csv";
  save_window_csv(w, file);
  const MeasurementWindow back = load_window_csv(file);
  REQUIRE(back.steps() == 5);
  CHECK(back.alpha == doctest::Approx(0.02));
  CHECK(back.rho == doctest::Approx(1.4));
  for (int t = 0; t < 5; ++t) {
    CHECK(back.d[t] == doctest::Approx(w.d[t]));
    CHECK(back.q[t] == doctest::Approx(w.q[t]));
    CHECK(back.f[t].fx == doctest::Approx(w.f[t].fx));
  }
  fs::remove(file);
}

TEST_CASE("generate_terrain: flat, bump peak, determinism") {
  Scenario sc = parse_scenario(R"({"map": {"nx": 50, "ny": 50}})");
  GridMap flat = make_map(sc);
  CHECK(flat.elevation().maxCoeff() == doctest::Approx(0.0));

  sc = parse_scenario(R"({
    "map": {"nx": 50, "ny": 50},
    "terrain": {"bumps": [{"x": 2.5, "y": 2.5, "amplitude": 0.3, "std": 1.0}]}
  })");
  GridMap bump = make_map(sc);
  CHECK(bump.elevation().maxCoeff() == doctest::Approx(0.3).epsilon(1e-3));
  auto peak = bump.worldToCell(2.5, 2.5);
  CHECK(bump.elevation()(peak->i, peak->j) ==
        doctest::Approx(0.3).epsilon(1e-6));

  sc = parse_scenario(R"({
    "map": {"nx": 50, "ny": 50},
    "terrain": {"random_bumps": 8, "random_amplitude": 0.2},
    "seed": 99
  })");
  GridMap a = make_map(sc);
  GridMap b = make_map(sc);
  CHECK((a.elevation() == b.elevation()).all());
  CHECK(a.elevation().abs().maxCoeff() > 0.0);
}

TEST_CASE("synth_force lies on the force-model manifold when noiseless") {
  std::mt19937_64 rng(1);
  SoilProperties soil{0.0, 0.5, 0.0, 0.3, 16000.0};
  CutGeometry g{0.0, 80.0 * kDeg, 0.1, 1.85, 0.0, 0.0};
  const ForceVec f1 = synth_force(soil, g, 0.0, rng);
  g.d = 0.2;
  const ForceVec f2 = synth_force(soil, g, 0.0, rng);
  // with c = c_a = Q = 0 only the gamma d^2 term remains: doubling d
  // quadruples the force
  CHECK(f2.magnitude() == doctest::Approx(4.0 * f1.magnitude()).epsilon(1e-9));
}

TEST_CASE("synth_force noise is zero-mean") {
  std::mt19937_64 rng(2);
  SoilProperties soil{5e3, 0.5, 1e3, 0.3, 16000.0};
  CutGeometry g{0.0, 80.0 * kDeg, 0.15, 1.85, 300.0, 0.0};
  std::mt19937_64 clean_rng(0);
  const ForceVec f0 = synth_force(soil, g, 0.0, clean_rng);
  double mx = 0.0, mz = 0.0;
  const int n = 10000;
  for (int k = 0; k < n; ++k) {
    const ForceVec f = synth_force(soil, g, 50.0, rng);
    mx += f.fx;
    mz += f.fz;
  }
  mx /= n;
  mz /= n;
  CHECK(std::abs(mx - f0.fx) < 3.0 * 50.0 / 100.0);
  CHECK(std::abs(mz - f0.fz) < 3.0 * 50.0 / 100.0);
}

TEST_CASE("an empty sweep script yields the generated terrain") {
  Scenario sc = parse_scenario(R"({"map": {"nx": 40, "ny": 40}})");
  const RunResult res = run_scenario(sc);
  CHECK(res.report.sweeps_executed == 0);
  CHECK(res.report.sweeps.empty());
  CHECK(res.report.ledger_error == doctest::Approx(0.0));
  CHECK((res.map.elevation() == make_map(sc).elevation()).all());
}

TEST_CASE("a homogeneous push fuses the property layers toward the truth") {
  const Scenario sc = parse_scenario(kSmallScenario);
  const RunResult res = run_scenario(sc);
  CHECK(res.report.sweeps_executed > 10);
  CHECK(res.report.fits > 5);
  CHECK(res.report.ledger_error < 1e-6);

  double phi_err = 0.0;
  int cells = 0;
  for (int j = 0; j < res.map.ny(); ++j) {
    for (int i = 0; i < res.map.nx(); ++i) {
      if (res.report.update_count(i, j) > 0) {
        phi_err += std::abs(res.map.propertyMean(1)(i, j) - 30.0 * kDeg);
        ++cells;
      }
    }
  }
  REQUIRE(cells > 0);
  CHECK(phi_err / cells < 2.0 * kDeg);
}

TEST_CASE("identical seeds reproduce the run bit-for-bit") {
  const Scenario sc = parse_scenario(kSmallScenario);
  const RunResult a = run_scenario(sc);
  const RunResult b = run_scenario(sc);
  for (const auto& name : GridMap::layerNames()) {
    CHECK((a.map.layer(name) == b.map.layer(name)).all());
  }
  REQUIRE(a.report.sweeps.size() == b.report.sweeps.size());
  CHECK(a.report.cells_fused_total == b.report.cells_fused_total);
  CHECK(a.report.final_volume == b.report.final_volume);
}

TEST_CASE("the synthesis soil follows the region under the blade edge") {
  Scenario sc = parse_scenario(R"({
    "map": {"nx": 40, "ny": 40},
    "default_soil": {"c": 2000, "phi_deg": 25, "gamma": 14000},
    "regions": [{"rect": [2, 0, 4, 4], "soil": {"c": 25000, "phi_deg": 38,
                 "gamma": 19000}}]
  })");
  CHECK(sc.soilAt(1.0, 1.0).c == doctest::Approx(2000.0));
  CHECK(sc.soilAt(3.0, 1.0).c == doctest::Approx(25000.0));
  CHECK(sc.soilAt(3.0, 5.0).c == doctest::Approx(2000.0));
}
