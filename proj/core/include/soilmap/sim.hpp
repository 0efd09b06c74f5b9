#pragma once

#include <random>
#include <vector>

#include "soilmap/deform.hpp"
#include "soilmap/erosion.hpp"
#include "soilmap/estimator.hpp"
#include "soilmap/fusion.hpp"
#include "soilmap/scenario.hpp"
#include "soilmap/sweep.hpp"

namespace soilmap {

/// Fills the elevation layer: base + sum of Gaussian bumps, plus the seeded
/// random mixture when requested. Deterministic for a given rng state.
void generate_terrain(GridMap& map, const TerrainSpec& spec,
                      std::mt19937_64& rng);

/// Map construction per the scenario: terrain seeded from scenario.seed.
GridMap make_map(const Scenario& sc);

/// Ground-truth force at the given geometry and soil, beta from its
/// stationarity condition, plus independent Gaussian noise per component.
ForceVec synth_force(const SoilProperties& true_soil, CutGeometry geom,
                     double noise_std, std::mt19937_64& rng);

struct SweepRecord {
  int push = 0;
  int step = 0;
  bool updated = false;          // movement gate result
  bool extracted = false;
  double alpha = 0.0;
  double rho = 0.0;
  double d = 0.0;
  double w = 0.0;
  double q = 0.0;                // surcharge, N
  double vq = 0.0;               // loose volume ahead of the blade, m^3
  double delta_vq = 0.0;
  double disturbed_volume = 0.0; // pre-swell, m^3
  ForceVec force;
  bool fitted = false;
  SoilEstimate estimate;
  double nll = 0.0;
  double fit_residual = 0.0;     // mean slice-fit RMS residual, m
  int cells_fused = 0;
  long slips = 0;
  double millis = 0.0;
};

struct RunReport {
  std::vector<SweepRecord> sweeps;
  int sweeps_executed = 0;       // movement-gate passes
  int fits = 0;
  int cells_fused_total = 0;
  long slips_total = 0;
  double initial_volume = 0.0;
  double final_volume = 0.0;
  double disturbed_volume = 0.0; // total pre-swell disturbed volume, m^3
  double ledger_error = 0.0;     // relative volume-conservation error
  double total_millis = 0.0;
  Eigen::ArrayXXi update_count;  // per-cell fusion updates
};

struct RunResult {
  GridMap map;
  RunReport report;
};

/// Terrain-side half of one sweep: swept volume, heightmap intersection,
/// parameter extraction against the pre-cut surface, cut/deposit, and the
/// masked erosion relaxation. Leaves estimation and fusion to the caller.
struct SweepOutcome {
  bool updated = false;
  std::optional<ExtractedFee> extracted;
  CutResult cut;
  long slips = 0;
  Eigen::Vector3d t_hat = Eigen::Vector3d::UnitX();
};

SweepOutcome process_sweep(GridMap& map, const BladePose& t0,
                           const BladePose& t1, const Scenario& sc);

/// Full pipeline over the scenario's push script. Per gated sweep:
/// extract -> synthesize ground-truth force -> cut/deposit -> fit the
/// accumulated push window -> fuse into the property layers -> erode.
/// Gate-skipped steps are backfilled by linear interpolation of (d, Q).
RunResult run_scenario(const Scenario& sc);

}  // namespace soilmap
