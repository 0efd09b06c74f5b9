#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "soilmap/erosion.hpp"
#include "soilmap/estimator.hpp"
#include "soilmap/fusion.hpp"
#include "soilmap/sweep.hpp"
#include "soilmap/types.hpp"

namespace soilmap {

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GaussianBump {
  double x = 0.0;
  double y = 0.0;
  double amplitude = 0.0;
  double stddev = 1.0;
};

struct TerrainSpec {
  double base = 0.0;
  std::vector<GaussianBump> bumps;
  // optional seeded randomization, mixture-of-Gaussians hills and dips
  int random_bumps = 0;
  double random_amplitude = 0.15;
  double random_std_min = 0.5;
  double random_std_max = 2.0;
};

/// Axis-aligned soil region; later regions override earlier ones.
struct SoilRegion {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
  SoilProperties soil;

  bool contains(double x, double y) const {
    return x >= x0 && x <= x1 && y >= y0 && y <= y1;
  }
};

/// One straight blade push.
struct PushSpec {
  double x = 0.0, y = 0.0;  // cutting-edge start position
  double heading = 0.0;     // rad
  double length = 3.0;      // m
  double depth_start = 0.0;
  double depth_end = 0.1;
  int steps = 50;
  double rake = 80.0 * M_PI / 180.0;
  double yaw = 0.0;
};

struct Scenario {
  int nx = 200;
  int ny = 200;
  double resolution = 0.1;
  Eigen::Vector2d origin = Eigen::Vector2d::Zero();
  double h0 = 0.0;
  double sigma0 = 0.05;
  SoilProperties prior_theta;
  Vec5 prior_var;

  TerrainSpec terrain;
  std::vector<SoilRegion> regions;  // regions[0] is the default region
  std::vector<PushSpec> pushes;

  double noise_std = 0.0;  // force noise, N
  double gamma_l = 15000.0;
  double swell = 1.2;
  double sigma_sv = 0.01;
  double lambda_n = 0.5;

  ErosionParams erosion;
  EstimatorConfig estimator = EstimatorConfig::defaults();
  ExtractParams extract;
  FusionParams fusion;
  int window_horizon = 40;

  double blade_width = 1.85;
  double blade_height = 0.6;
  double trans_min = -1.0;  // < 0 means resolution / 2
  double rot_min = 2.0 * M_PI / 180.0;

  std::uint64_t seed = 0;

  /// The region soil at (x, y); last matching region wins.
  const SoilProperties& soilAt(double x, double y) const;
  double transMin() const {
    return trans_min > 0.0 ? trans_min : 0.5 * resolution;
  }
};

Scenario load_scenario(const std::filesystem::path& file);
Scenario parse_scenario(const std::string& json_text);

/// CSV window schema: header then rows t,alpha,rho,w,d,Q,Fx,Fz
/// (alpha/rho fixed per window; first data row wins).
MeasurementWindow load_window_csv(const std::filesystem::path& file);
void save_window_csv(const MeasurementWindow& window,
                     const std::filesystem::path& file);

}  // namespace soilmap
