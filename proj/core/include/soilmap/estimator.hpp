#pragma once

#include <vector>

#include "soilmap/fee.hpp"
#include "soilmap/fusion.hpp"
#include "soilmap/types.hpp"

namespace soilmap {

/// A multi-step window of known geometry and measured forces for inversion.
struct MeasurementWindow {
  double alpha = 0.0;
  double rho = 80.0 * M_PI / 180.0;
  double w = 1.85;
  std::vector<double> d;       // per-step depth of cut, m
  std::vector<double> q;       // per-step surcharge force, N
  std::vector<ForceVec> f;     // per-step measured force
  Eigen::Vector2d w_xz{1.0, 0.5};

  size_t steps() const { return f.size(); }
};

struct EstimatorConfig {
  Vec5 lower;
  Vec5 upper;
  Vec5 init;
  Vec5 sigma_ambiguity;
  int max_iterations = 60;
  double step_tol = 1e-10;  // on the bound-normalized step norm
  double a_tol = 1500.0;
  double r_tol = 0.05;

  static EstimatorConfig defaults();
};

/// Bound-constrained Levenberg-Marquardt inversion of the cutting-force
/// model over the window, with Gauss-Newton covariance and nullspace
/// variance inflation. beta is resolved per iterate by its stationarity
/// condition (nominal fallback), never optimized directly.
SoilEstimate fit_soil_properties(const MeasurementWindow& window,
                                 const EstimatorConfig& cfg);

/// Diagnostic: mean Gaussian NLL of the window under the estimate's
/// propagated force covariance.
double nll_report(const MeasurementWindow& window, const SoilEstimate& est);

/// Stacked 2P x 5 force Jacobian at theta over the window's geometry.
Eigen::MatrixXd window_jacobian(const MeasurementWindow& window,
                                const SoilProperties& theta);

}  // namespace soilmap
