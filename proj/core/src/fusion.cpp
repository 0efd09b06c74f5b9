#include "soilmap/fusion.hpp"

#include <cmath>

#include "soilmap/fee.hpp"

namespace soilmap {

std::optional<double> wedge_extent(double d, double alpha, double beta) {
  const double denom =
      std::cos(alpha) * (std::tan(alpha + beta) - std::tan(alpha));
  if (!(std::abs(denom) > 1e-9) || !std::isfinite(denom)) return std::nullopt;
  return d / denom;
}

int update_soil_layers(GridMap& map, const SoilEstimate& est,
                       const std::vector<std::pair<CellIndex, double>>& cells,
                       double d, double alpha, double beta,
                       const FusionParams& params,
                       std::vector<CellIndex>* updated_out) {
  const auto x_max = wedge_extent(d, alpha, beta);
  const Vec5 theta_m = est.theta.asVec();

  int updated = 0;
  for (const auto& [cell, x] : cells) {
    const bool valid = (x_max && x < *x_max) || x < params.x_min;
    if (!valid) continue;

    const double scale = x_max ? std::exp(params.c_s * x / *x_max) : 1.0;
    for (int k = 0; k < kNumSoilParams; ++k) {
      if (est.var.diag[k] >= params.var_skip[k]) continue;
      const double var_meas = scale * est.var.diag[k];
      double& mu = map.at(map.propertyMean(k), cell);
      double& var = map.at(map.propertyVar(k), cell);
      const double denom = var + var_meas;
      mu = (var_meas * mu + var * theta_m[k]) / denom;
      var = (var_meas * var) / denom;
    }
    if (updated_out) updated_out->push_back(cell);
    ++updated;
  }
  return updated;
}

Eigen::ArrayXXd fee_index_layer(const GridMap& map) {
  Eigen::ArrayXXd out(map.nx(), map.ny());
  for (int j = 0; j < map.ny(); ++j) {
    for (int i = 0; i < map.nx(); ++i) {
      try {
        out(i, j) = fee::fee_index(map.propertyMeansAt({i, j}));
      } catch (const DegenerateGeometry&) {
        out(i, j) = std::numeric_limits<double>::quiet_NaN();
      }
    }
  }
  return out;
}

}  // namespace soilmap
