#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "soilmap/gridmap.hpp"
#include "soilmap/types.hpp"

namespace soilmap {

/// Per-sweep soil-property estimate with diagonal covariance.
struct SoilEstimate {
  SoilProperties theta;
  ParamCovariance var;
  bool rank_deficient = false;
  bool no_contact = false;
  int iterations = 0;
  double rms = 0.0;
};

/// Horizontal reach of the failure wedge:
/// x_max = d / (cos(alpha) (tan(alpha + beta) - tan(alpha))).
/// nullopt when the denominator underflows; callers fall back to x_min only.
std::optional<double> wedge_extent(double d, double alpha, double beta);

struct FusionParams {
  double c_s = 1.0;    // covariance inflation rate over the wedge
  double x_min = 0.2;  // minimum marking distance, m
  // parameters whose measurement variance reaches this threshold carry no
  // information (they sit in the estimator's ambiguity nullspace) and are
  // left out of the update; infinity fuses everything
  Vec5 var_skip = Vec5::Constant(std::numeric_limits<double>::infinity());
};

/// Per-parameter scalar Gaussian fusion of the estimate into the map's
/// mean/variance layers over the wedge cells. Measurement variance is
/// inflated by exp(C_s x / x_max) with distance from the blade; cells beyond
/// both x_max and x_min are untouched. Returns the number of updated cells.
int update_soil_layers(GridMap& map, const SoilEstimate& est,
                       const std::vector<std::pair<CellIndex, double>>& cells,
                       double d, double alpha, double beta,
                       const FusionParams& params = {},
                       std::vector<CellIndex>* updated_out = nullptr);

/// Soil-strength index of each cell's fused means; NaN where the index
/// geometry degenerates.
Eigen::ArrayXXd fee_index_layer(const GridMap& map);

}  // namespace soilmap
