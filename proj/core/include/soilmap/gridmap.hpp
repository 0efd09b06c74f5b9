#pragma once

#include <optional>
#include <string>
#include <vector>

#include "soilmap/types.hpp"

namespace soilmap {

struct CellIndex {
  int i = 0;  // x index
  int j = 0;  // y index

  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

struct CellIndexHash {
  size_t operator()(const CellIndex& c) const {
    return std::hash<long long>()((static_cast<long long>(c.i) << 32) ^
                                  static_cast<unsigned>(c.j));
  }
};

/// Multi-layer raster terrain. elevation is the full surface height including
/// loose material; loose tracks the disturbed thickness of that surface;
/// sigma is the 1-sigma height uncertainty. Soil-property mean/variance
/// layers follow the global (c, phi, c_a, delta, gamma) order.
class GridMap {
 public:
  GridMap(int nx, int ny, double resolution, const Eigen::Vector2d& origin,
          double h0, double sigma0, const SoilProperties& theta0,
          const ParamCovariance& var0);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double resolution() const { return g_; }
  const Eigen::Vector2d& origin() const { return origin_; }

  bool inBounds(const CellIndex& c) const {
    return c.i >= 0 && c.i < nx_ && c.j >= 0 && c.j < ny_;
  }
  /// Nearest-cell-center convention: i = round((x - origin_x) / g).
  std::optional<CellIndex> worldToCell(double x, double y) const;
  Eigen::Vector2d cellCenter(const CellIndex& c) const {
    return origin_ + g_ * Eigen::Vector2d(c.i, c.j);
  }

  Eigen::ArrayXXd& elevation() { return elevation_; }
  const Eigen::ArrayXXd& elevation() const { return elevation_; }
  Eigen::ArrayXXd& loose() { return loose_; }
  const Eigen::ArrayXXd& loose() const { return loose_; }
  Eigen::ArrayXXd& sigma() { return sigma_; }
  const Eigen::ArrayXXd& sigma() const { return sigma_; }
  Eigen::ArrayXXd& propertyMean(int k) { return theta_mean_[k]; }
  const Eigen::ArrayXXd& propertyMean(int k) const { return theta_mean_[k]; }
  Eigen::ArrayXXd& propertyVar(int k) { return theta_var_[k]; }
  const Eigen::ArrayXXd& propertyVar(int k) const { return theta_var_[k]; }

  double& at(Eigen::ArrayXXd& layer, const CellIndex& c) const {
    return layer(c.i, c.j);
  }
  double at(const Eigen::ArrayXXd& layer, const CellIndex& c) const {
    return layer(c.i, c.j);
  }

  SoilProperties propertyMeansAt(const CellIndex& c) const;

  /// Canonical layer names, in export order.
  static const std::vector<std::string>& layerNames();
  const Eigen::ArrayXXd& layer(const std::string& name) const;
  Eigen::ArrayXXd& layer(const std::string& name);

 private:
  int nx_;
  int ny_;
  double g_;
  Eigen::Vector2d origin_;
  Eigen::ArrayXXd elevation_;
  Eigen::ArrayXXd loose_;
  Eigen::ArrayXXd sigma_;
  std::array<Eigen::ArrayXXd, kNumSoilParams> theta_mean_;
  std::array<Eigen::ArrayXXd, kNumSoilParams> theta_var_;
};

/// Supercover grid traversal: every cell the ray from the start-cell center
/// crosses, in order, start cell excluded, truncated at the raster edge or
/// max_cells. dir must be unit length.
std::vector<CellIndex> dda_trace(const GridMap& map, const CellIndex& start,
                                 const Eigen::Vector2d& dir, int max_cells);

/// g^2 * sum of layer values.
double total_volume(const GridMap& map, const Eigen::ArrayXXd& layer);

}  // namespace soilmap
