#include "soilmap/gridmap.hpp"

#include <cmath>

namespace soilmap {

GridMap::GridMap(int nx, int ny, double resolution,
                 const Eigen::Vector2d& origin, double h0, double sigma0,
                 const SoilProperties& theta0, const ParamCovariance& var0)
    : nx_(nx), ny_(ny), g_(resolution), origin_(origin) {
  if (nx <= 0 || ny <= 0 || !(resolution > 0.0)) {
    throw InvalidDimensions("GridMap: nx, ny and resolution must be positive");
  }
  if ((var0.diag.array() <= 0.0).any()) {
    throw InvalidDimensions("GridMap: prior variances must be positive");
  }
  elevation_ = Eigen::ArrayXXd::Constant(nx, ny, h0);
  loose_ = Eigen::ArrayXXd::Zero(nx, ny);
  sigma_ = Eigen::ArrayXXd::Constant(nx, ny, sigma0);
  const Vec5 t0 = theta0.asVec();
  for (int k = 0; k < kNumSoilParams; ++k) {
    theta_mean_[k] = Eigen::ArrayXXd::Constant(nx, ny, t0[k]);
    theta_var_[k] = Eigen::ArrayXXd::Constant(nx, ny, var0.diag[k]);
  }
}

std::optional<CellIndex> GridMap::worldToCell(double x, double y) const {
  const CellIndex c{static_cast<int>(std::lround((x - origin_.x()) / g_)),
                    static_cast<int>(std::lround((y - origin_.y()) / g_))};
  if (!inBounds(c)) return std::nullopt;
  return c;
}

SoilProperties GridMap::propertyMeansAt(const CellIndex& c) const {
  Vec5 v;
  for (int k = 0; k < kNumSoilParams; ++k) v[k] = theta_mean_[k](c.i, c.j);
  return SoilProperties::fromVec(v);
}

const std::vector<std::string>& GridMap::layerNames() {
  static const std::vector<std::string> names = {
      "elevation",  "loose",      "sigma",     "c_mean",    "phi_mean",
      "c_a_mean",   "delta_mean", "gamma_mean", "c_var",    "phi_var",
      "c_a_var",    "delta_var",  "gamma_var"};
  return names;
}

const Eigen::ArrayXXd& GridMap::layer(const std::string& name) const {
  return const_cast<GridMap*>(this)->layer(name);
}

Eigen::ArrayXXd& GridMap::layer(const std::string& name) {
  if (name == "elevation") return elevation_;
  if (name == "loose") return loose_;
  if (name == "sigma") return sigma_;
  static const std::array<std::string, 5> params = {"c", "phi", "c_a", "delta",
                                                    "gamma"};
  for (int k = 0; k < kNumSoilParams; ++k) {
    if (name == params[k] + "_mean") return theta_mean_[k];
    if (name == params[k] + "_var") return theta_var_[k];
  }
  throw std::out_of_range("GridMap: unknown layer " + name);
}

std::vector<CellIndex> dda_trace(const GridMap& map, const CellIndex& start,
                                 const Eigen::Vector2d& dir, int max_cells) {
  std::vector<CellIndex> out;
  if (!map.inBounds(start) || max_cells <= 0) return out;

  const int step_i = dir.x() > 0 ? 1 : (dir.x() < 0 ? -1 : 0);
  const int step_j = dir.y() > 0 ? 1 : (dir.y() < 0 ? -1 : 0);
  if (step_i == 0 && step_j == 0) return out;

  // parametric distance (in cell units) to the next x / y boundary,
  // starting from the cell center
  double t_max_x = step_i != 0 ? 0.5 / std::abs(dir.x())
                               : std::numeric_limits<double>::infinity();
  double t_max_y = step_j != 0 ? 0.5 / std::abs(dir.y())
                               : std::numeric_limits<double>::infinity();
  const double t_delta_x = step_i != 0 ? 1.0 / std::abs(dir.x())
                                       : std::numeric_limits<double>::infinity();
  const double t_delta_y = step_j != 0 ? 1.0 / std::abs(dir.y())
                                       : std::numeric_limits<double>::infinity();

  CellIndex cur = start;
  auto emit = [&](const CellIndex& c) {
    if (!map.inBounds(c)) return false;
    out.push_back(c);
    return static_cast<int>(out.size()) < max_cells;
  };

  while (true) {
    if (std::abs(t_max_x - t_max_y) < 1e-12) {
      // corner crossing: supercover visits both axis neighbors first
      if (!emit({cur.i + step_i, cur.j})) return out;
      if (!emit({cur.i, cur.j + step_j})) return out;
      cur.i += step_i;
      cur.j += step_j;
      if (!emit(cur)) return out;
      t_max_x += t_delta_x;
      t_max_y += t_delta_y;
    } else if (t_max_x < t_max_y) {
      cur.i += step_i;
      if (!emit(cur)) return out;
      t_max_x += t_delta_x;
    } else {
      cur.j += step_j;
      if (!emit(cur)) return out;
      t_max_y += t_delta_y;
    }
  }
}

double total_volume(const GridMap& map, const Eigen::ArrayXXd& layer) {
  return map.resolution() * map.resolution() * layer.sum();
}

}  // namespace soilmap
