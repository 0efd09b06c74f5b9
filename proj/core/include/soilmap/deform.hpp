#pragma once

#include <unordered_set>
#include <vector>

#include "soilmap/gridmap.hpp"
#include "soilmap/sweep.hpp"

namespace soilmap {

/// Deposit direction: normalized horizontal projection of
/// lambda_n * n_hat + (1 - lambda_n) * t_hat.
/// Throws DegenerateDirection when the blend has no horizontal component.
Eigen::Vector2d deposit_direction(const Eigen::Vector3d& n_hat,
                                  const Eigen::Vector3d& t_hat,
                                  double lambda_n);

/// First cell along the grid ray from `a` in direction m_hat that lies
/// outside the footprint; clamps at the raster edge. fallback is set when
/// the whole ray stayed inside the footprint.
struct DepositCell {
  CellIndex cell;
  bool fallback = false;
};
DepositCell get_deposit_cell(
    const GridMap& map, const Eigen::Vector2d& m_hat, const CellIndex& a,
    const std::unordered_set<CellIndex, CellIndexHash>& footprint);

struct CutResult {
  std::vector<CellIndex> deposit;  // B, aligned with the input cells
  double delta_vq = 0.0;           // blade-front loose-volume change, m^3
  double disturbed_volume = 0.0;   // newly disturbed (pre-swell) volume, m^3
  int fallback_deposits = 0;
  Eigen::Vector2d m_hat = Eigen::Vector2d::UnitX();
};

/// Algorithm: move each intersected cell's displaced height to its deposit
/// cell. Only the newly-disturbed fraction of dh swells by s; material that
/// was already loose moves at unit ratio. Height uncertainty grows on the
/// deposit side by a conservative 1-sigma displacement bound.
CutResult cut_and_deposit(GridMap& map, const std::vector<CellIndex>& cells,
                          const std::vector<double>& dh,
                          const Eigen::Vector3d& t_hat,
                          const Eigen::Vector3d& n_hat, double sigma_sv,
                          double swell, double lambda_n);

}  // namespace soilmap
