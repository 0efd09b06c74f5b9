#pragma once

#include <limits>
#include <vector>

#include "soilmap/gridmap.hpp"

namespace soilmap {

struct ErosionParams {
  double c_l = 25.0;     // loose cohesion, Pa
  double phi_l = 0.26;   // loose friction angle, rad
  double gamma_l = 15000.0;  // loose unit weight, N/m^3
  double dt = 0.05;      // erosion timestep, s
  int iterations = 10;
  double d_roi = 3.0;    // ROI half-extent, m
  double g_grav = 9.81;  // gravitational acceleration, m/s^2
};

/// Blade / swept-volume mask: no material leaves a masked cell, and inflow
/// into a masked cell is capped at the gap under the volume bottom.
struct ErosionMask {
  ErosionMask(int nx, int ny)
      : masked(Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(
            nx, ny, false)),
        bottom(Eigen::ArrayXXd::Zero(nx, ny)) {}
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> masked;
  Eigen::ArrayXXd bottom;

  void set(const std::vector<CellIndex>& cells,
           const std::vector<double>& heights) {
    for (size_t k = 0; k < cells.size(); ++k) {
      masked(cells[k].i, cells[k].j) = true;
      bottom(cells[k].i, cells[k].j) = heights[k];
    }
  }
};

struct SlipCheck {
  double f_min = std::numeric_limits<double>::infinity();
  double alpha_star = 0.0;
};

/// Minimum factor of safety of a unit-width triangular wedge with free-face
/// height dh over a cell span g: failure plane at angle alpha through the
/// toe, L = dh/sin(alpha), W = gamma_l dh^2 / (2 tan(alpha)),
/// F_s = (c_l L + W cos(alpha) tan(phi_l)) / (W sin(alpha)).
/// Returns (inf, 0) when dh is negligible or the bracket is empty.
SlipCheck min_safety_factor(double dh, const ErosionParams& params, double g);

/// Slipped height from one Euler step of the downslope acceleration,
/// capped at dh/2. Callers must ensure f_min < 1 first.
double compute_slip(double alpha_star, double dh, const ErosionParams& params,
                    double g, double dt);

/// One erosion call: `iterations` passes of 4-color tiled pair exchanges
/// within the square ROI of half-extent d_roi around blade_xy. The two
/// exchange neighbors per cell are the axis directions closest to m_hat.
/// Returns the number of pair slips applied.
long erode_roi(GridMap& map, const Eigen::Vector2d& blade_xy,
               const Eigen::Vector2d& m_hat, const ErosionMask& mask,
               const ErosionParams& params);

}  // namespace soilmap
