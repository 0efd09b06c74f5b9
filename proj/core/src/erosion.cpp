#include "soilmap/erosion.hpp"

#include <algorithm>
#include <cmath>

namespace soilmap {

namespace {

double safety_factor(double alpha, double dh, const ErosionParams& p) {
  const double plane_len = dh / std::sin(alpha);
  const double weight = 0.5 * p.gamma_l * dh * dh / std::tan(alpha);
  return (p.c_l * plane_len + weight * std::cos(alpha) * std::tan(p.phi_l)) /
         (weight * std::sin(alpha));
}

}  // namespace

SlipCheck min_safety_factor(double dh, const ErosionParams& params, double g) {
  SlipCheck out;
  if (dh <= 1e-6) return out;

  const double lo = params.phi_l + 1e-3;
  const double hi = std::min(std::atan2(dh, g), M_PI_2 - 1e-3);
  if (hi <= lo) return out;

  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = safety_factor(x1, dh, params);
  double f2 = safety_factor(x2, dh, params);
  while (b - a > 1e-6) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = safety_factor(x1, dh, params);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = safety_factor(x2, dh, params);
    }
  }
  out.alpha_star = 0.5 * (a + b);
  out.f_min = safety_factor(out.alpha_star, dh, params);
  // the safety factor is often monotone; check the bracket ends too
  const double f_lo = safety_factor(lo, dh, params);
  const double f_hi = safety_factor(hi, dh, params);
  if (f_hi < out.f_min) {
    out.f_min = f_hi;
    out.alpha_star = hi;
  }
  if (f_lo < out.f_min) {
    out.f_min = f_lo;
    out.alpha_star = lo;
  }
  return out;
}

double compute_slip(double alpha_star, double dh, const ErosionParams& params,
                    double g, double dt) {
  (void)g;
  const double sa = std::sin(alpha_star);
  const double ca = std::cos(alpha_star);
  const double plane_len = dh / sa;
  const double weight = 0.5 * params.gamma_l * dh * dh / std::tan(alpha_star);
  const double mass = weight / params.g_grav;  // per unit width
  const double accel = params.g_grav * (sa - ca * std::tan(params.phi_l)) -
                       params.c_l * plane_len / mass;
  if (accel <= 0.0) return 0.0;
  const double v = accel * dt;
  return std::clamp(v * dt * sa, 0.0, 0.5 * dh);
}

long erode_roi(GridMap& map, const Eigen::Vector2d& blade_xy,
               const Eigen::Vector2d& m_hat, const ErosionMask& mask,
               const ErosionParams& params) {
  const double g = map.resolution();
  const auto& org = map.origin();
  const int ci = static_cast<int>(std::lround((blade_xy.x() - org.x()) / g));
  const int cj = static_cast<int>(std::lround((blade_xy.y() - org.y()) / g));
  const int r = static_cast<int>(std::ceil(params.d_roi / g));
  const int i0 = std::max(0, ci - r);
  const int i1 = std::min(map.nx() - 1, ci + r);
  const int j0 = std::max(0, cj - r);
  const int j1 = std::min(map.ny() - 1, cj + r);

  // the axis-aligned pair of exchange directions closest to m_hat
  const int di = m_hat.x() >= 0.0 ? 1 : -1;
  const int dj = m_hat.y() >= 0.0 ? 1 : -1;
  const std::array<std::array<int, 2>, 2> dirs = {{{di, 0}, {0, dj}}};

  Eigen::ArrayXXd& h = map.elevation();
  Eigen::ArrayXXd& l = map.loose();
  Eigen::ArrayXXd& sig = map.sigma();

  long slips = 0;
  const double repose_tan = std::tan(params.phi_l);

  for (int pass = 0; pass < params.iterations; ++pass) {
    for (int color = 0; color < 4; ++color) {
      const int pi = color % 2;
      const int pj = color / 2;
      for (int j = j0; j <= j1; ++j) {
        if (((j % 2) + 2) % 2 != pj) continue;
        for (int i = i0; i <= i1; ++i) {
          if (((i % 2) + 2) % 2 != pi) continue;
          if (mask.masked(i, j)) continue;  // no outflow from masked cells
          for (const auto& dir : dirs) {
            const int bi = i + dir[0];
            const int bj = j + dir[1];
            if (bi < 0 || bi >= map.nx() || bj < 0 || bj >= map.ny()) continue;

            const double dh = std::min(h(i, j) - h(bi, bj), l(i, j));
            if (dh <= 1e-9) continue;
            // slope at or below repose is stable regardless of cohesion
            if (dh <= g * repose_tan + 1e-12) continue;

            const SlipCheck sc = min_safety_factor(dh, params, g);
            if (sc.f_min >= 1.0) continue;
            double h_slip = compute_slip(sc.alpha_star, dh, params, g,
                                         params.dt);
            if (mask.masked(bi, bj)) {
              // soil may fill under a raised blade up to its bottom
              h_slip = std::min(h_slip,
                                std::max(mask.bottom(bi, bj) - h(bi, bj), 0.0));
            }
            if (h_slip <= 0.0) continue;

            h(i, j) -= h_slip;
            l(i, j) -= h_slip;
            sig(i, j) = std::max(sig(i, j) - h_slip, 0.0);
            h(bi, bj) += h_slip;
            l(bi, bj) += h_slip;
            sig(bi, bj) += h_slip;
            ++slips;
          }
        }
      }
    }
  }
  return slips;
}

}  // namespace soilmap
