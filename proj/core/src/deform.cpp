#include "soilmap/deform.hpp"

#include <cmath>

namespace soilmap {

Eigen::Vector2d deposit_direction(const Eigen::Vector3d& n_hat,
                                  const Eigen::Vector3d& t_hat,
                                  double lambda_n) {
  const Eigen::Vector3d m = lambda_n * n_hat + (1.0 - lambda_n) * t_hat;
  Eigen::Vector2d h(m.x(), m.y());
  const double n = h.norm();
  if (n < 1e-9) {
    throw DegenerateDirection("deposit_direction: no horizontal component");
  }
  return h / n;
}

DepositCell get_deposit_cell(
    const GridMap& map, const Eigen::Vector2d& m_hat, const CellIndex& a,
    const std::unordered_set<CellIndex, CellIndexHash>& footprint) {
  const auto ray = dda_trace(map, a, m_hat, map.nx() + map.ny());
  for (const auto& c : ray) {
    if (!footprint.contains(c)) return {c, false};
  }
  if (!ray.empty()) return {ray.back(), true};
  return {a, true};
}

CutResult cut_and_deposit(GridMap& map, const std::vector<CellIndex>& cells,
                          const std::vector<double>& dh,
                          const Eigen::Vector3d& t_hat,
                          const Eigen::Vector3d& n_hat, double sigma_sv,
                          double swell, double lambda_n) {
  CutResult out;
  out.m_hat = deposit_direction(n_hat, t_hat, lambda_n);

  std::unordered_set<CellIndex, CellIndexHash> footprint(cells.begin(),
                                                         cells.end());
  out.deposit.reserve(cells.size());
  for (const auto& a : cells) {
    const DepositCell b = get_deposit_cell(map, out.m_hat, a, footprint);
    out.deposit.push_back(b.cell);
    if (b.fallback) ++out.fallback_deposits;
  }

  Eigen::ArrayXXd& h = map.elevation();
  Eigen::ArrayXXd& l = map.loose();
  Eigen::ArrayXXd& sig = map.sigma();

  const double g2 = map.resolution() * map.resolution();
  for (size_t k = 0; k < cells.size(); ++k) {
    const CellIndex a = cells[k];
    const CellIndex b = out.deposit[k];
    const double delta = dh[k];

    const double loose_pre = map.at(l, a);
    const double sigma_pre = map.at(sig, a);
    const double loose_part = std::min(delta, std::max(loose_pre, 0.0));
    const double fresh_part = delta - loose_part;
    out.disturbed_volume += g2 * fresh_part;

    map.at(h, a) -= delta;
    map.at(l, a) = std::max(loose_pre - delta, 0.0);
    map.at(sig, a) = std::max(std::max(sigma_pre - delta, 0.0), sigma_sv);

    // already-loose material moves without additional swell
    const double gain = loose_part + swell * fresh_part;
    map.at(h, b) += gain;
    map.at(l, b) += gain;
    const double dh_max = swell * (delta + sigma_pre) + sigma_sv;
    map.at(sig, b) = std::sqrt(map.at(sig, b) * map.at(sig, b) +
                               0.25 * dh_max * dh_max);

    // net loose change this pair: deposit gain minus loose removed at a
    out.delta_vq += g2 * (gain - loose_part);
  }
  return out;
}

}  // namespace soilmap
