#include "soilmap/fee.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace soilmap::fee {

namespace {

constexpr double kSinFloor = 1e-9;

double n_gamma_of_beta(double phi, double delta, double rho, double alpha,
                       double beta) {
  const double e = delta + rho + phi + beta;
  const double se = std::sin(e);
  return (1.0 / std::tan(rho) + 1.0 / std::tan(beta)) *
         std::sin(alpha + phi + beta) / (2.0 * se);
}

}  // namespace

NFactors n_factors(const SoilProperties& soil, const CutGeometry& geom) {
  const double e = eta(soil, geom);
  const double sb = std::sin(geom.beta);
  const double sr = std::sin(geom.rho);
  const double se = std::sin(e);
  if (std::abs(sb) < kSinFloor || std::abs(sr) < kSinFloor ||
      std::abs(se) < kSinFloor) {
    throw DegenerateGeometry("n_factors: sine denominator underflow");
  }
  const double sab = std::sin(geom.alpha + soil.phi + geom.beta);
  NFactors n;
  n.n_gamma = (1.0 / std::tan(geom.rho) + 1.0 / std::tan(geom.beta)) * sab /
              (2.0 * se);
  n.n_q = sab / se;
  n.n_c = std::cos(soil.phi) / (sb * se);
  n.n_ca = -std::cos(geom.rho + soil.phi + geom.beta) / (sr * se);
  return n;
}

double fee_magnitude(const SoilProperties& soil, const CutGeometry& geom) {
  const NFactors n = n_factors(soil, geom);
  return soil.gamma * geom.d * geom.d * geom.w * n.n_gamma +
         soil.c * geom.d * geom.w * n.n_c + geom.Q * n.n_q +
         soil.c_a * geom.d * geom.w * n.n_ca;
}

ForceVec fee_force(const SoilProperties& soil, const CutGeometry& geom) {
  const double f = fee_magnitude(soil, geom);
  const double dir = geom.rho + soil.delta - geom.alpha;
  return ForceVec{f * std::sin(dir), f * std::cos(dir)};
}

std::optional<double> solve_beta(const SoilProperties& soil,
                                 const CutGeometry& geom) {
  const double phi = soil.phi;
  const double delta = soil.delta;
  const double rho = geom.rho;
  const double alpha = geom.alpha;

  double lo = 0.01;
  // keep eta inside (0.05, pi - 0.05) over the whole bracket
  double hi = std::min(M_PI_2 - 0.01, M_PI - 0.05 - (delta + rho + phi));
  if (!(hi > lo) || delta + rho + phi + lo < 0.05) return std::nullopt;

  auto f = [&](double b) { return n_gamma_of_beta(phi, delta, rho, alpha, b); };

  // flat objective (e.g. phi = delta = 0 on a vertical blade): no interior
  // stationary point worth reporting, defer to the nominal angle
  {
    const double fl = f(lo), fm = f(0.5 * (lo + hi)), fh = f(hi);
    const double spread = std::max({fl, fm, fh}) - std::min({fl, fm, fh});
    if (spread < 1e-9 * std::max(std::abs(fm), 1e-12)) return std::nullopt;
  }

  // golden-section minimization
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > 1e-11) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  const double beta_star = 0.5 * (a + b);

  // reject bracket-edge minima: they are not stationary points
  if (beta_star - lo < 1e-6 || hi - beta_star < 1e-6) return std::nullopt;
  const double h = 1e-7;
  const double dn = (f(beta_star + h) - f(beta_star - h)) / (2.0 * h);
  const double n0 = f(beta_star);
  if (std::abs(dn) > 1e-6 * std::max(std::abs(n0), 1e-12)) return std::nullopt;
  return beta_star;
}

double resolve_beta(const SoilProperties& soil, const CutGeometry& geom) {
  if (auto b = solve_beta(soil, geom)) return *b;
  return beta_nominal(soil.phi);
}

Eigen::Matrix<double, 2, 5> fee_jacobian(const SoilProperties& soil,
                                         const CutGeometry& geom) {
  Eigen::Matrix<double, 2, 5> jac;
  const Vec5 theta = soil.asVec();
  for (int k = 0; k < kNumSoilParams; ++k) {
    const double h = std::max(1e-6 * std::abs(theta[k]), 1e-9);
    Vec5 tp = theta, tm = theta;
    tp[k] += h;
    tm[k] -= h;
    const ForceVec fp = fee_force(SoilProperties::fromVec(tp), geom);
    const ForceVec fm = fee_force(SoilProperties::fromVec(tm), geom);
    jac(0, k) = (fp.fx - fm.fx) / (2.0 * h);
    jac(1, k) = (fp.fz - fm.fz) / (2.0 * h);
  }
  return jac;
}

std::vector<Eigen::Matrix2d> propagate_covariance(const Eigen::MatrixXd& jac,
                                                  const Vec5& s_theta) {
  const Vec5 var = s_theta.array().exp();
  std::vector<Eigen::Matrix2d> blocks;
  const Eigen::Index k = jac.rows() / 2;
  blocks.reserve(static_cast<size_t>(k));
  for (Eigen::Index t = 0; t < k; ++t) {
    const Eigen::Matrix<double, 2, 5> jt = jac.block<2, 5>(2 * t, 0);
    blocks.push_back(jt * var.asDiagonal() * jt.transpose());
  }
  return blocks;
}

ParamCovariance nullspace_inflate(const Eigen::MatrixXd& jac,
                                  const ParamCovariance& sigma_theta,
                                  const ParamCovariance& sigma_ambiguity,
                                  double a_tol, double r_tol) {
  // Columns carry heterogeneous units (N/Pa vs N/rad), so observability is
  // judged on the ambiguity-normalized Jacobian: a singular value is then the
  // force signal produced by a one-sigma excursion of that direction.
  const Vec5 scale = sigma_ambiguity.diag.cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd jn = jac * scale.asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      jn, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff =
      std::max(a_tol, sv.size() > 0 ? r_tol * sv[0] : a_tol);

  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] >= cutoff) inv[i] = 1.0 / sv[i];
  }
  const Eigen::MatrixXd pinv =
      svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
  const Eigen::Matrix<double, 5, 5> proj =
      Eigen::Matrix<double, 5, 5>::Identity() - pinv * jn;
  // unit ambiguity prior restricted to the unobserved subspace, mapped back
  // to physical scale; the cross terms matter: a weak direction dominated by
  // one parameter still shifts the others through its small components
  const Eigen::Matrix<double, 5, 5> sigma_n = scale.asDiagonal() *
                                              (proj * proj.transpose()) *
                                              scale.asDiagonal();

  ParamCovariance out;
  out.diag = sigma_theta.diag.cwiseMax(sigma_n.diagonal());
  return out;
}

double nll_loss(std::span<const ForceVec> f, std::span<const ForceVec> f_hat,
                std::span<const Eigen::Matrix2d> sigma_f) {
  const size_t n = f.size();
  double acc = 0.0;
  for (size_t t = 0; t < n; ++t) {
    const double det = sigma_f[t].determinant();
    if (det < 1e-12) {
      throw SingularCovariance("nll_loss: covariance determinant below floor");
    }
    Eigen::Vector2d e(f[t].fx - f_hat[t].fx, f[t].fz - f_hat[t].fz);
    acc += 0.5 * (e.dot(sigma_f[t].inverse() * e) + std::log(det));
  }
  return acc / static_cast<double>(n);
}

double wmae_loss(std::span<const ForceVec> f, std::span<const ForceVec> f_hat,
                 const Eigen::Vector2d& w_xz) {
  const size_t n = f.size();
  double acc = 0.0;
  for (size_t t = 0; t < n; ++t) {
    acc += w_xz[0] * std::abs(f[t].fx - f_hat[t].fx) +
           w_xz[1] * std::abs(f[t].fz - f_hat[t].fz);
  }
  return acc / static_cast<double>(n);
}

bool fee_validity(const SoilProperties& soil, const CutGeometry& geom,
                  const AngleLimits& limits) {
  if (geom.d < 0.0) return false;
  const double e = eta(soil, geom);
  if (geom.beta < limits.beta_min || geom.beta > limits.beta_max) return false;
  if (geom.rho < limits.rho_min || geom.rho > limits.rho_max) return false;
  if (e < limits.eta_min || e > limits.eta_max) return false;
  return true;
}

CutGeometry index_geometry() {
  CutGeometry g;
  g.alpha = 0.0;
  g.rho = 80.0 * M_PI / 180.0;
  g.d = 0.2;
  g.w = 1.85;
  g.Q = 0.0;
  return g;
}

double fee_index(const SoilProperties& soil) {
  CutGeometry g = index_geometry();
  g.beta = resolve_beta(soil, g);
  return fee_magnitude(soil, g);
}

}  // namespace soilmap::fee
