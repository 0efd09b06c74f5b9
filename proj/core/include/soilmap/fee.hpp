#pragma once

#include <optional>
#include <span>
#include <vector>

#include "soilmap/types.hpp"

namespace soilmap::fee {

/// Dimensionless coefficients of the earthmoving force balance.
struct NFactors {
  double n_gamma = 0.0;
  double n_c = 0.0;
  double n_q = 0.0;
  double n_ca = 0.0;
};

/// Clipping limits outside of which the force model is considered invalid.
struct AngleLimits {
  double beta_min = 0.01;
  double beta_max = M_PI_2 - 0.01;
  double rho_min = 0.1;
  double rho_max = M_PI - 0.1;
  double eta_min = 0.05;
  double eta_max = M_PI - 0.05;
};

/// eta = delta + rho + phi + beta.
inline double eta(const SoilProperties& soil, const CutGeometry& geom) {
  return soil.delta + geom.rho + soil.phi + geom.beta;
}

/// N_gamma, N_c, N_Q, N_ca for the given configuration.
/// Throws DegenerateGeometry when sin(beta), sin(rho) or sin(eta) underflows.
NFactors n_factors(const SoilProperties& soil, const CutGeometry& geom);

/// Scalar cutting-force magnitude:
/// f = gamma d^2 w N_gamma + c d w N_c + Q N_Q + c_a d w N_ca.
double fee_magnitude(const SoilProperties& soil, const CutGeometry& geom);

/// Force vector f * (sin(rho+delta-alpha), cos(rho+delta-alpha)).
ForceVec fee_force(const SoilProperties& soil, const CutGeometry& geom);

/// Nominal failure angle pi/4 - phi/2 (frictionless vertical blade limit).
inline double beta_nominal(double phi) { return M_PI_4 - 0.5 * phi; }

/// Failure angle that makes N_gamma stationary in beta, found by bracketed
/// 1-D minimization over (0.01, pi/2 - 0.01) restricted to valid eta.
/// Returns nullopt when the bracket holds no interior minimum; callers fall
/// back to beta_nominal. Depends only on (phi, delta, rho, alpha).
std::optional<double> solve_beta(const SoilProperties& soil,
                                 const CutGeometry& geom);

/// solve_beta with beta_nominal fallback.
double resolve_beta(const SoilProperties& soil, const CutGeometry& geom);

/// 2x5 Jacobian dF/dTheta_u in order (c, phi, c_a, delta, gamma), by central
/// finite differences with relative step 1e-6 (floor 1e-9). beta is held
/// fixed during differentiation.
Eigen::Matrix<double, 2, 5> fee_jacobian(const SoilProperties& soil,
                                         const CutGeometry& geom);

/// Sigma_F = J diag(exp(S_Theta)) J^T, returned as one 2x2 block per
/// timestep for a stacked 2k x 5 Jacobian.
std::vector<Eigen::Matrix2d> propagate_covariance(const Eigen::MatrixXd& jac,
                                                  const Vec5& s_theta);

/// Variance floor on the Jacobian nullspace: Sigma^n = (I - J+ J) Sigma^a
/// with the pseudo-inverse truncated at max(a_tol, r_tol * sigma_max);
/// returns elementwise max(sigma_theta, diag(Sigma^n)).
ParamCovariance nullspace_inflate(const Eigen::MatrixXd& jac,
                                  const ParamCovariance& sigma_theta,
                                  const ParamCovariance& sigma_ambiguity,
                                  double a_tol, double r_tol);

/// Mean over timesteps of the Gaussian negative log-likelihood
/// 0.5 [(F - F_hat) Sigma^-1 (F - F_hat)^T + ln det Sigma].
/// Throws SingularCovariance when any det falls below 1e-12.
double nll_loss(std::span<const ForceVec> f, std::span<const ForceVec> f_hat,
                std::span<const Eigen::Matrix2d> sigma_f);

/// Mean over timesteps of w_x |Fx - F^x| + w_z |Fz - F^z|.
double wmae_loss(std::span<const ForceVec> f, std::span<const ForceVec> f_hat,
                 const Eigen::Vector2d& w_xz);

/// False when eta, beta or rho fall outside the limits or d < 0.
bool fee_validity(const SoilProperties& soil, const CutGeometry& geom,
                  const AngleLimits& limits = {});

/// Reference geometry for the soil-strength index.
CutGeometry index_geometry();

/// Cutting force at the fixed index geometry (alpha = 0, rho = 80 deg,
/// w = 1.85 m, d = 0.2 m, Q = 0), beta from solve_beta with nominal fallback.
double fee_index(const SoilProperties& soil);

}  // namespace soilmap::fee
