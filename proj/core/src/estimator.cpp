#include "soilmap/estimator.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace soilmap {

namespace {

constexpr double kPenalty = 1e7;  // residual for invalid configurations, N

CutGeometry base_geometry(const MeasurementWindow& w) {
  CutGeometry g;
  g.alpha = w.alpha;
  g.rho = w.rho;
  g.w = w.w;
  return g;
}

/// Weighted residual vector (predicted minus measured), 2 rows per step.
Eigen::VectorXd residuals(const MeasurementWindow& win,
                          const SoilProperties& theta) {
  const auto n = static_cast<Eigen::Index>(win.steps());
  Eigen::VectorXd r(2 * n);
  CutGeometry geom = base_geometry(win);
  geom.beta = fee::resolve_beta(theta, geom);
  const double sx = std::sqrt(win.w_xz[0]);
  const double sz = std::sqrt(win.w_xz[1]);
  for (Eigen::Index t = 0; t < n; ++t) {
    geom.d = win.d[static_cast<size_t>(t)];
    geom.Q = win.q[static_cast<size_t>(t)];
    if (!fee::fee_validity(theta, geom)) {
      r[2 * t] = kPenalty;
      r[2 * t + 1] = kPenalty;
      continue;
    }
    try {
      const ForceVec f = fee::fee_force(theta, geom);
      r[2 * t] = sx * (f.fx - win.f[static_cast<size_t>(t)].fx);
      r[2 * t + 1] = sz * (f.fz - win.f[static_cast<size_t>(t)].fz);
    } catch (const DegenerateGeometry&) {
      r[2 * t] = kPenalty;
      r[2 * t + 1] = kPenalty;
    }
  }
  return r;
}

}  // namespace

EstimatorConfig EstimatorConfig::defaults() {
  EstimatorConfig cfg;
  const double deg = M_PI / 180.0;
  cfg.lower << 0.0, 0.0, 0.0, 0.0, 5e3;
  cfg.upper << 1e5, 50.0 * deg, 1e4, 40.0 * deg, 2.5e4;
  cfg.init << 5e3, 25.0 * deg, 1e3, 15.0 * deg, 1.5e4;
  cfg.sigma_ambiguity << 5e3 * 5e3, (10.0 * deg) * (10.0 * deg), 2e3 * 2e3,
      (8.0 * deg) * (8.0 * deg), 5e3 * 5e3;
  return cfg;
}

Eigen::MatrixXd window_jacobian(const MeasurementWindow& window,
                                const SoilProperties& theta) {
  const auto n = static_cast<Eigen::Index>(window.steps());
  Eigen::MatrixXd jac(2 * n, kNumSoilParams);
  CutGeometry geom = base_geometry(window);
  geom.beta = fee::resolve_beta(theta, geom);
  for (Eigen::Index t = 0; t < n; ++t) {
    geom.d = window.d[static_cast<size_t>(t)];
    geom.Q = window.q[static_cast<size_t>(t)];
    try {
      jac.block<2, 5>(2 * t, 0) = fee::fee_jacobian(theta, geom);
    } catch (const DegenerateGeometry&) {
      jac.block<2, 5>(2 * t, 0).setZero();
    }
  }
  return jac;
}

SoilEstimate fit_soil_properties(const MeasurementWindow& window,
                                 const EstimatorConfig& cfg) {
  SoilEstimate est;
  const auto n = static_cast<Eigen::Index>(window.steps());
  if (n == 0 || window.d.size() != window.steps() ||
      window.q.size() != window.steps()) {
    throw std::invalid_argument("fit_soil_properties: inconsistent window");
  }

  double d_max = 0.0, q_max = 0.0, d_mean = 0.0, d_var = 0.0;
  for (size_t t = 0; t < window.steps(); ++t) {
    d_max = std::max(d_max, window.d[t]);
    q_max = std::max(q_max, std::abs(window.q[t]));
    d_mean += window.d[t];
  }
  d_mean /= static_cast<double>(window.steps());
  for (size_t t = 0; t < window.steps(); ++t) {
    d_var += (window.d[t] - d_mean) * (window.d[t] - d_mean);
  }
  d_var /= static_cast<double>(window.steps());

  if (d_max < 1e-9 && q_max < 1e-9) {
    est.theta = SoilProperties::fromVec(cfg.init);
    est.var.diag = cfg.sigma_ambiguity;
    est.no_contact = true;
    return est;
  }
  // constant-depth, zero-surcharge windows cannot separate the parameters
  if (q_max < 1e-6 && d_mean > 0.0 &&
      std::sqrt(d_var) < 0.05 * d_mean) {
    est.rank_deficient = true;
  }

  const Vec5 span = cfg.upper - cfg.lower;
  auto to_theta = [&](const Vec5& u) {
    return SoilProperties::fromVec(cfg.lower + u.cwiseProduct(span));
  };
  auto clamp_u = [](Vec5 u) {
    return u.cwiseMax(0.0).cwiseMin(1.0).eval();
  };

  // equal bounds pin a parameter (span 0 -> u fixed at 0)
  Vec5 u0 = Vec5::Zero();
  for (int k = 0; k < kNumSoilParams; ++k) {
    if (span[k] > 0.0) u0[k] = (cfg.init[k] - cfg.lower[k]) / span[k];
  }
  u0 = clamp_u(u0);

  const double sx = std::sqrt(window.w_xz[0]);
  const double sz = std::sqrt(window.w_xz[1]);

  // Full-residual Jacobian in bound-normalized coordinates, with beta
  // re-resolved at every probe. The beta-fixed analytic Jacobian misses the
  // d(beta)/d(phi, delta) terms (beta is stationary only for N_gamma) and
  // stalls the search at false stationary points.
  auto search_jacobian = [&](const Vec5& uu) {
    Eigen::MatrixXd jac(2 * n, kNumSoilParams);
    const double h = 1e-6;
    for (int k = 0; k < kNumSoilParams; ++k) {
      if (span[k] <= 0.0) {
        jac.col(k).setZero();
        continue;
      }
      Vec5 up = uu, um = uu;
      up[k] = std::min(uu[k] + h, 1.0);
      um[k] = std::max(uu[k] - h, 0.0);
      const double spread = up[k] - um[k];
      jac.col(k) =
          (residuals(window, to_theta(up)) - residuals(window, to_theta(um))) /
          spread;
    }
    return jac;
  };

  auto descend = [&](Vec5 u, Eigen::VectorXd& r, double& cost) {
    r = residuals(window, to_theta(u));
    cost = 0.5 * r.squaredNorm();
    double lambda = 1e-3;
    int iters = 0;
    for (; iters < cfg.max_iterations; ++iters) {
      const Eigen::MatrixXd jac = search_jacobian(u);

      const Eigen::Matrix<double, 5, 5> jtj = jac.transpose() * jac;
      const Vec5 g = jac.transpose() * r;
      const Vec5 damp = jtj.diagonal().cwiseMax(1e-12);

      bool accepted = false;
      double step_norm = 0.0;
      for (int tries = 0; tries < 12; ++tries) {
        Eigen::Matrix<double, 5, 5> a = jtj;
        a.diagonal() += lambda * damp;
        const Vec5 delta = a.ldlt().solve(-g);
        const Vec5 u_new = clamp_u(u + delta);
        const Eigen::VectorXd r_new = residuals(window, to_theta(u_new));
        const double cost_new = 0.5 * r_new.squaredNorm();
        if (cost_new < cost) {
          step_norm = (u_new - u).norm();
          u = u_new;
          r = r_new;
          cost = cost_new;
          lambda = std::max(lambda / 3.0, 1e-12);
          accepted = true;
          break;
        }
        lambda *= 4.0;
      }
      if (!accepted || step_norm < cfg.step_tol) break;
    }
    return std::pair<Vec5, int>(u, iters);
  };

  // The cost landscape is multimodal in (phi, gamma); a fixed set of extra
  // starts keeps the solver deterministic while escaping local minima.
  std::vector<Vec5> starts{u0};
  for (double uphi : {0.15, 0.45, 0.75}) {
    for (double ugam : {0.25, 0.75}) {
      Vec5 s = u0;
      if (span[1] > 0.0) s[1] = uphi;
      if (span[3] > 0.0) s[3] = 0.5 * uphi;
      if (span[4] > 0.0) s[4] = ugam;
      starts.push_back(s);
    }
  }

  Vec5 u = u0;
  Eigen::VectorXd r;
  double cost = std::numeric_limits<double>::infinity();
  int total_iters = 0;
  for (const Vec5& s : starts) {
    Eigen::VectorXd r_s;
    double cost_s;
    const auto [u_s, it_s] = descend(s, r_s, cost_s);
    total_iters += it_s;
    if (cost_s < cost) {
      cost = cost_s;
      u = u_s;
      r = r_s;
    }
    if (cost < 1e-12) break;
  }

  est.theta = to_theta(u);
  est.iterations = total_iters;

  // Gauss-Newton covariance: s^2 (J^T W J)^+ on the physical-scale Jacobian.
  // Reuse the full-residual finite-difference Jacobian (beta re-resolved) so
  // the reported spread reflects the surface actually fitted; the u-space
  // columns rescale to physical units by 1/span. Pinned columns stay zero.
  const Eigen::MatrixXd ju = search_jacobian(u);
  Eigen::MatrixXd jw = ju;
  for (int k = 0; k < kNumSoilParams; ++k) {
    if (span[k] > 0.0) jw.col(k) /= span[k];
  }
  // unweighted copy for the observability test (column norms in newtons)
  Eigen::MatrixXd jac = jw;
  for (Eigen::Index t = 0; t < n; ++t) {
    jac.row(2 * t) /= sx;
    jac.row(2 * t + 1) /= sz;
  }
  const auto dof = std::max<Eigen::Index>(2 * n - kNumSoilParams, 1);
  const double s2 = r.squaredNorm() / static_cast<double>(dof);
  est.rms = std::sqrt(r.squaredNorm() / static_cast<double>(2 * n));

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jw.transpose() * jw,
                                        Eigen::ComputeFullU |
                                            Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > 1e-12 * sv[0]) inv[i] = 1.0 / sv[i];
  }
  const Eigen::Matrix<double, 5, 5> cov =
      svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose() * s2;

  ParamCovariance raw;
  raw.diag = cov.diagonal().cwiseMax(0.0);
  ParamCovariance ambiguity{cfg.sigma_ambiguity};
  est.var = fee::nullspace_inflate(jac, raw, ambiguity, cfg.a_tol, cfg.r_tol);
  // keep variances strictly positive for downstream Gaussian fusion
  est.var.diag = est.var.diag.cwiseMax(1e-12 * span.cwiseProduct(span));
  return est;
}

double nll_report(const MeasurementWindow& window, const SoilEstimate& est) {
  const Eigen::MatrixXd jac = window_jacobian(window, est.theta);
  const Vec5 s_theta = est.var.diag.array().max(1e-300).log();
  const std::vector<Eigen::Matrix2d> sigma_f =
      fee::propagate_covariance(jac, s_theta);

  CutGeometry geom = base_geometry(window);
  geom.beta = fee::resolve_beta(est.theta, geom);
  std::vector<ForceVec> f_hat(window.steps());
  for (size_t t = 0; t < window.steps(); ++t) {
    geom.d = window.d[t];
    geom.Q = window.q[t];
    f_hat[t] = fee::fee_force(est.theta, geom);
  }
  return fee::nll_loss(window.f, f_hat, sigma_f);
}

}  // namespace soilmap
