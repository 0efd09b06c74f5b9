#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <stdexcept>

namespace soilmap {

// Parameter order used everywhere (covariances, Jacobian columns, map layers):
// (c, phi, c_a, delta, gamma)
inline constexpr int kNumSoilParams = 5;
using Vec5 = Eigen::Matrix<double, 5, 1>;

/// Unknown soil parameter vector. Units: c, c_a in Pa; phi, delta in rad;
/// gamma is moist unit weight in N/m^3.
struct SoilProperties {
  double c = 0.0;
  double phi = 0.0;
  double c_a = 0.0;
  double delta = 0.0;
  double gamma = 15000.0;

  Vec5 asVec() const {
    Vec5 v;
    v << c, phi, c_a, delta, gamma;
    return v;
  }
  static SoilProperties fromVec(const Vec5& v) {
    return SoilProperties{v[0], v[1], v[2], v[3], v[4]};
  }
};

/// Known/extracted cut geometry. Angles in rad, lengths in m, Q in N.
struct CutGeometry {
  double alpha = 0.0;  // surface inclination
  double rho = M_PI_2; // blade rake angle
  double d = 0.0;      // depth of cut
  double w = 1.0;      // effective blade width
  double Q = 0.0;      // surcharge force
  double beta = M_PI_4; // soil failure angle
};

/// Blade force in the vertical plane of travel: fx along translation, fz up.
struct ForceVec {
  double fx = 0.0;
  double fz = 0.0;

  double magnitude() const { return std::hypot(fx, fz); }
};

/// Diagonal 5x5 covariance over (c, phi, c_a, delta, gamma), stored as
/// variances in squared parameter units.
struct ParamCovariance {
  Vec5 diag = Vec5::Zero();
};

struct DegenerateGeometry : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularCovariance : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidDimensions : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DegenerateSweep : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateDirection : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace soilmap
