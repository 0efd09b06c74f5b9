#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "soilmap/gridmap.hpp"
#include "soilmap/types.hpp"

namespace soilmap {

/// Blade face pose. Frame: x is the face normal pointing into travel,
/// z points up the face, y spans the face width. p is the face center.
struct BladePose {
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
  double width = 1.85;
  double height = 0.6;

  Eigen::Vector3d faceNormal() const { return R.col(0); }
  Eigen::Vector3d lateral() const { return R.col(1); }
  Eigen::Vector3d faceUp() const { return R.col(2); }

  /// Corners in order: bottom-left, bottom-right, top-right, top-left.
  std::array<Eigen::Vector3d, 4> corners() const;
  /// Bottom edge endpoints (left, right).
  std::pair<Eigen::Vector3d, Eigen::Vector3d> cuttingEdge() const;
  Eigen::Vector3d edgeMid() const {
    return p - 0.5 * height * faceUp();
  }
};

/// Blade pose from push-frame quantities: cutting-edge midpoint position,
/// horizontal heading, and rake angle measured from the forward horizontal
/// to the face-up direction (pi/2 = vertical blade).
BladePose make_blade_pose(const Eigen::Vector3d& edge_mid, double heading,
                          double rake, double width, double height,
                          double yaw = 0.0);

struct MovementCheck {
  bool update = false;
  Eigen::Vector3d t_hat = Eigen::Vector3d::UnitX();  // translation direction
  Eigen::Vector3d n_hat = Eigen::Vector3d::UnitX();  // face normal at T0
};

/// Gate: update iff translation >= trans_min or geodesic rotation >= rot_min.
/// For a pure rotation t_hat falls back to the horizontal projection of n_hat.
MovementCheck check_movement(const BladePose& t0, const BladePose& t1,
                             double trans_min, double rot_min);

/// Closed 12-triangle hexahedral hull spanning the blade quad at both poses.
struct SweptVolume {
  std::array<Eigen::Vector3d, 8> vertices;  // quad at T0 then quad at T1
  std::array<std::array<int, 3>, 12> triangles;
};

SweptVolume generate_swept_volume(const BladePose& t0, const BladePose& t1);

struct SweepIntersection {
  std::vector<CellIndex> cells;   // A: cells with displaced material
  std::vector<double> dh;         // per-cell displaced height, > 0
  std::vector<CellIndex> shadow;  // G: cells under the volume footprint
  std::vector<double> shadow_bottom;  // h^G: volume bottom height per cell
};

/// Vertical ray cast from each footprint-cell center; a cell joins A when its
/// surface lies above the volume bottom at that column.
SweepIntersection intersect_heightmap(const SweptVolume& sv, const GridMap& map);

struct SurfaceSlice {
  double lateral = 0.0;           // slice center offset along the blade
  std::vector<double> x;          // along-track distances from the blade edge
  std::vector<double> z;          // surface heights
  double edge_z = 0.0;            // cutting-edge height at this slice
};

struct SurfacePoints {
  std::vector<SurfaceSlice> slices;
  double vq = 0.0;  // loose-soil surcharge volume ahead of the blade, m^3
  /// Sampled cells with along-track distance, deduplicated (min distance).
  std::vector<std::pair<CellIndex, double>> sampled;
  int empty_slices = 0;
};

SurfacePoints get_surface_points(const std::vector<CellIndex>& cells,
                                 const GridMap& map,
                                 const Eigen::Vector3d& t_hat,
                                 const Eigen::Vector3d& n_hat,
                                 const BladePose& t0, int horizon_cells = 20);

struct SliceFit {
  double alpha = 0.0;
  double rho = 0.0;
  double d = 0.0;
  double residual = 0.0;  // weighted RMS fit residual
};

/// Weighted least-squares line fit z = a x + b with weights exp(-C_x x);
/// alpha from the slope, rho between the blade face and the fitted line in
/// the vertical travel plane, d as perpendicular edge-to-line distance
/// (zero when the edge sits above the line). nullopt on rank deficiency.
std::optional<SliceFit> wls_line_fit_intersect(
    const std::vector<double>& x, const std::vector<double>& z, double c_x,
    double edge_z, const Eigen::Vector3d& face_up,
    const Eigen::Vector3d& t_hat);

struct ExtractParams {
  double c_x = 2.0;        // line-fit distance weight rate, 1/m
  double c_d = 5.0;        // depth-weighted averaging rate, 1/m
  int horizon_cells = 20;  // per-slice sampling horizon
};

struct ExtractedFee {
  double alpha = 0.0;
  double rho = M_PI_2;
  double d = 0.0;
  double w = 0.0;
  double vq0 = 0.0;
  std::vector<SliceFit> slice_fits;
  double mean_fit_residual = 0.0;
  double var_alpha = 0.0;
  double var_rho = 0.0;
  double var_d = 0.0;
  int dropped_slices = 0;
  std::vector<std::pair<CellIndex, double>> sampled;  // cells + x distances
};

/// Per-slice fits aggregated with weights exp(C_d d); w from the lateral
/// span of intersected cells, floored at one cell and capped at the blade
/// width. Returns nullopt when every slice fit failed.
std::optional<ExtractedFee> extract_fee_params(
    const GridMap& map, const BladePose& t0,
    const std::vector<CellIndex>& cells, const std::vector<double>& dh,
    const Eigen::Vector3d& t_hat, const Eigen::Vector3d& n_hat,
    const ExtractParams& params = {});

struct SweepSeries {
  std::vector<double> d;   // m
  std::vector<double> vq;  // m^3
  std::vector<double> q;   // N
};

/// Linear interpolation of depth and surcharge over the sweep's pose
/// history; Q = gamma_l * V^Q.
SweepSeries interpolate_fee_params(double d_start, double d_end, int n_steps,
                                   double vq_start, double delta_vq,
                                   double gamma_l);

}  // namespace soilmap
