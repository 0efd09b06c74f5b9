#include "soilmap/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace soilmap {

namespace {

Eigen::Vector2d horizontal_unit(const Eigen::Vector3d& v) {
  Eigen::Vector2d h(v.x(), v.y());
  const double n = h.norm();
  if (n < 1e-12) return Eigen::Vector2d::UnitX();
  return h / n;
}

}  // namespace

std::array<Eigen::Vector3d, 4> BladePose::corners() const {
  const Eigen::Vector3d half_w = 0.5 * width * lateral();
  const Eigen::Vector3d half_h = 0.5 * height * faceUp();
  return {p - half_w - half_h, p + half_w - half_h, p + half_w + half_h,
          p - half_w + half_h};
}

std::pair<Eigen::Vector3d, Eigen::Vector3d> BladePose::cuttingEdge() const {
  const auto c = corners();
  return {c[0], c[1]};
}

BladePose make_blade_pose(const Eigen::Vector3d& edge_mid, double heading,
                          double rake, double width, double height,
                          double yaw) {
  const double face_heading = heading + yaw;
  const Eigen::Vector3d fwd(std::cos(face_heading), std::sin(face_heading),
                            0.0);
  const Eigen::Vector3d up =
      std::cos(rake) * fwd + std::sin(rake) * Eigen::Vector3d::UnitZ();
  const Eigen::Vector3d normal =
      std::sin(rake) * fwd - std::cos(rake) * Eigen::Vector3d::UnitZ();
  BladePose pose;
  pose.width = width;
  pose.height = height;
  pose.R.col(0) = normal;
  pose.R.col(2) = up;
  pose.R.col(1) = up.cross(normal);
  pose.p = edge_mid + 0.5 * height * up;
  return pose;
}

MovementCheck check_movement(const BladePose& t0, const BladePose& t1,
                             double trans_min, double rot_min) {
  MovementCheck mc;
  mc.n_hat = t0.faceNormal();
  const Eigen::Vector3d dp = t1.p - t0.p;
  const double trans = dp.norm();
  const double ctheta =
      std::clamp(((t0.R.transpose() * t1.R).trace() - 1.0) * 0.5, -1.0, 1.0);
  const double rot = std::acos(ctheta);
  mc.update = trans >= trans_min || rot >= rot_min;
  if (trans > 1e-12) {
    mc.t_hat = dp / trans;
  } else {
    // pure rotation: fall back to the horizontal projection of the normal
    const Eigen::Vector2d h = horizontal_unit(mc.n_hat);
    mc.t_hat = Eigen::Vector3d(h.x(), h.y(), 0.0);
  }
  return mc;
}

SweptVolume generate_swept_volume(const BladePose& t0, const BladePose& t1) {
  SweptVolume sv;
  const auto c0 = t0.corners();
  const auto c1 = t1.corners();
  double max_disp = 0.0;
  for (int i = 0; i < 4; ++i) {
    sv.vertices[i] = c0[i];
    sv.vertices[i + 4] = c1[i];
    max_disp = std::max(max_disp, (c1[i] - c0[i]).norm());
  }
  if (max_disp < 1e-9) {
    throw DegenerateSweep("generate_swept_volume: coincident blade quads");
  }

  int t = 0;
  auto tri = [&](int a, int b, int c) { sv.triangles[t++] = {a, b, c}; };
  tri(0, 3, 2);
  tri(0, 2, 1);
  tri(4, 5, 6);
  tri(4, 6, 7);
  for (int i = 0; i < 4; ++i) {
    const int j = (i + 1) % 4;
    tri(i, j, j + 4);
    tri(i, j + 4, i + 4);
  }

  // make winding outward-consistent
  double vol6 = 0.0;
  for (const auto& tr : sv.triangles) {
    vol6 += sv.vertices[tr[0]].dot(
        sv.vertices[tr[1]].cross(sv.vertices[tr[2]]));
  }
  if (vol6 < 0.0) {
    for (auto& tr : sv.triangles) std::swap(tr[1], tr[2]);
  }
  return sv;
}

SweepIntersection intersect_heightmap(const SweptVolume& sv,
                                      const GridMap& map) {
  SweepIntersection out;

  Eigen::Vector2d lo(std::numeric_limits<double>::max(),
                     std::numeric_limits<double>::max());
  Eigen::Vector2d hi = -lo;
  for (const auto& v : sv.vertices) {
    lo = lo.cwiseMin(v.head<2>());
    hi = hi.cwiseMax(v.head<2>());
  }
  const double g = map.resolution();
  const auto& org = map.origin();
  const int i0 = std::max(0, static_cast<int>(std::floor((lo.x() - org.x()) / g)));
  const int i1 = std::min(map.nx() - 1,
                          static_cast<int>(std::ceil((hi.x() - org.x()) / g)));
  const int j0 = std::max(0, static_cast<int>(std::floor((lo.y() - org.y()) / g)));
  const int j1 = std::min(map.ny() - 1,
                          static_cast<int>(std::ceil((hi.y() - org.y()) / g)));

  for (int j = j0; j <= j1; ++j) {
    for (int i = i0; i <= i1; ++i) {
      const CellIndex cell{i, j};
      const Eigen::Vector2d c = map.cellCenter(cell);
      double bottom = std::numeric_limits<double>::max();
      double top = std::numeric_limits<double>::lowest();
      bool hit = false;
      for (const auto& tr : sv.triangles) {
        const Eigen::Vector2d a = sv.vertices[tr[0]].head<2>();
        const Eigen::Vector2d b = sv.vertices[tr[1]].head<2>();
        const Eigen::Vector2d d = sv.vertices[tr[2]].head<2>();
        const Eigen::Vector2d e0 = b - a, e1 = d - a, ep = c - a;
        const double det = e0.x() * e1.y() - e0.y() * e1.x();
        if (std::abs(det) < 1e-14) continue;  // vertical triangle
        const double u = (ep.x() * e1.y() - ep.y() * e1.x()) / det;
        const double v = (e0.x() * ep.y() - e0.y() * ep.x()) / det;
        if (u < -1e-9 || v < -1e-9 || u + v > 1.0 + 1e-9) continue;
        const double z = sv.vertices[tr[0]].z() +
                         u * (sv.vertices[tr[1]].z() - sv.vertices[tr[0]].z()) +
                         v * (sv.vertices[tr[2]].z() - sv.vertices[tr[0]].z());
        bottom = std::min(bottom, z);
        top = std::max(top, z);
        hit = true;
      }
      if (!hit) continue;
      out.shadow.push_back(cell);
      out.shadow_bottom.push_back(bottom);
      const double h = map.at(map.elevation(), cell);
      if (h > bottom + 1e-9 && top > bottom + 1e-12) {
        out.cells.push_back(cell);
        out.dh.push_back(h - bottom);
      }
    }
  }
  return out;
}

SurfacePoints get_surface_points(const std::vector<CellIndex>& cells,
                                 const GridMap& map,
                                 const Eigen::Vector3d& t_hat,
                                 const Eigen::Vector3d& n_hat,
                                 const BladePose& t0, int horizon_cells) {
  (void)n_hat;
  SurfacePoints out;
  if (cells.empty()) return out;

  const double g = map.resolution();
  const Eigen::Vector2d t2 = horizontal_unit(t_hat);
  const Eigen::Vector2d l2(-t2.y(), t2.x());
  const auto [e0, e1] = t0.cuttingEdge();
  const Eigen::Vector3d edge_mid = 0.5 * (e0 + e1);
  const Eigen::Vector3d edge_dir = e1 - e0;
  const double edge_lat_span =
      Eigen::Vector2d(edge_dir.x(), edge_dir.y()).dot(l2);

  // bucket intersected cells by lateral offset
  std::map<int, std::vector<CellIndex>> buckets;
  for (const auto& a : cells) {
    const Eigen::Vector2d rel = map.cellCenter(a) - edge_mid.head<2>();
    buckets[static_cast<int>(std::lround(rel.dot(l2) / g))].push_back(a);
  }

  std::unordered_map<CellIndex, double, CellIndexHash> sampled;
  std::unordered_set<CellIndex, CellIndexHash> vq_cells;

  for (const auto& [bucket, members] : buckets) {
    (void)members;
    const double lat = bucket * g;
    double s = 0.0;
    if (std::abs(edge_lat_span) > 1e-9) {
      s = std::clamp(lat / edge_lat_span, -0.5, 0.5);
    }
    const Eigen::Vector3d edge_pt = edge_mid + s * edge_dir;

    const auto start = map.worldToCell(edge_pt.x(), edge_pt.y());
    if (!start) {
      ++out.empty_slices;
      continue;
    }

    SurfaceSlice slice;
    slice.lateral = lat;
    slice.edge_z = edge_pt.z();

    std::vector<CellIndex> path{*start};
    auto rest = dda_trace(map, *start, t2, horizon_cells);
    path.insert(path.end(), rest.begin(), rest.end());
    if (static_cast<int>(path.size()) > horizon_cells) {
      path.resize(horizon_cells);
    }

    for (const auto& cell : path) {
      const double x =
          (map.cellCenter(cell) - edge_pt.head<2>()).dot(t2);
      if (x < -g) continue;
      slice.x.push_back(x);
      // bank surface: loose material ahead is surcharge, not cut depth
      slice.z.push_back(map.at(map.elevation(), cell) -
                        std::max(0.0, map.at(map.loose(), cell)));
      if (x >= 0.0) {
        if (vq_cells.insert(cell).second) {
          out.vq += g * g * std::max(0.0, map.at(map.loose(), cell));
        }
        auto it = sampled.find(cell);
        if (it == sampled.end() || x < it->second) sampled[cell] = x;
      }
    }
    if (slice.x.empty()) {
      ++out.empty_slices;
      continue;
    }
    out.slices.push_back(std::move(slice));
  }

  out.sampled.assign(sampled.begin(), sampled.end());
  std::sort(out.sampled.begin(), out.sampled.end(),
            [](const auto& a, const auto& b) {
              return std::tie(a.first.i, a.first.j) <
                     std::tie(b.first.i, b.first.j);
            });
  return out;
}

std::optional<SliceFit> wls_line_fit_intersect(const std::vector<double>& x,
                                               const std::vector<double>& z,
                                               double c_x, double edge_z,
                                               const Eigen::Vector3d& face_up,
                                               const Eigen::Vector3d& t_hat) {
  const size_t n = x.size();
  if (n < 2) return std::nullopt;

  double sw = 0, swx = 0, swz = 0, swxx = 0, swxz = 0;
  for (size_t k = 0; k < n; ++k) {
    const double wk = std::exp(-c_x * std::max(x[k], 0.0));
    sw += wk;
    swx += wk * x[k];
    swz += wk * z[k];
    swxx += wk * x[k] * x[k];
    swxz += wk * x[k] * z[k];
  }
  const double denom = sw * swxx - swx * swx;
  if (denom < 1e-12 * std::max(1.0, swxx)) return std::nullopt;

  const double a = (sw * swxz - swx * swz) / denom;
  const double b = (swxx * swz - swx * swxz) / denom;

  SliceFit fit;
  fit.alpha = std::atan(a);

  const Eigen::Vector2d t2 = horizontal_unit(t_hat);
  Eigen::Vector2d uf(face_up.x() * t2.x() + face_up.y() * t2.y(), face_up.z());
  const double ufn = uf.norm();
  if (ufn < 1e-12) return std::nullopt;
  uf /= ufn;
  const Eigen::Vector2d us(std::cos(fit.alpha), std::sin(fit.alpha));
  fit.rho = std::atan2(us.x() * uf.y() - us.y() * uf.x(), us.dot(uf));

  // perpendicular distance from the cutting edge (x = 0) to the fitted line
  fit.d = std::max(0.0, (b - edge_z) / std::sqrt(1.0 + a * a));

  double ssr = 0.0;
  for (size_t k = 0; k < n; ++k) {
    const double wk = std::exp(-c_x * std::max(x[k], 0.0));
    const double r = z[k] - (a * x[k] + b);
    ssr += wk * r * r;
  }
  fit.residual = std::sqrt(ssr / sw);
  return fit;
}

std::optional<ExtractedFee> extract_fee_params(
    const GridMap& map, const BladePose& t0,
    const std::vector<CellIndex>& cells, const std::vector<double>& dh,
    const Eigen::Vector3d& t_hat, const Eigen::Vector3d& n_hat,
    const ExtractParams& params) {
  (void)dh;
  if (cells.empty()) return std::nullopt;

  SurfacePoints pts = get_surface_points(cells, map, t_hat, n_hat, t0,
                                         params.horizon_cells);

  ExtractedFee out;
  out.vq0 = pts.vq;
  out.sampled = pts.sampled;
  out.dropped_slices = pts.empty_slices;

  for (const auto& slice : pts.slices) {
    auto fit = wls_line_fit_intersect(slice.x, slice.z, params.c_x,
                                      slice.edge_z, t0.faceUp(), t_hat);
    if (!fit) {
      ++out.dropped_slices;
      continue;
    }
    out.slice_fits.push_back(*fit);
  }
  if (out.slice_fits.empty()) return std::nullopt;

  double wsum = 0, alpha = 0, rho = 0, d = 0, res = 0;
  for (const auto& f : out.slice_fits) {
    const double wk = std::exp(params.c_d * f.d);
    wsum += wk;
    alpha += wk * f.alpha;
    rho += wk * f.rho;
    d += wk * f.d;
    res += f.residual;
  }
  out.alpha = alpha / wsum;
  out.rho = rho / wsum;
  out.d = d / wsum;
  out.mean_fit_residual = res / static_cast<double>(out.slice_fits.size());

  // slice-parameter variances as fit-quality metrics
  double va = 0, vr = 0, vd = 0;
  for (const auto& f : out.slice_fits) {
    va += (f.alpha - out.alpha) * (f.alpha - out.alpha);
    vr += (f.rho - out.rho) * (f.rho - out.rho);
    vd += (f.d - out.d) * (f.d - out.d);
  }
  const auto ns = static_cast<double>(out.slice_fits.size());
  out.var_alpha = va / ns;
  out.var_rho = vr / ns;
  out.var_d = vd / ns;

  // effective width from the lateral span of intersected cells
  const Eigen::Vector2d t2 = horizontal_unit(t_hat);
  const Eigen::Vector2d l2(-t2.y(), t2.x());
  double lat_min = std::numeric_limits<double>::max();
  double lat_max = std::numeric_limits<double>::lowest();
  for (const auto& a : cells) {
    const double lat = map.cellCenter(a).dot(l2);
    lat_min = std::min(lat_min, lat);
    lat_max = std::max(lat_max, lat);
  }
  const double g = map.resolution();
  out.w = std::clamp(lat_max - lat_min + g, g, t0.width);
  return out;
}

SweepSeries interpolate_fee_params(double d_start, double d_end, int n_steps,
                                   double vq_start, double delta_vq,
                                   double gamma_l) {
  SweepSeries s;
  if (n_steps <= 0) return s;
  s.d.resize(n_steps);
  s.vq.resize(n_steps);
  s.q.resize(n_steps);
  for (int t = 0; t < n_steps; ++t) {
    const double u =
        n_steps > 1 ? static_cast<double>(t) / (n_steps - 1) : 1.0;
    s.d[t] = d_start + u * (d_end - d_start);
    s.vq[t] = vq_start + u * delta_vq;
    s.q[t] = gamma_l * s.vq[t];
  }
  return s;
}

}  // namespace soilmap
