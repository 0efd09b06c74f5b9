#include "soilmap/scenario.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace soilmap {

namespace {

using nlohmann::json;

double angle_field(const json& j, const std::string& key, double fallback) {
  if (j.contains(key)) return j.at(key).get<double>();
  if (j.contains(key + "_deg")) {
    return j.at(key + "_deg").get<double>() * M_PI / 180.0;
  }
  return fallback;
}

SoilProperties parse_soil(const json& j, const SoilProperties& base = {}) {
  SoilProperties s = base;
  s.c = j.value("c", s.c);
  s.phi = angle_field(j, "phi", s.phi);
  s.c_a = j.value("c_a", s.c_a);
  s.delta = angle_field(j, "delta", s.delta);
  s.gamma = j.value("gamma", s.gamma);
  return s;
}

}  // namespace

const SoilProperties& Scenario::soilAt(double x, double y) const {
  const SoilProperties* hit = &regions.front().soil;
  for (const auto& r : regions) {
    if (r.contains(x, y)) hit = &r.soil;
  }
  return *hit;
}

Scenario parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("scenario parse error: ") + e.what());
  }

  Scenario sc;
  sc.prior_theta = SoilProperties{5e3, 25.0 * M_PI / 180.0, 1e3,
                                  15.0 * M_PI / 180.0, 1.5e4};
  // the map prior is vaguer than a single-window ambiguity floor, otherwise
  // fusion can never pull a cell far from the prior mean
  sc.prior_var = 4.0 * sc.estimator.sigma_ambiguity;

  try {
    if (j.contains("map")) {
      const auto& m = j["map"];
      sc.nx = m.value("nx", sc.nx);
      sc.ny = m.value("ny", sc.ny);
      sc.resolution = m.value("resolution", sc.resolution);
      if (m.contains("origin")) {
        sc.origin = {m["origin"][0].get<double>(),
                     m["origin"][1].get<double>()};
      }
      sc.h0 = m.value("h0", sc.h0);
      sc.sigma0 = m.value("sigma0", sc.sigma0);
      if (m.contains("prior")) sc.prior_theta = parse_soil(m["prior"]);
      if (m.contains("prior_var")) {
        for (int k = 0; k < kNumSoilParams; ++k) {
          sc.prior_var[k] = m["prior_var"][k].get<double>();
        }
      }
    }
    if (j.contains("terrain")) {
      const auto& t = j["terrain"];
      sc.terrain.base = t.value("base", 0.0);
      for (const auto& b : t.value("bumps", json::array())) {
        sc.terrain.bumps.push_back({b.at("x").get<double>(),
                                    b.at("y").get<double>(),
                                    b.at("amplitude").get<double>(),
                                    b.at("std").get<double>()});
      }
      sc.terrain.random_bumps = t.value("random_bumps", 0);
      sc.terrain.random_amplitude = t.value("random_amplitude", 0.15);
      if (t.contains("random_std")) {
        sc.terrain.random_std_min = t["random_std"][0].get<double>();
        sc.terrain.random_std_max = t["random_std"][1].get<double>();
      }
    }
    for (const auto& r : j.value("regions", json::array())) {
      SoilRegion region;
      if (r.contains("rect")) {
        region.x0 = r["rect"][0].get<double>();
        region.y0 = r["rect"][1].get<double>();
        region.x1 = r["rect"][2].get<double>();
        region.y1 = r["rect"][3].get<double>();
      }
      region.soil = parse_soil(r.at("soil"));
      sc.regions.push_back(region);
    }
    for (const auto& p : j.value("pushes", json::array())) {
      PushSpec push;
      push.x = p.at("start")[0].get<double>();
      push.y = p.at("start")[1].get<double>();
      push.heading = angle_field(p, "heading", 0.0);
      push.length = p.value("length", 3.0);
      const double depth = p.value("depth", 0.1);
      push.depth_start = p.value("depth_start", depth);
      push.depth_end = p.value("depth_end", depth);
      push.steps = p.value("steps", 50);
      push.rake = angle_field(p, "rake", 80.0 * M_PI / 180.0);
      push.yaw = angle_field(p, "yaw", 0.0);
      if (push.steps < 2) throw ScenarioError("push needs at least 2 steps");
      sc.pushes.push_back(push);
    }
    sc.noise_std = j.value("noise_std", 0.0);
    if (j.contains("loose")) {
      const auto& l = j["loose"];
      sc.gamma_l = l.value("gamma_l", sc.gamma_l);
      sc.erosion.c_l = l.value("c_l", sc.erosion.c_l);
      sc.erosion.phi_l = l.value("phi_l", sc.erosion.phi_l);
      sc.swell = l.value("swell", sc.swell);
    }
    sc.erosion.gamma_l = sc.gamma_l;
    if (j.contains("erosion")) {
      const auto& e = j["erosion"];
      sc.erosion.dt = e.value("dt", sc.erosion.dt);
      sc.erosion.iterations = e.value("iterations", sc.erosion.iterations);
      sc.erosion.d_roi = e.value("d_roi", sc.erosion.d_roi);
    }
    if (j.contains("estimator")) {
      const auto& e = j["estimator"];
      sc.window_horizon = e.value("window_horizon", sc.window_horizon);
      sc.estimator.max_iterations =
          e.value("max_iterations", sc.estimator.max_iterations);
      auto vec5 = [&](const char* key, Vec5& out) {
        if (e.contains(key)) {
          for (int k = 0; k < kNumSoilParams; ++k) {
            out[k] = e[key][k].get<double>();
          }
        }
      };
      vec5("lower", sc.estimator.lower);
      vec5("upper", sc.estimator.upper);
      vec5("init", sc.estimator.init);
      vec5("sigma_ambiguity", sc.estimator.sigma_ambiguity);
    }
    if (j.contains("blade")) {
      sc.blade_width = j["blade"].value("width", sc.blade_width);
      sc.blade_height = j["blade"].value("height", sc.blade_height);
    }
    // estimates stuck at the ambiguity floor carry no information: keep them
    // out of the map update
    sc.fusion.var_skip = 0.99 * sc.estimator.sigma_ambiguity;
    sc.sigma_sv = j.value("sigma_sv", sc.sigma_sv);
    sc.lambda_n = j.value("lambda_n", sc.lambda_n);
    sc.seed = j.value("seed", static_cast<std::uint64_t>(0));
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("scenario field error: ") + e.what());
  }

  // a default region covering the raster is mandatory
  SoilRegion def;
  def.x0 = sc.origin.x() - sc.resolution;
  def.y0 = sc.origin.y() - sc.resolution;
  def.x1 = sc.origin.x() + sc.nx * sc.resolution;
  def.y1 = sc.origin.y() + sc.ny * sc.resolution;
  def.soil = sc.prior_theta;
  if (j.contains("default_soil")) def.soil = parse_soil(j["default_soil"]);
  sc.regions.insert(sc.regions.begin(), def);
  return sc;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream f(file);
  if (!f) throw std::ios_base::failure("cannot open " + file.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_scenario(ss.str());
}

MeasurementWindow load_window_csv(const std::filesystem::path& file) {
  std::ifstream f(file);
  if (!f) throw std::ios_base::failure("cannot open " + file.string());
  MeasurementWindow w;
  std::string line;
  bool first_row = true;
  bool header_seen = false;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    if (!header_seen && line.find("alpha") != std::string::npos) {
      header_seen = true;
      continue;
    }
    std::stringstream ss(line);
    std::string tok;
    std::vector<double> vals;
    while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
    if (vals.size() != 8) {
      throw std::ios_base::failure("window csv: expected 8 columns");
    }
    if (first_row) {
      w.alpha = vals[1];
      w.rho = vals[2];
      w.w = vals[3];
      first_row = false;
    }
    w.d.push_back(vals[4]);
    w.q.push_back(vals[5]);
    w.f.push_back(ForceVec{vals[6], vals[7]});
  }
  if (w.f.empty()) throw std::ios_base::failure("window csv: no data rows");
  return w;
}

void save_window_csv(const MeasurementWindow& window,
                     const std::filesystem::path& file) {
  std::ofstream f(file);
  if (!f) throw std::ios_base::failure("cannot open " + file.string());
  f << "t,alpha,rho,w,d,Q,Fx,Fz\n" << std::setprecision(17);
  for (size_t t = 0; t < window.steps(); ++t) {
    f << t << ',' << window.alpha << ',' << window.rho << ',' << window.w
      << ',' << window.d[t] << ',' << window.q[t] << ',' << window.f[t].fx
      << ',' << window.f[t].fz << '\n';
  }
}

}  // namespace soilmap
