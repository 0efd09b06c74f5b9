#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "soilmap/gridmap_io.hpp"
#include "soilmap/sim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_layer_csv(const Eigen::ArrayXXd& layer, const fs::path& file) {
  std::ofstream f(file);
  if (!f) throw std::ios_base::failure("cannot open " + file.string());
  f.precision(17);
  for (Eigen::Index j = 0; j < layer.cols(); ++j) {
    for (Eigen::Index i = 0; i < layer.rows(); ++i) {
      if (i) f << ',';
      f << layer(i, j);
    }
    f << '\n';
  }
}

json report_json(const soilmap::RunReport& rep) {
  json j;
  j["sweeps_executed"] = rep.sweeps_executed;
  j["fits"] = rep.fits;
  j["cells_fused_total"] = rep.cells_fused_total;
  j["slips_total"] = rep.slips_total;
  j["initial_volume"] = rep.initial_volume;
  j["final_volume"] = rep.final_volume;
  j["disturbed_volume"] = rep.disturbed_volume;
  j["ledger_error"] = rep.ledger_error;
  j["total_millis"] = rep.total_millis;
  j["sweeps"] = json::array();
  for (const auto& s : rep.sweeps) {
    json r;
    r["push"] = s.push;
    r["step"] = s.step;
    r["updated"] = s.updated;
    r["extracted"] = s.extracted;
    if (s.extracted) {
      r["alpha"] = s.alpha;
      r["rho"] = s.rho;
      r["d"] = s.d;
      r["w"] = s.w;
      r["q"] = s.q;
      r["vq"] = s.vq;
      r["delta_vq"] = s.delta_vq;
      r["disturbed_volume"] = s.disturbed_volume;
      r["fit_residual"] = s.fit_residual;
      r["force"] = {s.force.fx, s.force.fz};
    }
    r["fitted"] = s.fitted;
    if (s.fitted) {
      const soilmap::Vec5 t = s.estimate.theta.asVec();
      r["theta"] = {t[0], t[1], t[2], t[3], t[4]};
      const soilmap::Vec5& v = s.estimate.var.diag;
      r["theta_var"] = {v[0], v[1], v[2], v[3], v[4]};
      r["rank_deficient"] = s.estimate.rank_deficient;
      r["no_contact"] = s.estimate.no_contact;
      r["iterations"] = s.estimate.iterations;
      r["rms"] = s.estimate.rms;
      if (std::isfinite(s.nll)) r["nll"] = s.nll;
      r["cells_fused"] = s.cells_fused;
    }
    r["slips"] = s.slips;
    r["millis"] = s.millis;
    j["sweeps"].push_back(std::move(r));
  }
  return j;
}

int cmd_run(const std::string& scenario_file, const std::string& out_dir,
            long long seed, const std::string& format) {
  if (!fs::exists(scenario_file)) {
    std::cerr << "scenario file not found: " << scenario_file << "\n";
    return 2;
  }
  soilmap::Scenario sc = soilmap::load_scenario(scenario_file);
  if (seed >= 0) sc.seed = static_cast<std::uint64_t>(seed);

  soilmap::RunResult res = soilmap::run_scenario(sc);
  const Eigen::ArrayXXd index = soilmap::fee_index_layer(res.map);

  fs::create_directories(out_dir);
  const fs::path out(out_dir);
  if (format == "csv") {
    soilmap::io::export_csv(res.map, out);
    write_layer_csv(index, out / "fee_index.csv");
  } else if (format == "bin") {
    soilmap::io::export_binary(res.map, out / "map.tmap");
    write_layer_csv(index, out / "fee_index.csv");
  } else if (format == "pgm") {
    for (const auto& name : soilmap::GridMap::layerNames()) {
      soilmap::io::export_pgm(res.map, name, out / (name + ".pgm"));
    }
    soilmap::io::export_pgm_layer(index, out / "fee_index.pgm");
  } else {
    std::cerr << "unknown export format: " << format << "\n";
    return 1;
  }

  std::ofstream rf(out / "report.json");
  if (!rf) {
    std::cerr << "cannot write report.json\n";
    return 2;
  }
  rf << report_json(res.report).dump(2) << '\n';

  std::cout << "sweeps: " << res.report.sweeps_executed
            << "  fits: " << res.report.fits
            << "  cells fused: " << res.report.cells_fused_total
            << "  ledger error: " << res.report.ledger_error << "\n";
  return 0;
}

int cmd_estimate(const std::string& window_file,
                 const std::string& config_file) {
  if (!fs::exists(window_file)) {
    std::cerr << "window file not found: " << window_file << "\n";
    return 2;
  }
  soilmap::EstimatorConfig cfg = soilmap::EstimatorConfig::defaults();
  if (!config_file.empty()) {
    if (!fs::exists(config_file)) {
      std::cerr << "config file not found: " << config_file << "\n";
      return 2;
    }
    cfg = soilmap::load_scenario(config_file).estimator;
  }
  const soilmap::MeasurementWindow window =
      soilmap::load_window_csv(window_file);
  const soilmap::SoilEstimate est = soilmap::fit_soil_properties(window, cfg);

  static const char* names[] = {"c", "phi", "c_a", "delta", "gamma"};
  const soilmap::Vec5 t = est.theta.asVec();
  std::cout.precision(10);
  for (int k = 0; k < soilmap::kNumSoilParams; ++k) {
    std::cout << names[k] << " = " << t[k]
              << "  (sigma = " << std::sqrt(est.var.diag[k]) << ")\n";
  }
  std::cout << "iterations = " << est.iterations << "  rms = " << est.rms
            << (est.rank_deficient ? "  [rank-deficient]" : "")
            << (est.no_contact ? "  [no-contact]" : "") << "\n";
  return 0;
}

int cmd_index(const std::string& map_file) {
  if (!fs::exists(map_file)) {
    std::cerr << "map file not found: " << map_file << "\n";
    return 2;
  }
  const soilmap::GridMap map = soilmap::io::import_binary(map_file);
  const Eigen::ArrayXXd index = soilmap::fee_index_layer(map);
  const fs::path out = fs::path(map_file).parent_path() / "fee_index.csv";
  write_layer_csv(index, out);
  std::cout << "fee index: min " << index.minCoeff() << "  max "
            << index.maxCoeff() << "  -> " << out.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"soil-property mapping from blade forces"};
  app.require_subcommand(1);

  std::string scenario_file, out_dir = "out", format = "csv";
  long long seed = -1;
  auto* run = app.add_subcommand("run", "run a scenario and export the map");
  run->add_option("scenario", scenario_file, "scenario JSON file")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--seed", seed, "override the scenario seed");
  run->add_option("--export", format, "export format: csv|bin|pgm");

  std::string window_file, config_file;
  auto* est = app.add_subcommand("estimate",
                                 "fit soil properties to a logged window");
  est->add_option("window", window_file, "window CSV file")->required();
  est->add_option("--config", config_file,
                  "scenario file supplying the estimator config");

  std::string map_file;
  auto* idx = app.add_subcommand("index",
                                 "recompute the strength-index layer");
  idx->add_option("map", map_file, "binary map file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(scenario_file, out_dir, seed, format);
    if (est->parsed()) return cmd_estimate(window_file, config_file);
    if (idx->parsed()) return cmd_index(map_file);
  } catch (const soilmap::ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return 1;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
