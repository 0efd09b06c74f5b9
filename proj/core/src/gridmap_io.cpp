#include "soilmap/gridmap_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace soilmap::io {

namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ofstream open_out(const std::filesystem::path& p, bool binary) {
  std::ofstream f(p, binary ? std::ios::binary : std::ios::out);
  if (!f) throw IoError("cannot open for writing: " + p.string());
  return f;
}

std::ifstream open_in(const std::filesystem::path& p, bool binary) {
  std::ifstream f(p, binary ? std::ios::binary : std::ios::in);
  if (!f) throw IoError("cannot open for reading: " + p.string());
  return f;
}

template <typename T>
void write_raw(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_raw(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace

void export_csv(const GridMap& map, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& name : GridMap::layerNames()) {
    const Eigen::ArrayXXd& layer = map.layer(name);
    std::ofstream f = open_out(dir / (name + ".csv"), false);
    f << std::setprecision(17);
    for (int j = 0; j < map.ny(); ++j) {
      for (int i = 0; i < map.nx(); ++i) {
        if (i) f << ',';
        f << layer(i, j);
      }
      f << '\n';
    }
  }
}

void import_csv_layer(GridMap& map, const std::string& layer_name,
                      const std::filesystem::path& file) {
  Eigen::ArrayXXd& layer = map.layer(layer_name);
  std::ifstream f = open_in(file, false);
  std::string line;
  for (int j = 0; j < map.ny(); ++j) {
    if (!std::getline(f, line)) throw IoError("csv: too few rows in " + file.string());
    std::stringstream ss(line);
    std::string tok;
    for (int i = 0; i < map.nx(); ++i) {
      if (!std::getline(ss, tok, ',')) throw IoError("csv: too few columns");
      layer(i, j) = std::stod(tok);
    }
  }
}

void export_binary(const GridMap& map, const std::filesystem::path& file) {
  std::ofstream f = open_out(file, true);
  f.write("TMAP", 4);
  write_raw<uint32_t>(f, static_cast<uint32_t>(map.nx()));
  write_raw<uint32_t>(f, static_cast<uint32_t>(map.ny()));
  const auto& names = GridMap::layerNames();
  write_raw<uint32_t>(f, static_cast<uint32_t>(names.size()));
  write_raw<float>(f, static_cast<float>(map.resolution()));
  write_raw<double>(f, map.origin().x());
  write_raw<double>(f, map.origin().y());
  for (const auto& name : names) {
    char buf[16] = {0};
    std::strncpy(buf, name.c_str(), 15);
    f.write(buf, 16);
    const Eigen::ArrayXXd& layer = map.layer(name);
    for (int j = 0; j < map.ny(); ++j) {
      for (int i = 0; i < map.nx(); ++i) {
        write_raw<float>(f, static_cast<float>(layer(i, j)));
      }
    }
  }
}

GridMap import_binary(const std::filesystem::path& file) {
  std::ifstream f = open_in(file, true);
  char magic[4];
  f.read(magic, 4);
  if (!f || std::memcmp(magic, "TMAP", 4) != 0) {
    throw IoError("not a TMAP file: " + file.string());
  }
  const auto nx = read_raw<uint32_t>(f);
  const auto ny = read_raw<uint32_t>(f);
  const auto n_layers = read_raw<uint32_t>(f);
  const auto g = read_raw<float>(f);
  const double ox = read_raw<double>(f);
  const double oy = read_raw<double>(f);

  ParamCovariance var0;
  var0.diag.setOnes();
  GridMap map(static_cast<int>(nx), static_cast<int>(ny), g, {ox, oy}, 0.0,
              0.0, SoilProperties{}, var0);
  for (uint32_t l = 0; l < n_layers; ++l) {
    char buf[17] = {0};
    f.read(buf, 16);
    const std::string name(buf);
    Eigen::ArrayXXd* layer = nullptr;
    try {
      layer = &map.layer(name);
    } catch (const std::out_of_range&) {
      // unknown layer: skip payload
    }
    for (uint32_t j = 0; j < ny; ++j) {
      for (uint32_t i = 0; i < nx; ++i) {
        const float v = read_raw<float>(f);
        if (layer) (*layer)(static_cast<int>(i), static_cast<int>(j)) = v;
      }
    }
  }
  if (!f) throw IoError("truncated TMAP file: " + file.string());
  return map;
}

void export_pgm_layer(const Eigen::ArrayXXd& layer,
                      const std::filesystem::path& file) {
  const double lo = layer.minCoeff();
  const double hi = layer.maxCoeff();
  const double span = hi - lo > 0.0 ? hi - lo : 1.0;
  std::ofstream f = open_out(file, true);
  f << "P5\n# min=" << std::setprecision(17) << lo << " max=" << hi << "\n"
    << layer.rows() << " " << layer.cols() << "\n255\n";
  for (int j = 0; j < layer.cols(); ++j) {
    for (int i = 0; i < layer.rows(); ++i) {
      const double s = (layer(i, j) - lo) / span;
      const auto b = static_cast<unsigned char>(
          std::clamp(static_cast<int>(std::lround(s * 255.0)), 0, 255));
      f.write(reinterpret_cast<const char*>(&b), 1);
    }
  }
}

void export_pgm(const GridMap& map, const std::string& layer_name,
                const std::filesystem::path& file) {
  export_pgm_layer(map.layer(layer_name), file);
}

}  // namespace soilmap::io
