#pragma once

#include <filesystem>
#include <string>

#include "soilmap/gridmap.hpp"

namespace soilmap::io {

/// One CSV per layer (<name>.csv), row-major: ny rows of nx comma-separated
/// values, row j holds cells (0..nx-1, j).
void export_csv(const GridMap& map, const std::filesystem::path& dir);
void import_csv_layer(GridMap& map, const std::string& layer_name,
                      const std::filesystem::path& file);

/// Binary grid: magic "TMAP", little-endian u32 nx, ny, u32 layer count,
/// f32 resolution, f64 origin x/y, then per layer a 16-byte null-padded
/// name and nx*ny f32 row-major values.
void export_binary(const GridMap& map, const std::filesystem::path& file);
GridMap import_binary(const std::filesystem::path& file);

/// PGM P5 8-bit export; min/max scaling recorded in the header comment.
void export_pgm(const GridMap& map, const std::string& layer_name,
                const std::filesystem::path& file);
void export_pgm_layer(const Eigen::ArrayXXd& layer,
                      const std::filesystem::path& file);

}  // namespace soilmap::io
