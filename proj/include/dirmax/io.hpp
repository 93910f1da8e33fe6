#pragma once

// File formats.
//
// Grid binary, little-endian: "GRD2", u32 width, u32 height, u32 reserved
// (zero), f64 spacing, then width * height f64 values row by row (x1 fastest).
// The origin is not stored and reads back as (0, 0).
//
// Grid CSV: one row of comma-separated values per x2 row; the spacing comes
// from the caller.
//
// Decomposition JSON:
//   {"gap": g, "domain": [lo, hi], "chain": [[...], ...],
//    "groups": [{"step": k, "host": [lo, hi], "pole": p, "points": [...]}],
//    "rank_intervals": [{"lo": a, "hi": b, "rank": k, "pole": p | null}]}
// Reading rebuilds and revalidates from gap, domain, chain and group poles.
//
// Slope lists are JSON arrays, or objects with a "slopes" array.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dirmax/grid.hpp"
#include "dirmax/lacunary.hpp"

namespace dirmax {

/// Whole file as bytes; IoError when it cannot be read.
std::string read_file(const std::filesystem::path& path);

/// Writes to a temporary file beside `path` and renames it into place.
void write_atomic(const std::filesystem::path& path, std::string_view content);

std::string grid_to_binary(const Grid2D& g);
/// std::invalid_argument for malformed data.
Grid2D grid_from_binary(std::string_view bytes);

std::string grid_to_csv(const Grid2D& g);
Grid2D grid_from_csv(std::string_view text, double spacing);

/// By extension: .csv is text, anything else binary.
Grid2D read_grid(const std::filesystem::path& path, double csv_spacing = 1.0);
void write_grid(const std::filesystem::path& path, const Grid2D& g);

std::string decomposition_to_json(const LacunaryDecomposition& d);
LacunaryDecomposition decomposition_from_json(std::string_view text);

std::vector<double> slopes_from_json(std::string_view text);

}  // namespace dirmax
