#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace dirmax {

/// Samples of a planar function on a square lattice. Pixel (i, j) sits at
/// origin + spacing * (i, j); i runs along x1 (columns), j along x2 (rows).
struct Grid2D {
  int width = 0;
  int height = 0;
  double spacing = 1.0;
  std::pair<double, double> origin{0.0, 0.0};
  std::vector<double> values;  // row-major: values[j * width + i]

  Grid2D() = default;
  Grid2D(int w, int h, double s, std::pair<double, double> o = {0.0, 0.0});

  std::size_t size() const { return values.size(); }
  double& at(int i, int j) { return values[static_cast<std::size_t>(j) * width + i]; }
  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * width + i]; }
  double x1(int i) const { return origin.first + spacing * i; }
  double x2(int j) const { return origin.second + spacing * j; }

  /// Same geometry, values zeroed.
  Grid2D like() const;
  /// Throws std::invalid_argument on non-positive sizes or spacing,
  /// mismatched value count or non-finite entries.
  void validate() const;

  /// Bilinear interpolation at a point in lattice units; zero outside.
  double sample(double u, double v) const;

  /// Discrete L2 norm including the cell area.
  double l2_norm() const;
  double max_abs() const;
};

Grid2D abs(const Grid2D& g);
Grid2D pointwise_max(const Grid2D& a, const Grid2D& b);

/// Same width, height and spacing.
bool same_shape(const Grid2D& a, const Grid2D& b);

}  // namespace dirmax
