#include "dirmax/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dirmax {

Grid2D::Grid2D(int w, int h, double s, std::pair<double, double> o)
    : width(w), height(h), spacing(s), origin(o) {
  if (w <= 0 || h <= 0) throw std::invalid_argument("grid dimensions must be positive");
  if (!(s > 0) || !std::isfinite(s)) throw std::invalid_argument("grid spacing must be positive");
  values.assign(static_cast<std::size_t>(w) * h, 0.0);
}

Grid2D Grid2D::like() const { return Grid2D(width, height, spacing, origin); }

void Grid2D::validate() const {
  if (width <= 0 || height <= 0) throw std::invalid_argument("grid dimensions must be positive");
  if (!(spacing > 0) || !std::isfinite(spacing))
    throw std::invalid_argument("grid spacing must be positive");
  if (values.size() != static_cast<std::size_t>(width) * height)
    throw std::invalid_argument("grid value count does not match width * height");
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("grid contains a non-finite value");
}

double Grid2D::sample(double u, double v) const {
  const double fu = std::floor(u), fv = std::floor(v);
  const int i = static_cast<int>(fu), j = static_cast<int>(fv);
  const double a = u - fu, b = v - fv;
  auto get = [&](int ii, int jj) {
    if (ii < 0 || jj < 0 || ii >= width || jj >= height) return 0.0;
    return at(ii, jj);
  };
  return (1 - b) * ((1 - a) * get(i, j) + a * get(i + 1, j)) +
         b * ((1 - a) * get(i, j + 1) + a * get(i + 1, j + 1));
}

double Grid2D::l2_norm() const {
  double s = 0;
  for (double v : values) s += v * v;
  return std::sqrt(s) * spacing;
}

double Grid2D::max_abs() const {
  double m = 0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

Grid2D abs(const Grid2D& g) {
  Grid2D out = g;
  for (double& v : out.values) v = std::abs(v);
  return out;
}

Grid2D pointwise_max(const Grid2D& a, const Grid2D& b) {
  if (!same_shape(a, b)) throw std::invalid_argument("pointwise_max: shape mismatch");
  Grid2D out = a;
  for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] = std::max(a.values[k], b.values[k]);
  return out;
}

bool same_shape(const Grid2D& a, const Grid2D& b) {
  return a.width == b.width && a.height == b.height && a.spacing == b.spacing;
}

}  // namespace dirmax
