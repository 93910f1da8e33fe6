#pragma once

// Discrete directional maximal operators on Grid2D.
//
// Averages along a direction are trapezoid sums over lattice nodes: for an
// x-major direction the nodes are (i + k, j + k beta) with linear
// interpolation between the two neighbouring rows (y-major directions are the
// transpose). A half-length delta snaps to D = max(1, round(delta / dt))
// steps of length dt = spacing * sqrt(1 + beta^2). Values outside the grid are
// zero and every average divides by the full 2D.
//
// Maximal operators take the sup over the configured radii together with the
// delta -> 0 limit |f(x)|, which makes the discrete chain
// M0 <= M1 <= M2 <= M1 M1perp hold exactly.

#include <span>
#include <utility>
#include <vector>

#include "dirmax/grid.hpp"
#include "dirmax/lacunary.hpp"

namespace dirmax {

struct OperatorConfig {
  std::vector<double> radii;  // strictly increasing, positive
  int aspect_levels = 2;      // rectangle lengths run over width * 2^a, a = 0..aspect_levels
  int threads = 1;

  void validate() const;
  /// Dyadic radii spacing * 2^k covering [spacing, reach].
  static OperatorConfig dyadic(double spacing, double reach, int aspect_levels = 2);
};

/// Lattice geometry of one direction.
struct LineStencil {
  bool x_major = true;
  double beta = 0.0;  // minor / major component, |beta| <= 1
  double step = 1.0;  // dt, physical length between nodes
  int steps_for(double delta) const;
};

LineStencil line_stencil(double s, double spacing);

/// Average of |f| along direction s with half-length delta about the point
/// x = (x1, x2), sampled by bilinear interpolation at the stencil nodes.
double directional_avg(const Grid2D& f, double s, double delta, std::pair<double, double> x);

/// Average fields of |g| for every half-length in `deltas` (same order).
std::vector<Grid2D> directional_avg_fields(const Grid2D& g, double s, std::span<const double> deltas,
                                           int threads = 1);

Grid2D m0(const Grid2D& f, const DirectionSet& omega, int threads = 1);
Grid2D m1(const Grid2D& f, const DirectionSet& omega, const OperatorConfig& cfg);
/// sup over centered rectangles: long side along s with half-length in the
/// radii, short side along s + 1/4 with half-width w in the radii or zero,
/// length / width between 1 and 2^aspect_levels.
Grid2D m2(const Grid2D& f, const DirectionSet& omega, const OperatorConfig& cfg);
/// Axis-parallel rectangles with both orientations: averages in x of
/// averages in x2, with side ratio up to 2^aspect_levels either way.
Grid2D strong_maximal(const Grid2D& f, const OperatorConfig& cfg);

/// Running maximum of m1 over a growing direction set: fold each new
/// direction into `acc` (which starts as |f|).
void m1_accumulate(Grid2D& acc, const Grid2D& f, double s, const OperatorConfig& cfg);
void m2_accumulate(Grid2D& acc, const Grid2D& f, double s, const OperatorConfig& cfg);

/// Linear convolution of signed f with V_r(x2 - alpha x1) phi_h(x1), the
/// kernel sampled on the lattice over the offsets the grid can reach.
/// Throws TruncationError when the sampled kernel misses more than
/// `max_lost` of its total integral.
Grid2D gamma_op(const Grid2D& f, double alpha, double r, double h, double max_lost = 1e-3);
/// Relative kernel mass missed by the sampled window for this grid.
double gamma_lost_fraction(const Grid2D& f, double alpha, double r, double h);

struct ChainReport {
  double m0_over_m1 = 0.0;  // max of m0 - m1
  double m1_over_m2 = 0.0;
  double m2_over_m1m1 = 0.0;
  double worst() const;
};

ChainReport chain_check(const Grid2D& f, const DirectionSet& omega, OperatorConfig cfg);

}  // namespace dirmax
