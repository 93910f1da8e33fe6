#pragma once

// Frequency-plane regions and the overlap and support checks built on them.
//
// Regions are described in the frame (eta1, eta2) where strips read
// {eta1 > 1/|J|, |eta2 - c eta1| <= 5}. A lattice angular frequency
// (xi1, xi2), xi1 paired with x1, sits at (eta1, eta2) = (xi2, -xi1). In this
// frame the transform of gamma_op(., alpha, r, h) is supported in
// {|eta1| <= 2r, |eta2 - alpha eta1| <= 1/h}.

#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "dirmax/grid.hpp"
#include "dirmax/grid_ops.hpp"
#include "dirmax/lacunary.hpp"

namespace dirmax {

using FreqPoint = std::pair<double, double>;  // (eta1, eta2)

FreqPoint lattice_to_frame(double xi1, double xi2);

struct Strip {
  double slope_lo = 0.0;
  double slope_hi = 1.0;
  double center = 0.5;
  double min_x1 = 1.0;
  double half_width = 5.0;
};

/// Strip attached to J = (lo, hi) with the given center, lo <= center <= hi.
Strip make_strip(double lo, double hi, double center);
bool strip_contains(const Strip& strip, FreqPoint p);

struct Sector {
  double slope_lo = 0.0;
  double slope_hi = 1.0;
};

bool sector_contains(const Sector& sector, FreqPoint p);

struct FrequencyBand {
  double xi1_lo = 0.0;
  double xi1_hi = 1.0;
  double theta = 0.0;
  double bump_halfwidth = 1.0;
};

/// (n_low, n_top): strips of rank < order intervals centered at their poles,
/// and strips of top-rank intervals centered at both endpoints.
std::pair<int, int> overlap_count(const LacunaryDecomposition& decomp, FreqPoint p);

struct OverlapReport {
  int n_low = 0;
  int n_top = 0;
  FreqPoint argmax_low{0.0, 0.0};
  FreqPoint argmax_top{0.0, 0.0};
};

/// Exact maxima of overlap_count over the half-plane eta1 > 0.
OverlapReport max_overlap(const LacunaryDecomposition& decomp);

/// Complex samples on the same lattice as a Grid2D.
struct ComplexField {
  int width = 0;
  int height = 0;
  double spacing = 1.0;
  std::vector<std::complex<double>> values;

  double l2_norm() const;
};

ComplexField to_complex(const Grid2D& g);
Grid2D modulus(const ComplexField& c);
/// Copy of g in the lower-left corner of a grid `factor` times larger.
Grid2D zero_pad(const Grid2D& g, int factor = 2);

using FrequencyRegion = std::function<bool(FreqPoint)>;

FrequencyRegion region_of(const Strip& s);
FrequencyRegion region_of(const Sector& s);
FrequencyRegion complement(FrequencyRegion r);

/// Inverse transform of 1_S times the lattice DFT of f (no padding).
ComplexField sector_multiplier(const ComplexField& f, const FrequencyRegion& region);
ComplexField sector_multiplier(const Grid2D& f, const FrequencyRegion& region);

/// sum over rank < order intervals J of ||T_{strip(J)} f||^2, evaluated on
/// the DFT of f with per-frequency strip counts.
double strip_energy_sum(const Grid2D& f, const LacunaryDecomposition& decomp);

struct BandCheck {
  int k = 0;
  double width_margin = 0.0;    // 5 minus the largest |eta2 - p_k eta1| over the band corners
  double lattice_margin = 0.0;  // same over a lattice of band samples
  double x1_margin = 0.0;       // band start minus strip threshold
  bool contained = false;
};

struct ContainmentReport {
  int m = 0;
  std::vector<BandCheck> bands;
  bool all_contained() const;
  double min_margin() const;
};

/// Validates the nested chain against the pole-distance hypothesis and checks
/// that every band k = 1..m lies in the strip of J_k centered at p_k (with
/// p_n = theta). `poles` has one entry per interval except the last.
ContainmentReport support_containment_check(const std::vector<Interval>& chain,
                                            const std::vector<double>& poles, double theta, double R,
                                            int lattice = 512);

struct RatioReport {
  double value = 0.0;
  int i = -1;
  int j = -1;  // pixel of the maximum, or of an infinite ratio
};

/// max over pixels of |gamma_op(|f|, alpha, r, h)| divided by
/// (h r |alpha - beta| + 1) m1(m1(|f|, vertical), beta). Slopes alpha, beta.
RatioReport lemma3_ratio(const Grid2D& f, double alpha, double beta, double r, double h,
                         const OperatorConfig& cfg, double max_lost = 1e-3);

/// max over pixels of |gamma_op(f, theta, R, 1)| divided by
/// strong_maximal(f) + sum_k M_{p_k} M_vert |T_{strip(J_k, p_k)} f|, with
/// p_n = theta.
RatioReport lemma5_domination(const Grid2D& f, const std::vector<Interval>& chain,
                              const std::vector<double>& poles, double theta, double R,
                              const OperatorConfig& cfg, double max_lost = 1e-3);

}  // namespace dirmax
