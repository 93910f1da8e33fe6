#include "dirmax/sectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "dirmax/error.hpp"
#include "dirmax/fft.hpp"

namespace dirmax {

FreqPoint lattice_to_frame(double xi1, double xi2) { return {xi2, -xi1}; }

Strip make_strip(double lo, double hi, double center) {
  if (!(lo < hi)) throw std::invalid_argument("strip: empty interval");
  if (!(lo <= center && center <= hi)) throw std::invalid_argument("strip: center outside the interval");
  return Strip{lo, hi, center, 1.0 / (hi - lo), 5.0};
}

bool strip_contains(const Strip& strip, FreqPoint p) {
  return p.first > strip.min_x1 && std::abs(p.second - strip.center * p.first) <= strip.half_width;
}

bool sector_contains(const Sector& sector, FreqPoint p) {
  if (!(p.first > 0)) return false;
  const double t = p.second / p.first;
  return sector.slope_lo <= t && t <= sector.slope_hi;
}

namespace {

struct StripItem {
  double threshold;  // 1 / |J|
  double center;
};

void collect_strips(const LacunaryDecomposition& d, std::vector<StripItem>& low, std::vector<StripItem>& top) {
  for (const auto& r : d.rank_intervals()) {
    const double th = 1.0 / (r.hi - r.lo);
    if (r.rank < d.order()) {
      if (!r.pole)
        throw std::invalid_argument("overlap: rank " + std::to_string(r.rank) + " interval has no pole");
      low.push_back({th, *r.pole});
    } else {
      top.push_back({th, r.lo});
      top.push_back({th, r.hi});
    }
  }
}

// Largest number of centers that a strip window can hold. At eta1 = X the
// active strips are those with threshold < X and the window in t = eta2/eta1
// has width 10/X, so the supremum is approached as X decreases to a
// threshold: centers with spread < 10/threshold, all active there.
std::pair<int, FreqPoint> max_window(std::vector<StripItem> items) {
  std::sort(items.begin(), items.end(),
            [](const StripItem& a, const StripItem& b) { return a.threshold < b.threshold; });
  std::vector<double> active;  // sorted centers
  int best = 0;
  FreqPoint where{0.0, 0.0};
  std::size_t g = 0;
  while (g < items.size()) {
    const double m = items[g].threshold;
    std::size_t e = g;
    while (e < items.size() && items[e].threshold == m) ++e;
    for (std::size_t q = g; q < e; ++q)
      active.insert(std::upper_bound(active.begin(), active.end(), items[q].center), items[q].center);
    const double w = 10.0 / m;
    for (std::size_t q = g; q < e; ++q) {
      const double c = items[q].center;
      const auto lo_it = std::upper_bound(active.begin(), active.end(), c - w);
      const auto hi_it = std::lower_bound(active.begin(), active.end(), c + w);
      const std::vector<double> near(lo_it, hi_it);
      std::size_t r = 0;
      for (std::size_t l = 0; l < near.size() && near[l] <= c; ++l) {
        r = std::max(r, l);
        while (r + 1 < near.size() && near[r + 1] - near[l] < w) ++r;
        if (near[r] < c) continue;
        const int count = static_cast<int>(r - l + 1);
        if (count > best) {
          best = count;
          const double spread = near[r] - near[l];
          const double cap = spread > 0 ? 10.0 / spread : std::numeric_limits<double>::infinity();
          const double X = m + std::min(m * 1e-9, 0.5 * (cap - m));
          where = {X, 0.5 * (near[l] + near[r]) * X};
        }
      }
    }
    g = e;
  }
  return {best, where};
}

}  // namespace

std::pair<int, int> overlap_count(const LacunaryDecomposition& decomp, FreqPoint p) {
  if (!(p.first > 0)) throw std::invalid_argument("overlap_count: eta1 must be positive");
  int low = 0, top = 0;
  for (const auto& r : decomp.rank_intervals()) {
    if (r.rank < decomp.order()) {
      if (!r.pole) throw std::invalid_argument("overlap_count: interval without pole");
      low += strip_contains(make_strip(r.lo, r.hi, *r.pole), p);
    } else {
      top += strip_contains(make_strip(r.lo, r.hi, r.lo), p);
      top += strip_contains(make_strip(r.lo, r.hi, r.hi), p);
    }
  }
  return {low, top};
}

OverlapReport max_overlap(const LacunaryDecomposition& decomp) {
  std::vector<StripItem> low, top;
  collect_strips(decomp, low, top);
  OverlapReport rep;
  std::tie(rep.n_low, rep.argmax_low) = max_window(std::move(low));
  std::tie(rep.n_top, rep.argmax_top) = max_window(std::move(top));
  return rep;
}

double ComplexField::l2_norm() const {
  double s = 0;
  for (const auto& v : values) s += std::norm(v);
  return std::sqrt(s) * spacing;
}

ComplexField to_complex(const Grid2D& g) {
  g.validate();
  ComplexField c{g.width, g.height, g.spacing, {}};
  c.values.assign(g.values.begin(), g.values.end());
  return c;
}

Grid2D modulus(const ComplexField& c) {
  Grid2D g(c.width, c.height, c.spacing);
  for (std::size_t q = 0; q < g.values.size(); ++q) g.values[q] = std::abs(c.values[q]);
  return g;
}

Grid2D zero_pad(const Grid2D& g, int factor) {
  if (factor < 1) throw std::invalid_argument("zero_pad: factor must be >= 1");
  Grid2D out(g.width * factor, g.height * factor, g.spacing, g.origin);
  for (int j = 0; j < g.height; ++j)
    for (int i = 0; i < g.width; ++i) out.at(i, j) = g.at(i, j);
  return out;
}

FrequencyRegion region_of(const Strip& s) {
  return [s](FreqPoint p) { return strip_contains(s, p); };
}

FrequencyRegion region_of(const Sector& s) {
  return [s](FreqPoint p) { return sector_contains(s, p); };
}

FrequencyRegion complement(FrequencyRegion r) {
  return [r = std::move(r)](FreqPoint p) { return !r(p); };
}

ComplexField sector_multiplier(const ComplexField& f, const FrequencyRegion& region) {
  auto F = fft2(f.values, f.width, f.height);
  for (int q = 0; q < f.height; ++q) {
    const double xi2 = bin_frequency(q, f.height, f.spacing);
    for (int p = 0; p < f.width; ++p) {
      const double xi1 = bin_frequency(p, f.width, f.spacing);
      if (!region(lattice_to_frame(xi1, xi2))) F[static_cast<std::size_t>(q) * f.width + p] = 0.0;
    }
  }
  return ComplexField{f.width, f.height, f.spacing, ifft2(F, f.width, f.height)};
}

ComplexField sector_multiplier(const Grid2D& f, const FrequencyRegion& region) {
  return sector_multiplier(to_complex(f), region);
}

double strip_energy_sum(const Grid2D& f, const LacunaryDecomposition& decomp) {
  std::vector<StripItem> low, top;
  collect_strips(decomp, low, top);
  std::sort(low.begin(), low.end(), [](const StripItem& a, const StripItem& b) { return a.threshold < b.threshold; });
  const auto c = to_complex(f);
  const auto F = fft2(c.values, c.width, c.height);

  std::vector<int> rows(f.height);
  for (int q = 0; q < f.height; ++q) rows[q] = q;
  std::sort(rows.begin(), rows.end(), [&](int a, int b) {
    return bin_frequency(a, f.height, f.spacing) < bin_frequency(b, f.height, f.spacing);
  });
  std::vector<double> active;
  std::size_t next = 0;
  double weighted = 0;
  for (int q : rows) {
    const double eta1 = bin_frequency(q, f.height, f.spacing);
    if (!(eta1 > 0)) continue;
    while (next < low.size() && low[next].threshold < eta1) {
      active.insert(std::upper_bound(active.begin(), active.end(), low[next].center), low[next].center);
      ++next;
    }
    const double reach = 5.0 / eta1 * (1 + 1e-9) + 1e-12;
    for (int p = 0; p < f.width; ++p) {
      const double eta2 = -bin_frequency(p, f.width, f.spacing);
      const double t = eta2 / eta1;
      int count = 0;
      for (auto it = std::lower_bound(active.begin(), active.end(), t - reach);
           it != active.end() && *it <= t + reach; ++it)
        count += std::abs(eta2 - *it * eta1) <= 5.0;
      weighted += count * std::norm(F[static_cast<std::size_t>(q) * f.width + p]);
    }
  }
  const double n = static_cast<double>(f.width) * f.height;
  return weighted * f.spacing * f.spacing / n;
}

bool ContainmentReport::all_contained() const {
  return std::all_of(bands.begin(), bands.end(), [](const BandCheck& b) { return b.contained; });
}

double ContainmentReport::min_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& b : bands) m = std::min(m, b.width_margin);
  return m;
}

namespace {

double dist_to(double p, const Interval& J) {
  if (p < J.lo) return J.lo - p;
  if (p > J.hi) return p - J.hi;
  return 0.0;
}

void validate_chain(const std::vector<Interval>& chain, const std::vector<double>& poles, double theta) {
  const std::size_t n = chain.size();
  if (n == 0) throw std::invalid_argument("chain must be nonempty");
  if (poles.size() + 1 != n) throw std::invalid_argument("chain needs one pole per interval but the last");
  for (std::size_t k = 0; k < n; ++k) {
    const auto& J = chain[k];
    const std::string at = " (k=" + std::to_string(k + 1) + ")";
    if (!(0 <= J.lo && J.lo < J.hi && J.hi <= 1)) throw PreconditionViolation("interval not inside [0,1]" + at);
    if (k + 1 < n) {
      const auto& next = chain[k + 1];
      if (!(J.lo <= next.lo && next.hi <= J.hi)) throw PreconditionViolation("intervals not nested" + at);
      if (!J.contains_closed(poles[k])) throw PreconditionViolation("pole outside its interval" + at);
      const double d = dist_to(poles[k], next), len = next.length();
      if (!(len / 2 <= d && d <= len)) throw PreconditionViolation("pole distance hypothesis fails" + at);
    }
  }
  if (!chain.back().contains_closed(theta)) throw PreconditionViolation("theta outside the last interval");
}

}  // namespace

ContainmentReport support_containment_check(const std::vector<Interval>& chain, const std::vector<double>& poles,
                                            double theta, double R, int lattice) {
  validate_chain(chain, poles, theta);
  if (!(R > 0)) throw std::invalid_argument("R must be positive");
  if (lattice < 2) throw std::invalid_argument("lattice must have at least 2 points per side");
  const int n = static_cast<int>(chain.size());
  std::vector<double> r(n + 2, 0.0);
  for (int k = 1; k <= n; ++k) r[k] = 1.0 / chain[k - 1].length();
  ContainmentReport rep;
  for (int k = 1; k <= n; ++k)
    if (2 * r[k] < R) rep.m = k;
  for (int k = 1; k <= rep.m; ++k) {
    const double lo = r[k];
    const double hi = 2 * (k == rep.m ? R : r[k + 1]);
    const double p = k == n ? theta : poles[k - 1];
    const Strip strip = make_strip(chain[k - 1].lo, chain[k - 1].hi, p);
    BandCheck b;
    b.k = k;
    b.x1_margin = lo - strip.min_x1;
    double worst = 0;
    for (double e1 : {lo, hi})
      for (double s : {-1.0, 1.0}) worst = std::max(worst, std::abs(theta * e1 + s - p * e1));
    b.width_margin = strip.half_width - worst;
    double lat = 0;
    for (int a = 0; a < lattice; ++a) {
      const double e1 = lo + (hi - lo) * a / (lattice - 1);
      for (int c = 0; c < lattice; ++c) {
        const double e2 = theta * e1 - 1 + 2.0 * c / (lattice - 1);
        lat = std::max(lat, std::abs(e2 - p * e1));
      }
    }
    b.lattice_margin = strip.half_width - lat;
    // The band starts on the strip's threshold line; the closed strip is used.
    b.contained = b.width_margin > 0 && b.x1_margin >= 0;
    rep.bands.push_back(b);
  }
  return rep;
}

namespace {

RatioReport pixel_ratio(const Grid2D& num, const Grid2D& den) {
  RatioReport rep;
  for (int j = 0; j < num.height; ++j)
    for (int i = 0; i < num.width; ++i) {
      const double a = std::abs(num.at(i, j)), b = den.at(i, j);
      double q;
      if (b > 0) q = a / b;
      else if (a == 0) q = 0;
      else q = std::numeric_limits<double>::infinity();
      if (rep.i < 0 || q > rep.value) rep = {q, i, j};
      if (std::isinf(q)) return rep;
    }
  return rep;
}

const DirectionSet& vertical() {
  static const DirectionSet v = DirectionSet::from_angles(std::vector{0.25});
  return v;
}

}  // namespace

RatioReport lemma3_ratio(const Grid2D& f, double alpha, double beta, double r, double h, const OperatorConfig& cfg,
                         double max_lost) {
  const Grid2D g = abs(f);
  const Grid2D num = gamma_op(g, alpha, r, h, max_lost);
  Grid2D den = m1(m1(g, vertical(), cfg), DirectionSet::from_slopes(std::vector{beta}), cfg);
  const double factor = h * r * std::abs(alpha - beta) + 1;
  for (double& v : den.values) v *= factor;
  return pixel_ratio(num, den);
}

RatioReport lemma5_domination(const Grid2D& f, const std::vector<Interval>& chain, const std::vector<double>& poles,
                              double theta, double R, const OperatorConfig& cfg, double max_lost) {
  validate_chain(chain, poles, theta);
  const Grid2D num = gamma_op(f, theta, R, 1.0, max_lost);
  Grid2D den = strong_maximal(f, cfg);
  const ComplexField fc = to_complex(f);
  for (std::size_t k = 0; k < chain.size(); ++k) {
    const double p = k + 1 == chain.size() ? theta : poles[k];
    const Grid2D part = modulus(sector_multiplier(fc, region_of(make_strip(chain[k].lo, chain[k].hi, p))));
    const Grid2D term = m1(m1(part, vertical(), cfg), DirectionSet::from_slopes(std::vector{p}), cfg);
    for (std::size_t q = 0; q < den.size(); ++q) den.values[q] += term.values[q];
  }
  return pixel_ratio(num, den);
}

}  // namespace dirmax
