#include "dirmax/grid_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "dirmax/error.hpp"
#include "dirmax/fft.hpp"
#include "dirmax/kernels.hpp"

namespace dirmax {

void OperatorConfig::validate() const {
  if (radii.empty()) throw std::invalid_argument("operator config: radii must be nonempty");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0) || !std::isfinite(radii[i]))
      throw std::invalid_argument("operator config: radii must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1]))
      throw std::invalid_argument("operator config: radii must be strictly increasing");
  }
  if (aspect_levels < 1) throw std::invalid_argument("operator config: aspect_levels must be >= 1");
  if (threads < 1) throw std::invalid_argument("operator config: threads must be >= 1");
}

OperatorConfig OperatorConfig::dyadic(double spacing, double reach, int aspect_levels) {
  OperatorConfig cfg;
  for (double r = spacing; r <= reach * (1 + 1e-12); r *= 2) cfg.radii.push_back(r);
  cfg.aspect_levels = aspect_levels;
  return cfg;
}

int LineStencil::steps_for(double delta) const {
  if (!(delta > 0) || !std::isfinite(delta)) throw std::invalid_argument("delta must be positive");
  return std::max(1L, std::lround(delta / step));
}

LineStencil line_stencil(double s, double spacing) {
  const double c = std::cos(2 * std::numbers::pi * s);
  const double sn = std::sin(2 * std::numbers::pi * s);
  LineStencil st;
  st.x_major = std::abs(c) >= std::abs(sn);
  st.beta = st.x_major ? sn / c : c / sn;
  if (std::abs(st.beta) < 1e-15) st.beta = 0.0;
  st.step = spacing * std::sqrt(1 + st.beta * st.beta);
  return st;
}

namespace {

void parallel_rows(int rows, int threads, auto&& body) {
  threads = std::clamp(threads, 1, std::max(1, rows));
  if (threads == 1) {
    for (int j = 0; j < rows; ++j) body(j);
    return;
  }
  std::vector<std::jthread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (int j = t; j < rows; j += threads) body(j);
    });
}

// Trapezoid averages along nodes (i + k, j + m[k] + w[k]) of the W x H
// row-major array g, for each step count in `steps` (ascending). emit(c, i, j,
// value) receives the average for steps[c] at pixel (i, j). Pixels whose
// stencil never touches the nonzero bounding box are not emitted.
template <class Emit>
void x_major_pass(const std::vector<double>& g, int W, int H, double beta, const std::vector<int>& steps,
                  int threads, Emit&& emit) {
  int r0 = H, r1 = -1, c0 = W, c1 = -1;
  for (int j = 0; j < H; ++j)
    for (int i = 0; i < W; ++i)
      if (g[static_cast<std::size_t>(j) * W + i] != 0.0) {
        r0 = std::min(r0, j);
        r1 = std::max(r1, j);
        c0 = std::min(c0, i);
        c1 = std::max(c1, i);
      }
  if (r1 < 0 || steps.empty()) return;

  const int dmax = steps.back();
  const int n = 2 * dmax + 1;
  std::vector<int> m(n);
  std::vector<double> w(n);
  for (int k = -dmax; k <= dmax; ++k) {
    const double y = k * beta;
    const double fl = std::floor(y);
    m[k + dmax] = static_cast<int>(fl);
    w[k + dmax] = y - fl;
  }

  parallel_rows(H, threads, [&](int j) {
    // k with row j + m[k] or j + m[k] + 1 inside [r0, r1].
    const int lo = r0 - 1 - j, hi = r1 - j;
    int klo, khi;
    if (beta >= 0) {
      klo = static_cast<int>(std::lower_bound(m.begin(), m.end(), lo) - m.begin());
      khi = static_cast<int>(std::upper_bound(m.begin(), m.end(), hi) - m.begin()) - 1;
    } else {
      klo = static_cast<int>(std::partition_point(m.begin(), m.end(), [&](int x) { return x > hi; }) - m.begin());
      khi = static_cast<int>(std::partition_point(m.begin(), m.end(), [&](int x) { return x >= lo; }) - m.begin()) - 1;
    }
    if (klo > khi) return;
    klo -= dmax;
    khi -= dmax;
    const int ilo = std::max(0, c0 - khi), ihi = std::min(W - 1, c1 - klo);
    for (int i = ilo; i <= ihi; ++i) {
      const int a = std::max(klo, c0 - i), b = std::min(khi, c1 - i);
      if (a > b) continue;
      auto v = [&](int k) -> double {
        if (k < a || k > b) return 0.0;
        const int col = i + k, row = j + m[k + dmax];
        const double om = w[k + dmax];
        const double below = row >= 0 && row < H ? g[static_cast<std::size_t>(row) * W + col] : 0.0;
        const double above = row + 1 >= 0 && row + 1 < H ? g[static_cast<std::size_t>(row + 1) * W + col] : 0.0;
        return (1.0 - om) * below + om * above;
      };
      const int dlo = a <= 0 && 0 <= b ? 0 : (a > 0 ? a : -b);
      const int dhi = std::max(std::abs(a), std::abs(b));
      double acc = 0.0;
      int d = dlo;
      for (std::size_t c = 0; c < steps.size(); ++c) {
        const int D = steps[c];
        const int lim = std::min(D - 1, dhi);
        for (; d <= lim; ++d) acc += d == 0 ? v(0) : v(d) + v(-d);
        const double edge = D <= dhi ? v(D) + v(-D) : 0.0;
        emit(c, i, j, (acc + 0.5 * edge) / (2.0 * D));
      }
    }
  });
}

std::vector<double> transpose(const std::vector<double>& g, int W, int H) {
  std::vector<double> t(g.size());
  for (int j = 0; j < H; ++j)
    for (int i = 0; i < W; ++i) t[static_cast<std::size_t>(i) * H + j] = g[static_cast<std::size_t>(j) * W + i];
  return t;
}

// Runs the pass for direction s on nonnegative g; emit(c, index, value) gets
// indices into g's own layout.
template <class Emit>
void direction_pass(const Grid2D& g, double s, const std::vector<int>& steps, int threads, Emit&& emit) {
  const LineStencil st = line_stencil(s, g.spacing);
  const int W = g.width, H = g.height;
  if (st.x_major) {
    x_major_pass(g.values, W, H, st.beta, steps, threads,
                 [&](std::size_t c, int i, int j, double v) { emit(c, static_cast<std::size_t>(j) * W + i, v); });
  } else {
    // Transposed frame: column index runs along x2.
    x_major_pass(transpose(g.values, W, H), H, W, st.beta, steps, threads,
                 [&](std::size_t c, int i, int j, double v) { emit(c, static_cast<std::size_t>(i) * W + j, v); });
  }
}

struct StepMap {
  std::vector<int> steps;        // unique ascending
  std::vector<std::size_t> slot;  // radius index -> position in steps
};

StepMap map_steps(const LineStencil& st, std::span<const double> deltas) {
  StepMap sm;
  std::vector<int> raw;
  for (double d : deltas) raw.push_back(st.steps_for(d));
  sm.steps = raw;
  std::sort(sm.steps.begin(), sm.steps.end());
  sm.steps.erase(std::unique(sm.steps.begin(), sm.steps.end()), sm.steps.end());
  for (int d : raw)
    sm.slot.push_back(static_cast<std::size_t>(std::lower_bound(sm.steps.begin(), sm.steps.end(), d) - sm.steps.begin()));
  return sm;
}

void max_pass(Grid2D& acc, const Grid2D& g, double s, std::span<const double> deltas, int threads) {
  const StepMap sm = map_steps(line_stencil(s, g.spacing), deltas);
  direction_pass(g, s, sm.steps, threads, [&](std::size_t, std::size_t idx, double v) {
    if (v > acc.values[idx]) acc.values[idx] = v;
  });
}

double wrap_angle(double s) {
  s = std::fmod(s, 1.0);
  return s < 0 ? s + 1.0 : s;
}

void require_directions(const DirectionSet& omega) {
  if (omega.empty()) throw std::invalid_argument("direction set must be nonempty");
}

std::vector<double> radii_between(const std::vector<double>& radii, double lo, double hi) {
  std::vector<double> out;
  for (double r : radii)
    if (r >= lo * (1 - 1e-12) && r <= hi * (1 + 1e-12)) out.push_back(r);
  return out;
}

}  // namespace

double directional_avg(const Grid2D& f, double s, double delta, std::pair<double, double> x) {
  const LineStencil st = line_stencil(s, f.spacing);
  const int D = st.steps_for(delta);
  const double u = (x.first - f.origin.first) / f.spacing;
  const double v = (x.second - f.origin.second) / f.spacing;
  auto at = [&](int i, int j) {
    return i < 0 || j < 0 || i >= f.width || j >= f.height ? 0.0 : std::abs(f.at(i, j));
  };
  auto node = [&](int k) {
    const double pu = st.x_major ? u + k : u + k * st.beta;
    const double pv = st.x_major ? v + k * st.beta : v + k;
    const double fu = std::floor(pu), fv = std::floor(pv);
    const int i = static_cast<int>(fu), j = static_cast<int>(fv);
    const double a = pu - fu, b = pv - fv;
    return (1 - b) * ((1 - a) * at(i, j) + a * at(i + 1, j)) + b * ((1 - a) * at(i, j + 1) + a * at(i + 1, j + 1));
  };
  double acc = node(0);
  for (int d = 1; d < D; ++d) acc += node(d) + node(-d);
  return (acc + 0.5 * (node(D) + node(-D))) / (2.0 * D);
}

std::vector<Grid2D> directional_avg_fields(const Grid2D& g, double s, std::span<const double> deltas, int threads) {
  g.validate();
  const Grid2D a = abs(g);
  const StepMap sm = map_steps(line_stencil(s, g.spacing), deltas);
  std::vector<Grid2D> by_step(sm.steps.size(), g.like());
  direction_pass(a, s, sm.steps, threads,
                 [&](std::size_t c, std::size_t idx, double v) { by_step[c].values[idx] = v; });
  std::vector<Grid2D> out;
  for (std::size_t slot : sm.slot) out.push_back(by_step[slot]);
  return out;
}

Grid2D m0(const Grid2D& f, const DirectionSet& omega, int threads) {
  f.validate();
  require_directions(omega);
  if (f.spacing > 0.125) throw PreconditionViolation("m0: grid spacing must be at most 1/8");
  const Grid2D a = abs(f);
  Grid2D out = f.like();
  const double unit[] = {1.0};
  for (double s : omega.angles()) max_pass(out, a, s, unit, threads);
  return out;
}

void m1_accumulate(Grid2D& acc, const Grid2D& f, double s, const OperatorConfig& cfg) {
  cfg.validate();
  if (!same_shape(acc, f)) throw std::invalid_argument("m1_accumulate: shape mismatch");
  max_pass(acc, abs(f), s, cfg.radii, cfg.threads);
}

Grid2D m1(const Grid2D& f, const DirectionSet& omega, const OperatorConfig& cfg) {
  f.validate();
  cfg.validate();
  require_directions(omega);
  const Grid2D a = abs(f);
  Grid2D out = a;
  for (double s : omega.angles()) max_pass(out, a, s, cfg.radii, cfg.threads);
  return out;
}

void m2_accumulate(Grid2D& acc, const Grid2D& f, double s, const OperatorConfig& cfg) {
  cfg.validate();
  if (!same_shape(acc, f)) throw std::invalid_argument("m2_accumulate: shape mismatch");
  const Grid2D a = abs(f);
  max_pass(acc, a, s, cfg.radii, cfg.threads);
  const auto widths = directional_avg_fields(a, wrap_angle(s + 0.25), cfg.radii, cfg.threads);
  const double span = std::ldexp(1.0, cfg.aspect_levels);
  for (std::size_t k = 0; k < widths.size(); ++k) {
    const auto lengths = radii_between(cfg.radii, cfg.radii[k], cfg.radii[k] * span);
    if (!lengths.empty()) max_pass(acc, widths[k], s, lengths, cfg.threads);
  }
}

Grid2D m2(const Grid2D& f, const DirectionSet& omega, const OperatorConfig& cfg) {
  f.validate();
  cfg.validate();
  require_directions(omega);
  Grid2D out = abs(f);
  for (double s : omega.angles()) m2_accumulate(out, f, s, cfg);
  return out;
}

Grid2D strong_maximal(const Grid2D& f, const OperatorConfig& cfg) {
  f.validate();
  cfg.validate();
  const Grid2D a = abs(f);
  Grid2D out = a;
  max_pass(out, a, 0.0, cfg.radii, cfg.threads);
  max_pass(out, a, 0.25, cfg.radii, cfg.threads);
  const auto columns = directional_avg_fields(a, 0.25, cfg.radii, cfg.threads);
  const double span = std::ldexp(1.0, cfg.aspect_levels);
  for (std::size_t k = 0; k < columns.size(); ++k) {
    const auto lengths = radii_between(cfg.radii, cfg.radii[k] / span, cfg.radii[k] * span);
    if (!lengths.empty()) max_pass(out, columns[k], 0.0, lengths, cfg.threads);
  }
  return out;
}

namespace {

struct SampledKernel {
  int pw = 0, ph = 0;
  std::vector<double> values;  // pw x ph, offsets wrapped
  double window_mass = 0.0;
};

SampledKernel sample_gamma_kernel(const Grid2D& f, double alpha, double r, double h) {
  if (!(r > 0) || !(h > 0)) throw std::invalid_argument("gamma_op: r and h must be positive");
  if (!std::isfinite(alpha)) throw std::invalid_argument("gamma_op: alpha must be finite");
  SampledKernel k;
  k.pw = 2 * f.width;
  k.ph = 2 * f.height;
  k.values.assign(static_cast<std::size_t>(k.pw) * k.ph, 0.0);
  const double s = f.spacing;
  std::vector<double> phi(2 * f.width - 1);
  for (int a = -(f.width - 1); a <= f.width - 1; ++a) phi[a + f.width - 1] = bump_eval(h, a * s);
  for (int b = -(f.height - 1); b <= f.height - 1; ++b) {
    const std::size_t row = static_cast<std::size_t>((b + k.ph) % k.ph) * k.pw;
    for (int a = -(f.width - 1); a <= f.width - 1; ++a) {
      const double v = vp_eval(r, b * s - alpha * a * s) * phi[a + f.width - 1];
      k.values[row + (a + k.pw) % k.pw] = v;
      k.window_mass += v;
    }
  }
  k.window_mass *= s * s;
  return k;
}

double lost_fraction(double window_mass) {
  const double total = 2 * std::numbers::pi * bump_integral();
  return std::abs(total - window_mass) / total;
}

}  // namespace

double gamma_lost_fraction(const Grid2D& f, double alpha, double r, double h) {
  f.validate();
  return lost_fraction(sample_gamma_kernel(f, alpha, r, h).window_mass);
}

Grid2D gamma_op(const Grid2D& f, double alpha, double r, double h, double max_lost) {
  f.validate();
  const SampledKernel k = sample_gamma_kernel(f, alpha, r, h);
  const double lost = lost_fraction(k.window_mass);
  if (!(lost <= max_lost))
    throw TruncationError("gamma_op: sampled kernel misses " + std::to_string(lost) +
                              " of its mass; enlarge the grid or reduce 1/r and h",
                          lost);
  std::vector<double> padded(k.values.size(), 0.0);
  for (int j = 0; j < f.height; ++j)
    for (int i = 0; i < f.width; ++i) padded[static_cast<std::size_t>(j) * k.pw + i] = f.at(i, j);
  auto F = rfft2(padded, k.pw, k.ph);
  const auto K = rfft2(k.values, k.pw, k.ph);
  for (std::size_t q = 0; q < F.size(); ++q) F[q] *= K[q];
  const auto conv = irfft2(F, k.pw, k.ph);
  Grid2D out = f.like();
  const double cell = f.spacing * f.spacing;
  for (int j = 0; j < f.height; ++j)
    for (int i = 0; i < f.width; ++i) out.at(i, j) = conv[static_cast<std::size_t>(j) * k.pw + i] * cell;
  return out;
}

double ChainReport::worst() const { return std::max({m0_over_m1, m1_over_m2, m2_over_m1m1}); }

ChainReport chain_check(const Grid2D& f, const DirectionSet& omega, OperatorConfig cfg) {
  if (std::find(cfg.radii.begin(), cfg.radii.end(), 1.0) == cfg.radii.end()) {
    cfg.radii.push_back(1.0);
    std::sort(cfg.radii.begin(), cfg.radii.end());
  }
  const Grid2D a0 = m0(f, omega, cfg.threads);
  const Grid2D a1 = m1(f, omega, cfg);
  const Grid2D a2 = m2(f, omega, cfg);
  const Grid2D a3 = m1(m1(f, perpendicular(omega), cfg), omega, cfg);
  ChainReport rep;
  for (std::size_t q = 0; q < f.size(); ++q) {
    rep.m0_over_m1 = std::max(rep.m0_over_m1, a0.values[q] - a1.values[q]);
    rep.m1_over_m2 = std::max(rep.m1_over_m2, a1.values[q] - a2.values[q]);
    rep.m2_over_m1m1 = std::max(rep.m2_over_m1m1, a2.values[q] - a3.values[q]);
  }
  return rep;
}

}  // namespace dirmax
