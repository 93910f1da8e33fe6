// Acceptance run: one PASS/FAIL line per criterion, with the measured
// quantities and the wall time against its budget. Pass criterion numbers as
// arguments to run a subset.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "dirmax/grid_ops.hpp"
#include "dirmax/harness.hpp"
#include "dirmax/kernels.hpp"
#include "dirmax/lacunary.hpp"
#include "dirmax/rng.hpp"
#include "dirmax/sectors.hpp"
#include "quadrature.hpp"

using namespace dirmax;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Random complete decomposition of [0,1]: every adjacent interval of every
// stage receives a complete set with its own depth, ratio, first-element
// fraction, pole and sides. Depth is capped so the final set stays near
// 20000 points and so the innermost gaps (ratio at most 1/4 per level) stay
// well above double resolution.
LacunaryDecomposition random_complete(int mu, std::uint64_t tag, int* fallbacks = nullptr) {
  const int dmax = std::max(1, std::min(static_cast<int>((std::pow(20000.0, 1.0 / mu) - 1) / 2), 18 / mu));
  auto policy = [=](const Interval& host, int step) {
    CounterRng rng(tag, CounterRng::mix(std::bit_cast<std::uint64_t>(host.lo)) ^ static_cast<std::uint64_t>(step));
    const int depth = rng.uniform_int(1, dmax);
    const double ratio = rng.uniform(0.25, 0.5);
    const double first = rng.uniform(0.5, 1.0);
    const double pole = host.lo + rng.uniform(0.1, 0.9) * host.length();
    const double u = rng.uniform();
    const Side side = u < 0.6 ? Side::both : (u < 0.8 ? Side::increasing : Side::decreasing);
    try {
      return make_complete(host, pole, side, depth, ratio, first);
    } catch (const std::exception&) {
      if (fallbacks) ++*fallbacks;
      return make_complete(host, host.lo + 0.5 * host.length(), Side::both, depth, 0.375, 0.75);
    }
  };
  return complete_tower(mu, {0, 1}, policy);
}

Grid2D smooth_field(CounterRng& rng, int n, double spacing, bool signed_values, int bumps) {
  Grid2D g(n, n, spacing);
  for (int b = 0; b < bumps; ++b) {
    const double cx = rng.uniform(0.2, 0.8) * n, cy = rng.uniform(0.2, 0.8) * n;
    const double sig = rng.uniform(1.5, 10), amp = signed_values ? rng.uniform(-1, 1) : rng.uniform(0.2, 1);
    const int reach = static_cast<int>(8 * sig) + 1;
    for (int j = std::max(0, static_cast<int>(cy) - reach); j < std::min(n, static_cast<int>(cy) + reach); ++j)
      for (int i = std::max(0, static_cast<int>(cx) - reach); i < std::min(n, static_cast<int>(cx) + reach); ++i)
        g.at(i, j) += amp * std::exp(-((i - cx) * (i - cx) + (j - cy) * (j - cy)) / (2 * sig * sig));
  }
  return g;
}

// 1. Bisection order bound.
Outcome binary_order() {
  CounterRng rng(101);
  int worst_slack = 1 << 20, fails = 0;
  for (int t = 0; t < 200; ++t) {
    const int N = std::clamp(static_cast<int>(std::exp2(rng.uniform(1, 12))), 2, 4096);
    std::set<double> pts;
    while (static_cast<int>(pts.size()) < N) pts.insert(rng.uniform());
    const std::vector<double> v(pts.begin(), pts.end());
    const int bound = static_cast<int>(std::floor(std::log2(N))) + 2;
    const int order = binary_decomposition(v).order();
    worst_slack = std::min(worst_slack, bound - order);
    fails += order > bound;
  }
  return {fails == 0, fmt("200 sets, %d over the bound, smallest slack %d", fails, worst_slack)};
}

// 2. Overlap bounds on random complete decompositions.
Outcome overlap_bounds() {
  int max_low = 0, max_top = 0, over_low = 0, over_top = 0, fallbacks = 0;
  std::size_t largest = 0;
  for (int t = 0; t < 1000; ++t) {
    const int mu = 1 + t % 8;
    const auto d = random_complete(mu, 2000 + t, &fallbacks);
    largest = std::max(largest, d.final_set().size());
    const auto rep = max_overlap(d);
    max_low = std::max(max_low, rep.n_low);
    max_top = std::max(max_top, rep.n_top);
    over_low += rep.n_low > 40;
    over_top += rep.n_top > 12;
  }
  return {over_low == 0 && over_top == 0,
          fmt("empirical max (%d, %d) against (40, 12); %d and %d decompositions over; largest set %zu; %d "
              "parameter fallbacks",
              max_low, max_top, over_low, over_top, largest, fallbacks)};
}

// 3. Transform of V_r against an independent quadrature.
Outcome vp_transform_quadrature() {
  double worst = 0;
  for (double r : {0.1, 1.0, 10.0})
    for (double m : {0.0, 0.5, 1.0, 1.5, 2.0, 3.0}) {
      const double q = oracle::vp_cosine_integral(vp_eval, r, m * r) / (2 * pi);
      worst = std::max(worst, std::abs(q - vp_transform(r, m * r)));
    }
  return {worst <= 1e-6, fmt("largest error %.3g", worst)};
}

// 4. Fejer series from Vallee-Poussin kernels.
Outcome fejer_series() {
  double worst = 0;
  for (double r : {0.5, 1.0, 2.0})
    for (int k = 0; k < 10000; ++k) {
      const double x = -50 + 100.0 * k / 9999;
      worst = std::max(worst, std::abs(fejer_from_vp(r, x, 25) - fejer_eval(r, x)) / r);
    }
  return {worst <= 1e-9, fmt("largest error / r %.3g", worst)};
}

// 5. Pointwise chain M0 <= M1 <= M2 <= M1 M1perp.
Outcome operator_chain() {
  CounterRng rng(505);
  const double s = 1.0 / 32;
  const auto cfg = OperatorConfig::dyadic(s, 1.0);
  double worst = -1e300;
  int violations = 0;
  for (int t = 0; t < 50; ++t) {
    const Grid2D f = smooth_field(rng, 256, s, t % 2 == 1, 8);
    std::vector<double> angles(rng.uniform_int(1, 4));
    for (double& a : angles) a = rng.uniform();
    const auto rep = chain_check(f, DirectionSet::from_angles(angles), cfg);
    worst = std::max(worst, rep.worst());
    violations += rep.worst() > 1e-9;
  }
  return {violations == 0, fmt("50 pairs, %d with a violation, largest excess %.3g", violations, worst)};
}

// 6. Band containment for random chains satisfying the pole-distance
// hypothesis.
Outcome support_containment() {
  CounterRng rng(606);
  int failures = 0, empty = 0, last_band = 0;
  double worst = 1e300;
  std::string example;
  for (int t = 0; t < 100; ++t) {
    const int n = rng.uniform_int(1, 6);
    std::vector<Interval> chain;
    std::vector<double> poles;
    double lo = rng.uniform(0, 0.3), hi = rng.uniform(0.7, 1.0);
    chain.push_back({lo, hi});
    while (static_cast<int>(chain.size()) < n) {
      const Interval& J = chain.back();
      bool placed = false;
      for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
        const double p = J.lo + rng.uniform() * J.length();
        const double L = J.length() * rng.uniform(0.05, 0.35);
        const double d = L * rng.uniform(0.5, 1.0);
        const bool right = rng.uniform() < 0.5;
        const Interval next = right ? Interval{p + d, p + d + L} : Interval{p - d - L, p - d};
        if (next.lo >= J.lo && next.hi <= J.hi) {
          poles.push_back(p);
          chain.push_back(next);
          placed = true;
        }
      }
      if (!placed) break;
    }
    const Interval& last = chain.back();
    const double theta = last.lo + rng.uniform() * last.length();
    const double r_last = 1.0 / last.length(), r_first = 1.0 / chain.front().length();
    const double R = std::exp(rng.uniform(std::log(r_first), std::log(4 * r_last)));
    const auto rep = support_containment_check(chain, poles, theta, R);
    if (rep.bands.empty()) {
      ++empty;
      continue;
    }
    worst = std::min(worst, rep.min_margin());
    if (!rep.all_contained()) {
      if (failures == 0) {
        const auto bad = std::find_if(rep.bands.begin(), rep.bands.end(), [](const BandCheck& b) { return !b.contained; });
        example = fmt("; first failure: n=%zu m=%d band k=%d margin %.3f", chain.size(), rep.m, bad->k,
                      bad->width_margin);
      }
      ++failures;
      // failures confined to the band that runs up to 2R when the chain continues past m
      last_band += std::all_of(rep.bands.begin(), rep.bands.end(), [&](const BandCheck& b) {
        return b.contained || (b.k == rep.m && rep.m < static_cast<int>(chain.size()));
      });
    }
  }
  return {failures == 0,
          fmt("100 chains (%d with no band), %d not contained (%d only in the last band with m < n), smallest "
              "margin %.3f%s",
              empty, failures, last_band, worst, example.c_str())};
}

// 7. Normalized Lemma 3 ratio across hr|alpha - beta| in {0, 1, 10, 100}.
Outcome lemma3_stability() {
  CounterRng rng(707);
  const double s = 1.0 / 32;
  // r keeps the kernel's spectrum (|xi| <= 2r) under the grid Nyquist
  // frequency; h keeps the bump's x^-4 tail mostly inside the window. Then
  // hr = 51, so the largest level needs |alpha - beta| near 2.
  const double h = 34 * s, r = 1.5 / s;
  // f vanishes off the grid, so kernel offsets beyond the window never meet
  // it and the output is exact at every grid point; the mass guard is off.
  const double max_lost = 1.0;
  // radii past the grid diagonal, so every point sees every point mass
  const auto cfg = OperatorConfig::dyadic(s, 16.0);
  std::vector<double> all;
  double level_max[4] = {0, 0, 0, 0};
  for (int t = 0; t < 20; ++t) {
    // Point masses are the functions for which the kernel-to-maximal ratio
    // grows like hr|alpha - beta|; the bumps and background keep f generic and
    // the denominator positive.
    Grid2D f = smooth_field(rng, 256, s, false, 6);
    for (double& v : f.values) v = 0.1 * v + 1e-4;
    const int points = rng.uniform_int(1, 3);
    for (int q = 0; q < points; ++q) f.at(rng.uniform_int(64, 191), rng.uniform_int(64, 191)) += 1.0;
    const double beta = rng.uniform(0.05, 0.95);
    int level = 0;
    for (double target : {0.0, 1.0, 10.0, 100.0}) {
      const double alpha = beta + target / (h * r);
      const double q = lemma3_ratio(f, alpha, beta, r, h, cfg, max_lost).value;
      all.push_back(q);
      level_max[level] = std::max(level_max[level], q);
      ++level;
    }
  }
  std::vector<double> sorted = all;
  std::sort(sorted.begin(), sorted.end());
  const double median = 0.5 * (sorted[sorted.size() / 2 - 1] + sorted[sorted.size() / 2]);
  const double top = sorted.back();
  return {top <= 3 * median,
          fmt("median %.4g, max %.4g (%.2fx); level maxima %.4g %.4g %.4g %.4g; kernel mass guard %.2g",
              median, top, top / median, level_max[0], level_max[1], level_max[2], level_max[3], max_lost)};
}

// 8. Growth of the m1 norm ratio in mu and in N.
Outcome scaling() {
  const int n = 512;
  const double s = 1.0 / 64;
  auto cfg = OperatorConfig::dyadic(s, 4.0);
  std::vector<TestFunctionSpec> specs(3);
  specs[0].kind = TestKind::hot_pixel;
  specs[1].radius = 2 * s;
  specs[2].radius = 6 * s;
  const auto fam = make_family(specs, n, n, s);

  TowerShape shape;
  shape.depth = 2;
  const auto mu = sweep_mu({1, 2, 3, 4, 5, 6}, fam, {OperatorKind::m1}, cfg, shape);
  const auto N = sweep_N({4, 16, 64, 256}, fam, {OperatorKind::m1, OperatorKind::m2}, cfg);

  bool ok = true;
  std::string d = "mu:";
  const double base_mu = mu.rows[0].max_ratio;
  for (const auto& row : mu.rows) {
    const double q = row.max_ratio / std::sqrt(row.label) / base_mu;
    ok = ok && q >= 0.5 && q <= 2;
    d += fmt(" %d:%.4f(%.3f)", row.label, row.max_ratio, q);
  }
  d += "; N:";
  double base_n = 0;
  for (const auto& row : N.rows) {
    if (row.op != OperatorKind::m1) continue;
    if (base_n == 0) base_n = row.max_ratio / row.ref_sqrt_log();
    const double q = row.max_ratio / row.ref_sqrt_log() / base_n;
    ok = ok && q >= 0.5 && q <= 2;
    d += fmt(" %d:%.4f(%.3f)", row.label, row.max_ratio, q);
  }
  d += "; m2 N:";
  for (const auto& row : N.rows)
    if (row.op == OperatorKind::m2) d += fmt(" %d:%.4f", row.label, row.max_ratio);
  d += " (ratio/sqrt growth relative to the first row in parentheses)";
  return {ok, d};
}

// 9. Strip energy against the overlap constant.
Outcome strip_orthogonality() {
  CounterRng rng(909);
  const double s = 1.0 / 32;
  double worst = 0;
  int over = 0;
  for (int t = 0; t < 20; ++t) {
    Grid2D f = smooth_field(rng, 256, s, true, 6);
    for (double& v : f.values) v += 0.05 * rng.uniform(-1, 1);  // broadband part
    const double nf = f.l2_norm();
    for (int k = 0; k < 20; ++k) {
      const auto d = random_complete(1 + (t + k) % 6, 9000 + 20 * t + k);
      const double q = strip_energy_sum(f, d) / (nf * nf);
      worst = std::max(worst, q);
      over += q > 40 * 1.05;
    }
  }
  return {over == 0, fmt("400 pairs, largest energy ratio %.4f against %.1f", worst, 40 * 1.05)};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "bisection order bound", 10, binary_order},
      {2, "strip overlap bounds", 60, overlap_bounds},
      {3, "Vallee-Poussin transform quadrature", 5, vp_transform_quadrature},
      {4, "Fejer series identity", 5, fejer_series},
      {5, "maximal operator chain", 300, operator_chain},
      {6, "frequency band containment", 10, support_containment},
      {7, "directional kernel domination stability", 600, lemma3_stability},
      {8, "norm ratio scaling", 1800, scaling},
      {9, "strip multiplier orthogonality", 300, strip_orthogonality},
  };
  std::set<int> wanted;
  for (int a = 1; a < argc; ++a) wanted.insert(std::atoi(argv[a]));
  int failed = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("criterion %d (%s): %s  %s  [%.1f s of %.0f s%s]\n", c.id, c.name, pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs, c.budget_s, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
