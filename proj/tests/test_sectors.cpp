#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <set>
#include <stdexcept>

#include "dirmax/error.hpp"
#include "dirmax/rng.hpp"
#include "dirmax/sectors.hpp"

using namespace dirmax;

namespace {

Grid2D smooth_random(CounterRng& rng, int n, double spacing, bool signed_values) {
  Grid2D g(n, n, spacing);
  for (int b = 0; b < 6; ++b) {
    const double cx = rng.uniform(0.25, 0.75) * n, cy = rng.uniform(0.25, 0.75) * n;
    const double sig = rng.uniform(1.5, 5), amp = signed_values ? rng.uniform(-1, 1) : rng.uniform(0.2, 1);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        g.at(i, j) += amp * std::exp(-((i - cx) * (i - cx) + (j - cy) * (j - cy)) / (2 * sig * sig));
  }
  return g;
}

LacunaryDecomposition tower(int order, int depth, double ratio) {
  auto policy = [=](const Interval& host, int) {
    return make_complete(host, host.lo + 0.5 * host.length(), Side::both, depth, ratio, 0.75);
  };
  return complete_tower(order, {0, 1}, policy);
}

// Brute force over points just past each strip threshold, with eta2 placed
// at the lower edge of each strip there. Counting is done strip by strip.
std::pair<int, int> brute_overlap(const LacunaryDecomposition& d) {
  std::set<double> thresholds;
  std::vector<double> centers;
  for (const auto& r : d.rank_intervals()) {
    thresholds.insert(1.0 / (r.hi - r.lo));
    if (r.rank < d.order()) centers.push_back(*r.pole);
    else centers.insert(centers.end(), {r.lo, r.hi});
  }
  int low = 0, top = 0;
  for (double m : thresholds) {
    const double X = m * (1 + 1e-12);
    for (double c : centers) {
      const auto [a, b] = overlap_count(d, {X, c * X - 5 + 1e-9});
      low = std::max(low, a);
      top = std::max(top, b);
    }
  }
  return {low, top};
}

std::complex<double> inner(const ComplexField& a, const ComplexField& b) {
  std::complex<double> s = 0;
  for (std::size_t q = 0; q < a.values.size(); ++q) s += a.values[q] * std::conj(b.values[q]);
  return s;
}

double field_diff(const ComplexField& a, const ComplexField& b) {
  double m = 0;
  for (std::size_t q = 0; q < a.values.size(); ++q) m = std::max(m, std::abs(a.values[q] - b.values[q]));
  return m;
}

}  // namespace

TEST_CASE("strip membership") {
  const Strip s = make_strip(0, 1, 0.5);
  CHECK(strip_contains(s, {2, 1}));
  CHECK_FALSE(strip_contains(s, {0.5, 0.25}));
  CHECK_FALSE(strip_contains(s, {1, 0.5}));  // threshold is strict
  const Strip t = make_strip(0, 0.1, 0.05);
  CHECK(t.min_x1 == doctest::Approx(10));
  CHECK_FALSE(strip_contains(t, {20, 6.1}));
  CHECK(strip_contains(t, {20, 5.9}));
  // every point of the center line past the threshold is inside
  for (double x : {10.5, 40.0, 1e4}) CHECK(strip_contains(t, {x, 0.05 * x}));
  CHECK_THROWS_AS(make_strip(0.2, 0.4, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(make_strip(0.4, 0.4, 0.4), std::invalid_argument);
}

TEST_CASE("sector membership") {
  const Sector s{0.2, 0.6};
  CHECK(sector_contains(s, {1, 0.4}));
  CHECK(sector_contains(s, {10, 6}));
  CHECK_FALSE(sector_contains(s, {1, 0.7}));
  CHECK_FALSE(sector_contains(s, {-1, -0.4}));
}

TEST_CASE("frame mapping") {
  const auto p = lattice_to_frame(3, 2);
  CHECK(p.first == 2);
  CHECK(p.second == -3);
}

TEST_CASE("overlap of small decompositions") {
  SUBCASE("order 1 has no low strips") {
    auto d = build_decomposition({{0, 1}}, 0.5);
    const auto rep = max_overlap(d);
    CHECK(rep.n_low == 0);
    CHECK(rep.n_top == 2);
  }
  SUBCASE("order 2 with one ranked interval") {
    auto d = build_decomposition({{0, 1}, {0, 0.5, 1}}, 0.5);
    const auto rep = max_overlap(d);
    CHECK(rep.n_low == 1);
    CHECK(rep.n_top == 4);
    CHECK(overlap_count(d, rep.argmax_low).first == 1);
    CHECK(overlap_count(d, rep.argmax_top).second == 4);
  }
  SUBCASE("eta1 must be positive") {
    auto d = build_decomposition({{0, 1}}, 0.5);
    CHECK_THROWS_AS(overlap_count(d, {0, 0}), std::invalid_argument);
  }
}

TEST_CASE("max_overlap is attained and agrees with a brute-force search") {
  for (auto [order, depth, ratio] : {std::tuple{2, 2, 0.375}, {3, 1, 0.25}, {3, 2, 0.45}, {4, 1, 0.3}}) {
    const auto d = tower(order, depth, ratio);
    const auto rep = max_overlap(d);
    const auto [bl, bt] = brute_overlap(d);
    CHECK(rep.n_low == bl);
    CHECK(rep.n_top == bt);
    CHECK(overlap_count(d, rep.argmax_low).first == rep.n_low);
    CHECK(overlap_count(d, rep.argmax_top).second == rep.n_top);
  }
}

TEST_CASE("random points never exceed the maximum") {
  CounterRng rng(41);
  const auto d = tower(3, 2, 0.375);
  const auto rep = max_overlap(d);
  for (int t = 0; t < 3000; ++t) {
    const double x = std::exp(rng.uniform(0, 8));
    const auto [a, b] = overlap_count(d, {x, rng.uniform(0, 1) * x + rng.uniform(-6, 6)});
    CHECK(a <= rep.n_low);
    CHECK(b <= rep.n_top);
  }
}

TEST_CASE("multiplier identities") {
  CounterRng rng(7);
  const Grid2D f = smooth_random(rng, 32, 0.125, true);
  const Grid2D g = smooth_random(rng, 32, 0.125, true);
  const auto fc = to_complex(f), gc = to_complex(g);
  const auto S = region_of(make_strip(0.1, 0.3, 0.2));

  CHECK(field_diff(sector_multiplier(fc, [](FreqPoint) { return true; }), fc) < 1e-12);

  const auto a = sector_multiplier(fc, S);
  const auto b = sector_multiplier(fc, complement(S));
  ComplexField sum = a;
  for (std::size_t q = 0; q < sum.values.size(); ++q) sum.values[q] += b.values[q];
  CHECK(field_diff(sum, fc) < 1e-12);

  const double na = a.l2_norm(), nb = b.l2_norm(), nf = f.l2_norm();
  CHECK(na * na + nb * nb == doctest::Approx(nf * nf).epsilon(1e-12));
  CHECK(na > 0);

  CHECK(field_diff(sector_multiplier(a, S), a) < 1e-12);

  const auto lhs = inner(a, gc), rhs = inner(fc, sector_multiplier(gc, S));
  CHECK(std::abs(lhs - rhs) < 1e-10 * (1 + std::abs(lhs)));

  const auto c = sector_multiplier(f, region_of(Sector{0.0, 0.5}));
  CHECK(c.l2_norm() <= nf * (1 + 1e-12));
}

TEST_CASE("strip_energy_sum matches direct projections") {
  CounterRng rng(19);
  for (auto [order, depth] : {std::pair{2, 1}, {3, 1}, {2, 2}}) {
    const auto d = tower(order, depth, 0.375);
    const Grid2D f = smooth_random(rng, 32, 0.25, true);
    double direct = 0;
    for (const auto& r : d.rank_intervals()) {
      if (r.rank >= d.order()) continue;
      const double n = sector_multiplier(f, region_of(make_strip(r.lo, r.hi, *r.pole))).l2_norm();
      direct += n * n;
    }
    const double fast = strip_energy_sum(f, d);
    CHECK(fast == doctest::Approx(direct).epsilon(1e-10));
    CHECK(direct > 0);
  }
}

TEST_CASE("zero padding") {
  Grid2D g(3, 2, 0.5);
  g.at(2, 1) = 4;
  const Grid2D p = zero_pad(g);
  CHECK(p.width == 6);
  CHECK(p.height == 4);
  CHECK(p.at(2, 1) == 4);
  CHECK(p.l2_norm() == g.l2_norm());
  CHECK_THROWS_AS(zero_pad(g, 0), std::invalid_argument);
}

TEST_CASE("support containment for a valid chain") {
  const std::vector<Interval> chain{{0, 1}, {0.36, 0.44}};
  const auto rep = support_containment_check(chain, {0.5}, 0.4, 100);
  CHECK(rep.m == 2);
  REQUIRE(rep.bands.size() == 2);
  CHECK(rep.bands[0].width_margin == doctest::Approx(1.5));
  CHECK(rep.bands[1].width_margin == doctest::Approx(4.0));
  CHECK(rep.bands[0].lattice_margin >= rep.bands[0].width_margin - 1e-12);
  CHECK(rep.bands[0].lattice_margin == doctest::Approx(1.5));
  CHECK(rep.all_contained());
  CHECK(rep.min_margin() == doctest::Approx(1.5));

  // small R: no band at all
  CHECK(support_containment_check(chain, {0.5}, 0.4, 2).m == 0);
}

TEST_CASE("support containment can fail on the last band below the final interval") {
  const auto rep = support_containment_check({{0, 1}, {0.7, 0.9}}, {0.5}, 0.9, 9.9);
  CHECK(rep.m == 1);
  CHECK_FALSE(rep.all_contained());
  CHECK(rep.min_margin() == doctest::Approx(5 - (0.4 * 19.8 + 1)));
}

TEST_CASE("support containment rejects chains that break the hypothesis") {
  CHECK_THROWS_AS(support_containment_check({{0, 1}, {0.45, 0.55}}, {0.5}, 0.5, 10), PreconditionViolation);
  CHECK_THROWS_AS(support_containment_check({{0, 1}, {0.36, 0.44}}, {0.5}, 0.9, 10), PreconditionViolation);
  CHECK_THROWS_AS(support_containment_check({{0, 0.5}, {0.36, 0.6}}, {0.2}, 0.4, 10), PreconditionViolation);
  CHECK_THROWS_AS(support_containment_check({{0, 1}, {0.7, 0.9}}, {0.2}, 0.8, 10), PreconditionViolation);
  CHECK_THROWS_AS(support_containment_check({{0, 1}, {0.36, 0.44}}, {}, 0.4, 10), std::invalid_argument);
  try {
    support_containment_check({{0, 1}, {0.45, 0.55}}, {0.5}, 0.5, 10);
  } catch (const PreconditionViolation& e) {
    CHECK(std::string(e.what()).find("k=1") != std::string::npos);
  }
}

TEST_CASE("lemma3 ratio") {
  CounterRng rng(3);
  const Grid2D f = smooth_random(rng, 64, 0.125, false);
  const auto cfg = OperatorConfig::dyadic(0.125, 4.0);
  const auto same = lemma3_ratio(f, 0.3, 0.3, 4.0, 0.25, cfg, 5e-3);
  CHECK(std::isfinite(same.value));
  CHECK(same.value > 0);
  CHECK(same.i >= 0);
  const auto apart = lemma3_ratio(f, 0.3, -0.5, 4.0, 0.25, cfg, 5e-3);
  CHECK(std::isfinite(apart.value));

  const Grid2D zero(64, 64, 0.125);
  CHECK(lemma3_ratio(zero, 0.3, 0.3, 4.0, 0.25, cfg, 5e-3).value == 0);
}

TEST_CASE("lemma5 domination with a single interval") {
  CounterRng rng(5);
  const Grid2D f = smooth_random(rng, 64, 0.125, true);
  const auto cfg = OperatorConfig::dyadic(0.125, 4.0);
  const auto rep = lemma5_domination(f, {{0.2, 0.6}}, {}, 0.4, 2.0, cfg, 2e-2);
  CHECK(std::isfinite(rep.value));
  CHECK(rep.value > 0);
  CHECK_THROWS_AS(lemma5_domination(f, {{0.2, 0.6}}, {}, 0.7, 2.0, cfg), PreconditionViolation);
}
