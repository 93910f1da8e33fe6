#include "dirmax/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "dirmax/rng.hpp"

namespace dirmax {

TestKind parse_test_kind(const std::string& name) {
  if (name == "disk") return TestKind::disk;
  if (name == "annulus") return TestKind::annulus;
  if (name == "needles" || name == "needle_bundle") return TestKind::needle_bundle;
  if (name == "random" || name == "random_bumps") return TestKind::random_bumps;
  if (name == "hot_pixel" || name == "pixel") return TestKind::hot_pixel;
  throw std::invalid_argument("unknown test function kind: " + name);
}

std::string to_string(TestKind kind) {
  switch (kind) {
    case TestKind::disk: return "disk";
    case TestKind::annulus: return "annulus";
    case TestKind::needle_bundle: return "needles";
    case TestKind::random_bumps: return "random";
    case TestKind::hot_pixel: return "hot_pixel";
  }
  return "?";
}

std::string TestFunctionSpec::label() const {
  char buf[160];
  switch (kind) {
    case TestKind::disk: std::snprintf(buf, sizeof buf, "disk(r=%g)", radius); break;
    case TestKind::annulus: std::snprintf(buf, sizeof buf, "annulus(r=%g,%g)", inner, radius); break;
    case TestKind::needle_bundle:
      std::snprintf(buf, sizeof buf, "needles(n=%d,len=%g,ecc=%g)",
                    slopes.empty() ? count : static_cast<int>(slopes.size()), 2 * radius, eccentricity);
      break;
    case TestKind::random_bumps:
      std::snprintf(buf, sizeof buf, "random(n=%d,w=%g,seed=%llu)", count, radius,
                    static_cast<unsigned long long>(seed));
      break;
    case TestKind::hot_pixel: std::snprintf(buf, sizeof buf, "hot_pixel"); break;
  }
  std::string s = buf;
  if (center) {
    std::snprintf(buf, sizeof buf, "@(%g,%g)", center->first, center->second);
    s += buf;
  }
  return s;
}

Grid2D generate(const TestFunctionSpec& spec, int width, int height, double spacing) {
  if (width <= 0 || height <= 0 || !(spacing > 0)) throw std::invalid_argument("generate: bad grid shape");
  if (!(spec.radius >= 0) || !std::isfinite(spec.radius)) throw std::invalid_argument("generate: bad radius");
  Grid2D g(width, height, spacing);
  const auto [cx, cy] = spec.center.value_or(
      std::pair{0.5 * (width - 1) * spacing, 0.5 * (height - 1) * spacing});
  const double R = spec.radius;

  switch (spec.kind) {
    case TestKind::disk:
    case TestKind::annulus: {
      const double r_in = spec.kind == TestKind::annulus ? spec.inner : -1.0;
      if (spec.kind == TestKind::annulus && !(0 <= r_in && r_in < R))
        throw std::invalid_argument("generate: annulus needs 0 <= inner < radius");
      for (int j = 0; j < height; ++j)
        for (int i = 0; i < width; ++i) {
          const double d = std::hypot(g.x1(i) - cx, g.x2(j) - cy);
          if (d <= R && d >= r_in) g.at(i, j) = 1.0;
        }
      break;
    }
    case TestKind::needle_bundle: {
      if (!(spec.eccentricity >= 1)) throw std::invalid_argument("generate: eccentricity must be >= 1");
      std::vector<double> angles;
      if (spec.slopes.empty()) {
        if (spec.count < 1) throw std::invalid_argument("generate: needle count must be positive");
        for (int k = 0; k < spec.count; ++k) angles.push_back(std::numbers::pi * k / spec.count);
      } else {
        for (double a : spec.slopes) angles.push_back(std::atan(a));
      }
      const double half_w = std::max(R / spec.eccentricity, 0.5 * spacing);
      for (double th : angles) {
        const double c = std::cos(th), s = std::sin(th);
        for (int j = 0; j < height; ++j)
          for (int i = 0; i < width; ++i) {
            const double dx = g.x1(i) - cx, dy = g.x2(j) - cy;
            if (std::abs(dx * c + dy * s) <= R && std::abs(-dx * s + dy * c) <= half_w) g.at(i, j) = 1.0;
          }
      }
      break;
    }
    case TestKind::random_bumps: {
      if (spec.count < 1) throw std::invalid_argument("generate: bump count must be positive");
      CounterRng rng(spec.seed);
      const double W = (width - 1) * spacing, H = (height - 1) * spacing;
      for (int b = 0; b < spec.count; ++b) {
        const double bx = rng.uniform(0.25, 0.75) * W, by = rng.uniform(0.25, 0.75) * H;
        const double sig = R * rng.uniform(0.2, 1.0), amp = rng.uniform(0.2, 1.0);
        if (!(sig > 0)) continue;
        for (int j = 0; j < height; ++j)
          for (int i = 0; i < width; ++i) {
            const double dx = g.x1(i) - bx, dy = g.x2(j) - by;
            g.at(i, j) += amp * std::exp(-(dx * dx + dy * dy) / (2 * sig * sig));
          }
      }
      break;
    }
    case TestKind::hot_pixel: {
      const int i = static_cast<int>(std::lround(cx / spacing)), j = static_cast<int>(std::lround(cy / spacing));
      if (i < 0 || i >= width || j < 0 || j >= height) throw std::invalid_argument("generate: pixel off the grid");
      g.at(i, j) = 1.0;
      break;
    }
  }
  if (!(g.l2_norm() > 0)) throw std::invalid_argument("generate: " + spec.label() + " has zero norm on this grid");
  return g;
}

TestFamily make_family(std::vector<TestFunctionSpec> specs, int width, int height, double spacing) {
  TestFamily fam;
  for (auto& s : specs) fam.grids.push_back(generate(s, width, height, spacing));
  fam.specs = std::move(specs);
  return fam;
}

OperatorKind parse_operator(const std::string& name) {
  if (name == "m0") return OperatorKind::m0;
  if (name == "m1") return OperatorKind::m1;
  if (name == "m2") return OperatorKind::m2;
  throw std::invalid_argument("unknown operator: " + name);
}

std::string to_string(OperatorKind op) {
  switch (op) {
    case OperatorKind::m0: return "m0";
    case OperatorKind::m1: return "m1";
    case OperatorKind::m2: return "m2";
  }
  return "?";
}

Grid2D apply_operator(OperatorKind op, const Grid2D& f, const DirectionSet& omega, const OperatorConfig& cfg) {
  switch (op) {
    case OperatorKind::m0: return m0(f, omega, cfg.threads);
    case OperatorKind::m1: return m1(f, omega, cfg);
    case OperatorKind::m2: return m2(f, omega, cfg);
  }
  throw std::invalid_argument("apply_operator: bad operator");
}

namespace {

void record(RatioResult& r, double norm_out, const Grid2D& out, double norm_in, int idx) {
  const double q = norm_out / norm_in;
  // A norm never exceeds sup |g| times the square root of the area.
  const double area = out.width * out.height * out.spacing * out.spacing;
  if (norm_out > out.max_abs() * std::sqrt(area) * (1 + 1e-12))
    throw std::logic_error("measure_ratio: norm exceeds its sup bound");
  if (r.argmax < 0 || q > r.ratio) {
    r.ratio = q;
    r.argmax = idx;
  }
}

}  // namespace

RatioResult measure_ratio(const DirectionSet& omega, const TestFamily& family, OperatorKind op,
                          const OperatorConfig& cfg) {
  if (family.grids.empty()) throw std::invalid_argument("measure_ratio: empty family");
  RatioResult res;
  for (std::size_t k = 0; k < family.grids.size(); ++k) {
    const Grid2D& f = family.grids[k];
    const double n = f.l2_norm();
    if (!(n > 0)) {
      ++res.skipped;
      continue;
    }
    const Grid2D out = apply_operator(op, f, omega, cfg);
    record(res, out.l2_norm(), out, n, static_cast<int>(k));
  }
  return res;
}

double SweepRow::ref_sqrt_log() const { return label > 0 ? std::sqrt(std::log2(label)) : 0.0; }
double SweepRow::ref_log() const { return label > 0 ? std::log2(label) : 0.0; }
double SweepRow::ref_sqrt_mu() const { return std::sqrt(static_cast<double>(label)); }
double SweepRow::ref_mu() const { return label; }

namespace {

struct Accumulator {
  Grid2D acc;
  std::vector<double> done;  // sorted angles already folded in
};

void reset(Accumulator& a, OperatorKind op, const Grid2D& f) {
  a.acc = op == OperatorKind::m0 ? f.like() : abs(f);
  a.done.clear();
}

void fold(Accumulator& a, OperatorKind op, const Grid2D& f, double s, const OperatorConfig& cfg) {
  switch (op) {
    case OperatorKind::m0: {
      const double one[] = {s};
      a.acc = pointwise_max(a.acc, m0(f, DirectionSet::from_angles(one), cfg.threads));
      break;
    }
    case OperatorKind::m1: m1_accumulate(a.acc, f, s, cfg); break;
    case OperatorKind::m2: m2_accumulate(a.acc, f, s, cfg); break;
  }
}

SweepResult run_sweep(SweepMode mode, const std::vector<int>& labels, const std::vector<DirectionSet>& sets,
                      const TestFamily& family, const std::vector<OperatorKind>& ops, const OperatorConfig& cfg) {
  if (family.grids.empty()) throw std::invalid_argument("sweep: empty family");
  cfg.validate();
  SweepResult res{mode, {}};
  std::vector<std::vector<Accumulator>> state(ops.size(), std::vector<Accumulator>(family.grids.size()));
  for (std::size_t o = 0; o < ops.size(); ++o)
    for (std::size_t k = 0; k < family.grids.size(); ++k) reset(state[o][k], ops[o], family.grids[k]);

  for (std::size_t li = 0; li < labels.size(); ++li) {
    std::vector<double> angles = sets[li].angles();
    std::sort(angles.begin(), angles.end());
    for (std::size_t o = 0; o < ops.size(); ++o) {
      const auto t0 = std::chrono::steady_clock::now();
      RatioResult best;
      for (std::size_t k = 0; k < family.grids.size(); ++k) {
        const Grid2D& f = family.grids[k];
        Accumulator& a = state[o][k];
        if (!std::includes(angles.begin(), angles.end(), a.done.begin(), a.done.end())) reset(a, ops[o], f);
        std::vector<double> fresh;
        std::set_difference(angles.begin(), angles.end(), a.done.begin(), a.done.end(), std::back_inserter(fresh));
        for (double s : fresh) fold(a, ops[o], f, s, cfg);
        a.done = angles;
        record(best, a.acc.l2_norm(), a.acc, f.l2_norm(), static_cast<int>(k));
      }
      const auto t1 = std::chrono::steady_clock::now();
      SweepRow row;
      row.label = labels[li];
      row.op = ops[o];
      row.max_ratio = best.ratio;
      row.argmax = family.specs.size() == family.grids.size() ? family.specs[best.argmax].label()
                                                              : std::to_string(best.argmax);
      row.directions = angles.size();
      row.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      res.rows.push_back(row);
    }
  }
  return res;
}

}  // namespace

SweepResult sweep_N(const std::vector<int>& Ns, const TestFamily& family, const std::vector<OperatorKind>& ops,
                    const OperatorConfig& cfg) {
  std::vector<DirectionSet> sets;
  for (int N : Ns) {
    if (N < 1) throw std::invalid_argument("sweep_N: N must be positive");
    std::vector<double> slopes(N);
    for (int i = 0; i < N; ++i) slopes[i] = static_cast<double>(i) / N;
    sets.push_back(DirectionSet::from_slopes(slopes));
  }
  return run_sweep(SweepMode::N, Ns, sets, family, ops, cfg);
}

LacunaryDecomposition lacunary_tower(int mu, const TowerShape& shape) {
  if (mu < 1) throw std::invalid_argument("lacunary_tower: mu must be positive");
  auto policy = [shape](const Interval& host, int) {
    return make_complete(host, host.lo + 0.5 * host.length(), Side::both, shape.depth, shape.ratio,
                         shape.first_fraction);
  };
  return complete_tower(mu, {0, 1}, policy);
}

SweepResult sweep_mu(const std::vector<int>& mus, const TestFamily& family, const std::vector<OperatorKind>& ops,
                     const OperatorConfig& cfg, const TowerShape& shape) {
  if (mus.empty()) return {SweepMode::mu, {}};
  const int top = *std::max_element(mus.begin(), mus.end());
  if (*std::min_element(mus.begin(), mus.end()) < 1) throw std::invalid_argument("sweep_mu: mu must be positive");
  // The stages of the deepest tower are the towers of every smaller order.
  const auto tower = lacunary_tower(top, shape);
  std::vector<DirectionSet> sets;
  for (int mu : mus) sets.push_back(DirectionSet::from_slopes(tower.chain()[mu - 1]));
  return run_sweep(SweepMode::mu, mus, sets, family, ops, cfg);
}

GrowthFit fit_growth(const SweepResult& result, GrowthModel model, OperatorKind op) {
  double smm = 0, srm = 0;
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : result.rows) {
    if (r.op != op) continue;
    double m = 0;
    switch (model) {
      case GrowthModel::sqrt_log: m = r.ref_sqrt_log(); break;
      case GrowthModel::log: m = r.ref_log(); break;
      case GrowthModel::sqrt_mu: m = r.ref_sqrt_mu(); break;
      case GrowthModel::mu: m = r.ref_mu(); break;
    }
    pts.emplace_back(r.max_ratio, m);
    smm += m * m;
    srm += r.max_ratio * m;
  }
  if (pts.size() < 3) throw std::invalid_argument("fit_growth: need at least 3 rows");
  if (!(smm > 0) || !std::isfinite(smm)) throw std::invalid_argument("fit_growth: degenerate model values");
  GrowthFit fit;
  fit.coefficient = srm / smm;
  double ss = 0;
  for (auto [r, m] : pts) ss += (r - fit.coefficient * m) * (r - fit.coefficient * m);
  fit.residual = std::sqrt(ss / pts.size());
  return fit;
}

std::string sweep_csv(const SweepResult& result, bool timing) {
  std::string out = "label,operator,max_ratio,ref_sqrt_log,ref_log,ref_sqrt_mu,ref_mu,runtime_ms\n";
  char buf[256];
  for (const auto& r : result.rows) {
    std::snprintf(buf, sizeof buf, "%d,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.3f\n", r.label, to_string(r.op).c_str(),
                  r.max_ratio, r.ref_sqrt_log(), r.ref_log(), r.ref_sqrt_mu(), r.ref_mu(),
                  timing ? r.runtime_ms : 0.0);
    out += buf;
  }
  return out;
}

}  // namespace dirmax
