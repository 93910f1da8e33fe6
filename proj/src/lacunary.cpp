#include "dirmax/lacunary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "dirmax/error.hpp"

namespace dirmax {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double wrap_unit(double s) {
  double w = s - std::floor(s);
  return w >= 1.0 ? 0.0 : w;
}

void require_finite(std::span<const double> xs, const char* what) {
  for (double x : xs)
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite value");
}

void require_gap(double gap) {
  if (!std::isfinite(gap) || !(gap > 0.0 && gap < 1.0))
    throw std::invalid_argument("gap must lie in (0,1)");
}

// Open set of poles p with |b - p| < gap |a - p|, where a precedes b.
Interval pair_constraint(double a, double b, double gap) {
  const double e1 = (b - gap * a) / (1.0 - gap);
  const double e2 = (b + gap * a) / (1.0 + gap);
  return {std::min(e1, e2), std::max(e1, e2)};
}

std::optional<Interval> intersect(Interval a, Interval b) {
  Interval r{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
  if (!(r.lo < r.hi)) return std::nullopt;
  return r;
}

double midpoint(Interval iv) {
  if (std::isinf(iv.lo) && std::isinf(iv.hi)) return 0.0;
  if (std::isinf(iv.lo)) return iv.hi - 1.0;
  if (std::isinf(iv.hi)) return iv.lo + 1.0;
  return iv.lo + 0.5 * (iv.hi - iv.lo);
}

std::string describe(const Interval& iv) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << iv.lo << ", " << iv.hi << ")";
  return os.str();
}

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

double slope_to_angle(double alpha) { return wrap_unit(std::atan(alpha) / (2.0 * std::numbers::pi)); }

double angle_to_slope(double s) { return std::tan(2.0 * std::numbers::pi * s); }

DirectionSet DirectionSet::from_angles(std::span<const double> angles) {
  require_finite(angles, "direction angles");
  DirectionSet d;
  d.angles_.reserve(angles.size());
  for (double s : angles) d.angles_.push_back(wrap_unit(s));
  d.angles_ = sorted_unique(std::move(d.angles_));
  return d;
}

DirectionSet DirectionSet::from_slopes(std::span<const double> slopes) {
  require_finite(slopes, "direction slopes");
  std::vector<double> a;
  a.reserve(slopes.size());
  for (double alpha : slopes) a.push_back(slope_to_angle(alpha));
  return from_angles(a);
}

bool DirectionSet::equivalent(const DirectionSet& other, double tol) const {
  auto canon = [](const std::vector<double>& in) {
    std::vector<double> out;
    for (double s : in) {
      double c = std::fmod(s, 0.5);
      out.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  auto a = canon(angles_), b = canon(other.angles_);
  auto close = [tol](double x, double y) {
    double d = std::abs(x - y);
    return std::min(d, 0.5 - d) <= tol;
  };
  // Dedupe within tolerance, wrapping at 1/2.
  auto dedupe = [&](std::vector<double>& v) {
    std::vector<double> r;
    for (double x : v)
      if (r.empty() || !close(r.back(), x)) r.push_back(x);
    if (r.size() > 1 && close(r.front(), r.back())) r.pop_back();
    v = std::move(r);
  };
  dedupe(a);
  dedupe(b);
  if (a.size() != b.size()) return false;
  for (double x : a) {
    bool found = std::any_of(b.begin(), b.end(), [&](double y) { return close(x, y); });
    if (!found) return false;
  }
  return true;
}

DirectionSet perpendicular(const DirectionSet& set) {
  std::vector<double> out;
  out.reserve(set.size());
  for (double s : set.angles()) out.push_back(s + 0.25);
  return DirectionSet::from_angles(out);
}

bool check_lacunary(std::span<const double> points, double pole, double gap) {
  require_gap(gap);
  if (points.empty()) throw std::invalid_argument("check_lacunary: empty sequence");
  require_finite(points, "check_lacunary");
  if (!std::isfinite(pole)) throw std::invalid_argument("check_lacunary: non-finite pole");
  for (double v : points)
    if (v == pole) return false;
  for (std::size_t i = 0; i + 1 < points.size(); ++i)
    if (!(std::abs(points[i + 1] - pole) < gap * std::abs(points[i] - pole))) return false;
  return true;
}

std::optional<Interval> feasible_pole_interval(std::span<const double> points, double gap) {
  require_gap(gap);
  require_finite(points, "feasible_pole_interval");
  std::optional<Interval> acc = Interval{-kInf, kInf};
  for (std::size_t i = 0; i + 1 < points.size() && acc; ++i)
    acc = intersect(*acc, pair_constraint(points[i], points[i + 1], gap));
  return acc;
}

std::optional<double> infer_pole(std::span<const double> points, double gap,
                                 std::optional<Interval> domain) {
  require_gap(gap);
  if (points.empty()) throw std::invalid_argument("infer_pole: empty sequence");
  require_finite(points, "infer_pole");
  bool decreasing = true;
  if (points.size() >= 2) {
    decreasing = points[1] < points[0];
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
      bool ok = decreasing ? points[i + 1] < points[i] : points[i + 1] > points[i];
      if (!ok) throw std::invalid_argument("infer_pole: sequence is not strictly monotone");
    }
  }
  auto feasible = feasible_pole_interval(points, gap);
  if (!feasible) return std::nullopt;
  const double last = points.back();
  Interval side = decreasing ? Interval{feasible->lo, std::min(feasible->hi, last)}
                              : Interval{std::max(feasible->lo, last), feasible->hi};
  std::optional<Interval> region = side;
  if (domain) region = intersect(side, *domain);
  if (!region || !(region->lo < region->hi)) return std::nullopt;
  double p = midpoint(*region);
  if (!check_lacunary(points, p, gap)) return std::nullopt;
  return p;
}

bool check_lacunary_set(std::span<const double> points, double pole, double gap) {
  require_gap(gap);
  require_finite(points, "check_lacunary_set");
  std::vector<double> below, above;
  for (double v : points) {
    if (v == pole) return false;
    (v < pole ? below : above).push_back(v);
  }
  std::sort(below.begin(), below.end());
  std::sort(above.begin(), above.end(), std::greater<>());
  if (!below.empty() && !check_lacunary(below, pole, gap)) return false;
  if (!above.empty() && !check_lacunary(above, pole, gap)) return false;
  return true;
}

std::optional<double> infer_set_pole(std::span<const double> points, double gap, Interval host) {
  require_gap(gap);
  if (points.empty()) throw std::invalid_argument("infer_set_pole: empty set");
  std::vector<double> asc(points.begin(), points.end());
  asc = sorted_unique(std::move(asc));
  std::vector<double> desc(asc.rbegin(), asc.rend());

  auto try_region = [&](std::optional<Interval> region) -> std::optional<double> {
    if (!region) return std::nullopt;
    auto r = intersect(*region, host);
    if (!r) return std::nullopt;
    double p = midpoint(*r);
    if (!host.contains_open(p) || !check_lacunary_set(asc, p, gap)) return std::nullopt;
    return p;
  };

  // One-sided from above, then from below.
  if (auto f = feasible_pole_interval(desc, gap))
    if (auto p = try_region(intersect(*f, Interval{-kInf, asc.front()}))) return p;
  if (auto f = feasible_pole_interval(asc, gap))
    if (auto p = try_region(intersect(*f, Interval{asc.back(), kInf}))) return p;

  // Two-sided: pole between asc[j-1] and asc[j].
  const std::size_t n = asc.size();
  for (std::size_t j = 1; j < n; ++j) {
    std::span<const double> left(asc.data(), j);
    std::span<const double> right(desc.data(), n - j);
    auto fl = feasible_pole_interval(left, gap);
    auto fr = feasible_pole_interval(right, gap);
    if (!fl || !fr) continue;
    auto f = intersect(*fl, *fr);
    if (!f) continue;
    if (auto p = try_region(intersect(*f, Interval{asc[j - 1], asc[j]}))) return p;
  }
  return std::nullopt;
}

std::vector<Interval> adjacent_intervals(std::span<const double> set, Interval domain) {
  std::vector<Interval> out;
  double left = domain.lo;
  for (double x : set) {
    if (x > left) out.push_back({left, x});
    left = std::max(left, x);
  }
  if (domain.hi > left) out.push_back({left, domain.hi});
  return out;
}

LacunaryDecomposition build_decomposition(std::vector<std::vector<double>> chain, double gap,
                                          std::optional<Interval> domain,
                                          std::span<const PoleHint> hints) {
  require_gap(gap);
  if (chain.empty()) throw std::invalid_argument("build_decomposition: empty chain");
  for (auto& level : chain) {
    require_finite(level, "build_decomposition");
    level = sorted_unique(std::move(level));
    if (level.empty()) throw std::invalid_argument("build_decomposition: empty level");
  }
  for (std::size_t k = 0; k + 1 < chain.size(); ++k)
    if (!std::includes(chain[k + 1].begin(), chain[k + 1].end(), chain[k].begin(), chain[k].end()))
      throw std::invalid_argument("build_decomposition: chain is not nested at rank " +
                                  std::to_string(k + 1));

  const auto& last = chain.back();
  Interval dom = domain.value_or(Interval{last.front(), last.back()});
  if (!(dom.lo <= dom.hi)) throw std::invalid_argument("build_decomposition: empty domain");
  for (double x : last)
    if (!dom.contains_closed(x))
      throw std::invalid_argument("build_decomposition: point outside the domain");

  auto hint_for = [&](int step, const Interval& host) -> std::optional<double> {
    for (const auto& h : hints)
      if (h.step == step && h.host == host) return h.pole;
    return std::nullopt;
  };

  auto resolve_pole = [&](int step, const Interval& host,
                          const std::vector<double>& pts) -> double {
    if (auto h = hint_for(step, host)) {
      if (!host.contains_closed(*h) || !check_lacunary_set(pts, *h, gap))
        throw ValidationError("rank " + std::to_string(step) + " group in " + describe(host) +
                              " is not lacunary about the supplied pole");
      return *h;
    }
    // A degenerate host (single-point domain) carries no open interior.
    if (!(host.lo < host.hi)) return pts.front() - 1.0;
    auto p = infer_set_pole(pts, gap, host);
    if (!p)
      throw ValidationError("rank " + std::to_string(step) + " group in " + describe(host) +
                            " admits no pole with gap " + std::to_string(gap));
    return *p;
  };

  LacunaryDecomposition d;
  d.gap_ = gap;
  d.domain_ = dom;

  d.groups_.push_back({1, dom, chain[0], resolve_pole(1, dom, chain[0])});

  for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
    const auto& cur = chain[k];
    auto intervals = adjacent_intervals(cur, dom);
    std::vector<std::vector<double>> members(intervals.size());
    for (double x : chain[k + 1]) {
      if (std::binary_search(cur.begin(), cur.end(), x)) continue;
      auto it = std::upper_bound(intervals.begin(), intervals.end(), x,
                                 [](double v, const Interval& iv) { return v < iv.hi; });
      if (it == intervals.end() || !it->contains_open(x))
        throw std::invalid_argument("build_decomposition: added point lies on no adjacent interval");
      members[static_cast<std::size_t>(it - intervals.begin())].push_back(x);
    }
    const int step = static_cast<int>(k) + 2;
    for (std::size_t i = 0; i < intervals.size(); ++i) {
      if (members[i].empty()) continue;
      d.groups_.push_back({step, intervals[i], members[i], resolve_pole(step, intervals[i], members[i])});
    }
  }

  // Rank-k intervals are the adjacent intervals of chain[k-1]. The pole of J
  // is that of the earliest later group hosted by J.
  std::map<std::pair<double, double>, std::vector<std::pair<int, double>>> hosted;
  for (const auto& g : d.groups_)
    if (g.step >= 2) hosted[{g.host.lo, g.host.hi}].push_back({g.step, g.pole});
  const int mu = static_cast<int>(chain.size());
  for (int k = 1; k <= mu; ++k) {
    for (const auto& iv : adjacent_intervals(chain[static_cast<std::size_t>(k - 1)], dom)) {
      RankInterval ri{iv.lo, iv.hi, k, std::nullopt};
      if (k < mu) {
        auto it = hosted.find({iv.lo, iv.hi});
        if (it != hosted.end()) {
          int best = mu + 1;
          for (auto [step, pole] : it->second)
            if (step > k && step < best) {
              best = step;
              ri.pole = pole;
            }
        }
      }
      d.rank_intervals_.push_back(ri);
    }
  }
  d.chain_ = std::move(chain);
  return d;
}

LacunaryDecomposition binary_decomposition(std::span<const double> points) {
  require_finite(points, "binary_decomposition");
  auto pts = sorted_unique(std::vector<double>(points.begin(), points.end()));
  if (pts.empty()) throw std::invalid_argument("binary_decomposition: empty set");
  if (pts.size() == 1) return build_decomposition({pts}, 0.5);

  const std::size_t n = pts.size();
  std::vector<char> chosen(n, 0);
  chosen[0] = chosen[n - 1] = 1;
  std::vector<std::vector<double>> chain;
  auto snapshot = [&] {
    std::vector<double> level;
    for (std::size_t i = 0; i < n; ++i)
      if (chosen[i]) level.push_back(pts[i]);
    chain.push_back(std::move(level));
  };
  snapshot();
  // Index ranges (lo, hi) between consecutive chosen points with interior.
  std::vector<std::pair<std::size_t, std::size_t>> open{{0, n - 1}};
  while (true) {
    std::vector<std::pair<std::size_t, std::size_t>> next;
    bool added = false;
    for (auto [lo, hi] : open) {
      if (hi - lo < 2) continue;
      const std::size_t interior = hi - lo - 1;
      const std::size_t mid = lo + 1 + (interior - 1) / 2;  // lower median
      chosen[mid] = 1;
      added = true;
      next.push_back({lo, mid});
      next.push_back({mid, hi});
    }
    if (!added) break;
    snapshot();
    open = std::move(next);
  }
  return build_decomposition(std::move(chain), 0.5);
}

std::vector<double> CompleteLacunarySpec::points() const {
  std::vector<double> all(increasing.begin(), increasing.end());
  all.insert(all.end(), decreasing.begin(), decreasing.end());
  std::sort(all.begin(), all.end());
  return all;
}

namespace {

// Distances to the pole along one side, checked against the complete-set
// conditions. `reach` is the distance from the pole to the interval endpoint
// on that side.
bool complete_side_ok(const std::vector<double>& dist, double reach) {
  if (dist.empty()) return true;
  if (!(dist.front() >= 0.5 * reach) || !(dist.front() < reach)) return false;
  for (std::size_t i = 0; i + 1 < dist.size(); ++i) {
    const double next = dist[i + 1], cur = dist[i];
    if (!(0.25 * cur <= next) || !(next < 0.5 * cur)) return false;
  }
  return true;
}

// Distances strictly between `far` and `near` (exclusive) bridging the two
// with every consecutive ratio in [1/4, 1/2). Requires near/far < 1/2.
std::vector<double> bridge(double far, double near) {
  const double x = far / near;  // > 2
  if (near >= 0.25 * far) return {};
  // Smallest step count whose geometric ratio stays clear of 1/4; then
  // 2^steps < x holds automatically, keeping the ratio below 1/2.
  int steps = 2;
  while (std::pow(4.0, steps) < x * (1.0 + 1e-12)) ++steps;
  std::vector<double> out;
  const double lf = std::log(far), ln = std::log(near);
  for (int j = 1; j < steps; ++j)
    out.push_back(std::exp(lf + (ln - lf) * static_cast<double>(j) / steps));
  return out;
}

std::vector<double> complete_distances(std::vector<double> dist, double reach) {
  // dist strictly decreasing, all consecutive ratios < 1/2.
  std::vector<double> out;
  double head = dist.front();
  if (head < 0.5 * reach) {
    const double first = 0.5 * (std::max(0.5 * reach, 2.0 * head) + reach);
    out.push_back(first);
    auto mid = bridge(first, head);
    out.insert(out.end(), mid.begin(), mid.end());
  }
  for (std::size_t i = 0; i < dist.size(); ++i) {
    out.push_back(dist[i]);
    if (i + 1 < dist.size()) {
      auto mid = bridge(dist[i], dist[i + 1]);
      out.insert(out.end(), mid.begin(), mid.end());
    }
  }
  return out;
}

}  // namespace

bool satisfies_complete(const CompleteLacunarySpec& spec) {
  const double p = spec.pole;
  std::vector<double> up, down;
  for (double v : spec.decreasing) up.push_back(v - p);
  for (double v : spec.increasing) down.push_back(p - v);
  if (spec.sides == Side::decreasing && !spec.increasing.empty()) return false;
  if (spec.sides == Side::increasing && !spec.decreasing.empty()) return false;
  for (std::size_t i = 0; i + 1 < up.size(); ++i)
    if (!(up[i + 1] < up[i])) return false;
  for (std::size_t i = 0; i + 1 < down.size(); ++i)
    if (!(down[i + 1] < down[i])) return false;
  for (double d : up)
    if (!(d > 0)) return false;
  for (double d : down)
    if (!(d > 0)) return false;
  return complete_side_ok(up, spec.interval.hi - p) && complete_side_ok(down, p - spec.interval.lo);
}

CompleteLacunarySpec complete_one_sided(const LacunarySequence& seq, Interval interval) {
  if (seq.points.empty()) throw std::invalid_argument("complete_one_sided: empty sequence");
  if (!(seq.gap <= 0.5))
    throw PreconditionViolation(
        "complete_one_sided: gap must be at most 1/2; split the sequence into "
        "completion_factor(gap) interleaved subsequences first");
  if (!interval.contains_closed(seq.pole))
    throw std::invalid_argument("complete_one_sided: pole outside the interval");
  for (double v : seq.points)
    if (!interval.contains_open(v))
      throw std::invalid_argument("complete_one_sided: point outside the interval");
  if (!check_lacunary(seq.points, seq.pole, seq.gap))
    throw PreconditionViolation("complete_one_sided: input is not lacunary with its gap");

  const bool above = seq.points.front() > seq.pole;
  for (double v : seq.points)
    if ((v > seq.pole) != above)
      throw std::invalid_argument("complete_one_sided: points on both sides of the pole");

  std::vector<double> dist;
  for (double v : seq.points) dist.push_back(std::abs(v - seq.pole));
  const double reach = above ? interval.hi - seq.pole : seq.pole - interval.lo;
  auto full = complete_distances(dist, reach);

  CompleteLacunarySpec out;
  out.interval = interval;
  out.pole = seq.pole;
  out.sides = above ? Side::decreasing : Side::increasing;
  auto& target = above ? out.decreasing : out.increasing;
  for (double d : full) target.push_back(above ? seq.pole + d : seq.pole - d);
  // Originals are kept bit-exact.
  for (std::size_t i = 0, j = 0; i < full.size() && j < seq.points.size(); ++i)
    if (full[i] == dist[j]) target[i] = seq.points[j++];
  if (!satisfies_complete(out))
    throw std::logic_error("complete_one_sided: completion violates the complete-set conditions");
  return out;
}

int completion_factor(double gap) {
  require_gap(gap);
  if (gap <= 0.5) return 1;
  return static_cast<int>(std::ceil(1.0 / std::log2(1.0 / gap) - 1e-12));
}

namespace {

// Splits every group's sides into n interleaved subsequences added in n
// consecutive sub-steps.
std::vector<std::vector<double>> refine_chain(const LacunaryDecomposition& d, int n) {
  std::vector<std::vector<double>> chain;
  std::vector<double> cur;
  const int mu = d.order();
  for (int k = 1; k <= mu; ++k) {
    std::vector<std::vector<double>> sub(static_cast<std::size_t>(n));
    for (const auto& g : d.groups()) {
      if (g.step != k) continue;
      std::vector<double> below, above;
      for (double v : g.points) (v < g.pole ? below : above).push_back(v);
      std::sort(below.begin(), below.end());
      std::sort(above.begin(), above.end(), std::greater<>());
      for (std::size_t i = 0; i < below.size(); ++i) sub[i % n].push_back(below[i]);
      for (std::size_t i = 0; i < above.size(); ++i) sub[i % n].push_back(above[i]);
    }
    for (auto& s : sub) {
      if (s.empty()) continue;
      cur.insert(cur.end(), s.begin(), s.end());
      std::sort(cur.begin(), cur.end());
      chain.push_back(cur);
    }
  }
  return chain;
}

}  // namespace

LacunaryDecomposition complete_decomposition(const LacunaryDecomposition& decomp) {
  Interval dom = decomp.domain();
  if (!(dom.lo < dom.hi)) return decomp;
  const int n = completion_factor(decomp.gap());
  LacunaryDecomposition base =
      n == 1 ? decomp
             : build_decomposition(refine_chain(decomp, n), std::pow(decomp.gap(), n), dom);
  const double gap = std::min(base.gap(), 0.5);
  // Complete sets live in open intervals; widen the domain when first-step
  // points sit on its boundary.
  for (double v : base.groups().front().points) {
    if (!dom.contains_open(v)) {
      const double len = dom.length();
      dom = {dom.lo - len, dom.hi + len};
      break;
    }
  }

  std::vector<std::vector<double>> chain;
  std::vector<PoleHint> hints;

  auto complete_group = [&](const std::vector<double>& pts, double pole, const Interval& host,
                            std::vector<double>& sink) {
    std::vector<double> below, above;
    for (double v : pts) (v < pole ? below : above).push_back(v);
    std::sort(below.begin(), below.end());
    std::sort(above.begin(), above.end(), std::greater<>());
    if (!below.empty()) {
      auto s = complete_one_sided({below, pole, gap}, host);
      sink.insert(sink.end(), s.increasing.begin(), s.increasing.end());
    }
    if (!above.empty()) {
      auto s = complete_one_sided({above, pole, gap}, host);
      sink.insert(sink.end(), s.decreasing.begin(), s.decreasing.end());
    }
  };

  const auto& g1 = base.groups().front();
  std::vector<double> level;
  complete_group(g1.points, g1.pole, dom, level);
  std::sort(level.begin(), level.end());
  chain.push_back(level);
  hints.push_back({1, dom, g1.pole});

  for (int step = 2; step <= base.order(); ++step) {
    auto intervals = adjacent_intervals(chain.back(), dom);
    std::vector<double> added;
    for (const auto& g : base.groups()) {
      if (g.step != step) continue;
      for (const auto& iv : intervals) {
        std::vector<double> q;
        for (double v : g.points)
          if (iv.contains_open(v)) q.push_back(v);
        if (q.empty()) continue;
        double pole;
        if (iv.contains_open(g.pole) && check_lacunary_set(q, g.pole, gap)) {
          pole = g.pole;
        } else {
          auto p = infer_set_pole(q, gap, iv);
          if (!p)
            throw ValidationError("complete_decomposition: restricted group in " + describe(iv) +
                                  " admits no pole");
          pole = *p;
        }
        complete_group(q, pole, iv, added);
        hints.push_back({step, iv, pole});
      }
    }
    std::vector<double> next = chain.back();
    next.insert(next.end(), added.begin(), added.end());
    std::sort(next.begin(), next.end());
    chain.push_back(std::move(next));
  }
  // Complete groups have ratios below 1/2, not below the input gap.
  return build_decomposition(std::move(chain), 0.5, dom, hints);
}

CompleteLacunarySpec make_complete(Interval host, double pole, Side side, int depth, double ratio,
                                   double first_fraction) {
  if (!host.contains_open(pole)) throw std::invalid_argument("make_complete: pole outside host");
  if (depth < 1) throw std::invalid_argument("make_complete: depth must be positive");
  if (!(ratio >= 0.25 && ratio < 0.5)) throw std::invalid_argument("make_complete: ratio not in [1/4,1/2)");
  if (!(first_fraction >= 0.5 && first_fraction < 1.0))
    throw std::invalid_argument("make_complete: first_fraction not in [1/2,1)");
  CompleteLacunarySpec s;
  s.interval = host;
  s.pole = pole;
  s.sides = side;
  auto fill = [&](double reach, double sign, std::vector<double>& out) {
    double d = first_fraction * reach;
    for (int i = 0; i < depth; ++i, d *= ratio) out.push_back(pole + sign * d);
  };
  if (side != Side::increasing) fill(host.hi - pole, 1.0, s.decreasing);
  if (side != Side::decreasing) fill(pole - host.lo, -1.0, s.increasing);
  // Rounding can break a ratio that sits on the 1/4 boundary; callers should
  // keep ratio away from it.
  if (!satisfies_complete(s)) throw std::invalid_argument("make_complete: rounding broke the ratio conditions");
  return s;
}

LacunaryDecomposition complete_tower(int order, Interval domain, const CompletionPolicy& policy,
                                     double gap) {
  if (order < 1) throw std::invalid_argument("complete_tower: order must be positive");
  std::vector<std::vector<double>> chain;
  std::vector<PoleHint> hints;
  std::vector<double> cur;
  for (int k = 1; k <= order; ++k) {
    std::vector<Interval> hosts =
        k == 1 ? std::vector<Interval>{domain} : adjacent_intervals(cur, domain);
    std::vector<double> next = cur;
    for (const auto& host : hosts) {
      auto spec = policy(host, k);
      auto pts = spec.points();
      next.insert(next.end(), pts.begin(), pts.end());
      hints.push_back({k, host, spec.pole});
    }
    std::sort(next.begin(), next.end());
    cur = std::move(next);
    chain.push_back(cur);
  }
  return build_decomposition(std::move(chain), gap, domain, hints);
}

}  // namespace dirmax
