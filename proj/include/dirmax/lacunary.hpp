#pragma once

// Direction sets, lacunary sequences and mu-lacunary decompositions.
//
// Conventions used throughout:
//  * A direction is stored by its angle parameter s in [0,1), i.e. the unit
//    vector e_s = (cos 2 pi s, sin 2 pi s). A slope alpha corresponds to the
//    vector u_alpha = (1, alpha), i.e. s = atan(alpha) / (2 pi).
//  * Lacunarity checks use exact IEEE comparisons. Callers that want a
//    tolerance must snap their data first.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dirmax {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains_open(double x) const { return lo < x && x < hi; }
  bool contains_closed(double x) const { return lo <= x && x <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

double slope_to_angle(double alpha);
double angle_to_slope(double s);

class DirectionSet {
 public:
  DirectionSet() = default;

  static DirectionSet from_angles(std::span<const double> angles);
  static DirectionSet from_slopes(std::span<const double> slopes);

  const std::vector<double>& angles() const { return angles_; }
  std::size_t size() const { return angles_.size(); }
  bool empty() const { return angles_.empty(); }

  /// Same set of lines through the origin (angles compared mod 1/2).
  bool equivalent(const DirectionSet& other, double tol = 1e-12) const;

 private:
  std::vector<double> angles_;  // sorted, each in [0,1)
};

/// Directions orthogonal to the members of `set`: s -> s + 1/4 (mod 1).
DirectionSet perpendicular(const DirectionSet& set);

struct LacunarySequence {
  std::vector<double> points;
  double pole = 0.0;
  double gap = 0.5;
};

/// |v[i+1] - pole| < gap * |v[i] - pole| for all consecutive pairs. A pole
/// that coincides with a point yields false. A single point is lacunary.
bool check_lacunary(std::span<const double> points, double pole, double gap);

/// Open interval of poles satisfying every consecutive constraint of
/// `points` (in the given order), or nullopt when empty. Unbounded when
/// there is only one point.
std::optional<Interval> feasible_pole_interval(std::span<const double> points,
                                               double gap);

/// A pole beyond the last point (on the side the sequence is heading to)
/// that makes `points` lacunary, restricted to `domain` when given. Throws
/// std::invalid_argument for non-monotone input.
std::optional<double> infer_pole(std::span<const double> points, double gap,
                                 std::optional<Interval> domain = std::nullopt);

/// Lacunarity of an unordered set about a pole: points below the pole,
/// taken in increasing order, and points above it, taken in decreasing
/// order, must each be lacunary.
bool check_lacunary_set(std::span<const double> points, double pole, double gap);

/// Pole inside the open `host` for which check_lacunary_set holds. Prefers a
/// one-sided pole (below all points, then above all points) over a pole
/// between points.
std::optional<double> infer_set_pole(std::span<const double> points, double gap,
                                     Interval host);

/// Maximal open subintervals of `domain` missing `set`, left to right.
/// Empty (zero-length) gaps are omitted.
std::vector<Interval> adjacent_intervals(std::span<const double> set, Interval domain);

/// Points added at one construction step inside one adjacent interval.
struct LacunaryGroup {
  int step = 1;  // the group belongs to chain[step-1] \ chain[step-2]
  Interval host;
  std::vector<double> points;
  double pole = 0.0;
};

struct RankInterval {
  double lo = 0.0;
  double hi = 0.0;
  int rank = 1;
  std::optional<double> pole;
};

struct PoleHint {
  int step = 1;
  Interval host;
  double pole = 0.0;
};

class LacunaryDecomposition {
 public:
  int order() const { return static_cast<int>(chain_.size()); }
  double gap() const { return gap_; }
  const Interval& domain() const { return domain_; }
  const std::vector<std::vector<double>>& chain() const { return chain_; }
  const std::vector<double>& final_set() const { return chain_.back(); }
  const std::vector<LacunaryGroup>& groups() const { return groups_; }
  const std::vector<RankInterval>& rank_intervals() const { return rank_intervals_; }

 private:
  friend LacunaryDecomposition build_decomposition(std::vector<std::vector<double>>, double,
                                                   std::optional<Interval>,
                                                   std::span<const PoleHint>);
  std::vector<std::vector<double>> chain_;
  double gap_ = 0.5;
  Interval domain_;
  std::vector<LacunaryGroup> groups_;
  std::vector<RankInterval> rank_intervals_;
};

/// Validates a nested chain and derives groups, poles and rank intervals.
/// The domain defaults to the hull of the final set. Poles are taken from
/// `hints` when a hint matches (step, host) exactly and inferred otherwise.
/// Throws std::invalid_argument for malformed chains and ValidationError
/// when a group admits no pole with the given gap.
LacunaryDecomposition build_decomposition(std::vector<std::vector<double>> chain, double gap,
                                          std::optional<Interval> domain = std::nullopt,
                                          std::span<const PoleHint> hints = {});

/// Bisection construction: order <= floor(log2 N) + 2.
LacunaryDecomposition binary_decomposition(std::span<const double> points);

enum class Side { increasing, decreasing, both };

/// A complete lacunary set in `interval`: the increasing part approaches the
/// pole from below, the decreasing part from above. Either part may be empty
/// for one-sided sets.
struct CompleteLacunarySpec {
  Interval interval;
  double pole = 0.0;
  Side sides = Side::decreasing;
  std::vector<double> increasing;
  std::vector<double> decreasing;

  std::vector<double> points() const;  // sorted ascending
};

/// Ratio condition 1/4 <= d[k+1]/d[k] < 1/2 and the first-element condition
/// on every non-empty side.
bool satisfies_complete(const CompleteLacunarySpec& spec);

/// Superset of `seq` that is complete one-side lacunary in `interval`.
/// Requires seq.gap < 1/2, all points on one side of the pole and the pole
/// in the closed interval.
CompleteLacunarySpec complete_one_sided(const LacunarySequence& seq, Interval interval);

/// n(gap): 1 when gap <= 1/2, else ceil(1 / log2(1/gap)).
int completion_factor(double gap);

/// Superset decomposition made of complete lacunary groups, of order at
/// most completion_factor(gap) * order.
LacunaryDecomposition complete_decomposition(const LacunaryDecomposition& decomp);

/// Complete set in `host` with the given pole: `depth` points per side,
/// first distance first_fraction * (distance to the endpoint) and constant
/// ratio `ratio` in [1/4, 1/2).
CompleteLacunarySpec make_complete(Interval host, double pole, Side side, int depth,
                                   double ratio, double first_fraction);

using CompletionPolicy = std::function<CompleteLacunarySpec(const Interval& host, int step)>;

/// Complete mu-lacunary set built by placing policy(J, k) in every adjacent
/// interval J of the previous stage, for k = 1..order.
LacunaryDecomposition complete_tower(int order, Interval domain, const CompletionPolicy& policy,
                                     double gap = 0.5);

}  // namespace dirmax
