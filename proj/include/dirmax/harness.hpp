#pragma once

// Empirical L2 norm ratios of the directional maximal operators over finite
// families of test functions. Every ratio is a lower bound for the discrete
// operator norm.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dirmax/grid.hpp"
#include "dirmax/grid_ops.hpp"
#include "dirmax/lacunary.hpp"

namespace dirmax {

enum class TestKind { disk, annulus, needle_bundle, random_bumps, hot_pixel };

/// Accepts disk, annulus, needles (or needle_bundle), random (or
/// random_bumps) and hot_pixel.
TestKind parse_test_kind(const std::string& name);
std::string to_string(TestKind kind);

/// Lengths are physical. The center defaults to the middle of the grid.
struct TestFunctionSpec {
  TestKind kind = TestKind::disk;
  double radius = 0.25;      // disk radius, annulus outer radius, needle half-length, bump width
  double inner = 0.0;        // annulus inner radius
  int count = 8;             // needles or bumps
  double eccentricity = 16;  // needle length over width
  std::uint64_t seed = 0;
  std::optional<std::pair<double, double>> center;
  std::vector<double> slopes;  // needle directions; empty means evenly spread angles

  std::string label() const;
};

/// Throws std::invalid_argument for bad parameters or an all-zero result.
Grid2D generate(const TestFunctionSpec& spec, int width, int height, double spacing);

struct TestFamily {
  std::vector<TestFunctionSpec> specs;
  std::vector<Grid2D> grids;
};

TestFamily make_family(std::vector<TestFunctionSpec> specs, int width, int height, double spacing);

enum class OperatorKind { m0, m1, m2 };
OperatorKind parse_operator(const std::string& name);
std::string to_string(OperatorKind op);

Grid2D apply_operator(OperatorKind op, const Grid2D& f, const DirectionSet& omega, const OperatorConfig& cfg);

struct RatioResult {
  double ratio = 0.0;
  int argmax = -1;   // index into the family
  int skipped = 0;   // zero-norm members
};

/// max over the family of ||op f|| / ||f||.
RatioResult measure_ratio(const DirectionSet& omega, const TestFamily& family, OperatorKind op,
                          const OperatorConfig& cfg);

enum class SweepMode { N, mu };

struct SweepRow {
  int label = 0;  // N or mu
  OperatorKind op = OperatorKind::m1;
  double max_ratio = 0.0;
  std::string argmax;
  std::size_t directions = 0;
  double runtime_ms = 0.0;

  double ref_sqrt_log() const;  // sqrt(log2 label)
  double ref_log() const;
  double ref_sqrt_mu() const;
  double ref_mu() const;
};

struct SweepResult {
  SweepMode mode = SweepMode::N;
  std::vector<SweepRow> rows;
};

/// Slopes i/N, i = 0..N-1. When each set contains the previous one the
/// operators are accumulated incrementally; runtime_ms is the time spent on
/// that row only.
SweepResult sweep_N(const std::vector<int>& Ns, const TestFamily& family, const std::vector<OperatorKind>& ops,
                    const OperatorConfig& cfg);

struct TowerShape {
  int depth = 4;            // points per side in each completion
  double ratio = 0.375;     // distance ratio between consecutive points
  double first_fraction = 0.75;
};

/// Complete mu-lacunary set in [0,1] built by both-side completion about
/// interval midpoints.
LacunaryDecomposition lacunary_tower(int mu, const TowerShape& shape = {});

SweepResult sweep_mu(const std::vector<int>& mus, const TestFamily& family, const std::vector<OperatorKind>& ops,
                     const OperatorConfig& cfg, const TowerShape& shape = {});

enum class GrowthModel { sqrt_log, log, sqrt_mu, mu };

struct GrowthFit {
  double coefficient = 0.0;
  double residual = 0.0;  // RMS
};

/// Least squares ratio ~ c * model(label) over the rows of one operator.
GrowthFit fit_growth(const SweepResult& result, GrowthModel model, OperatorKind op);

/// CSV with header label,operator,max_ratio,ref_sqrt_log,ref_log,ref_sqrt_mu,ref_mu,runtime_ms.
/// With timing off the runtime column is written as 0 so reruns are byte-identical.
std::string sweep_csv(const SweepResult& result, bool timing = true);

}  // namespace dirmax
