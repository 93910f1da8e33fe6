#include "dirmax/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "dirmax/error.hpp"
#include "dirmax/grid_ops.hpp"
#include "dirmax/harness.hpp"
#include "dirmax/io.hpp"
#include "dirmax/kernels.hpp"
#include "dirmax/rng.hpp"
#include "dirmax/sectors.hpp"

namespace dirmax {

using nlohmann::json;

namespace {

std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> v;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    const std::string cell = text.substr(pos, end - pos);
    double x = 0;
    const auto r = std::from_chars(cell.data(), cell.data() + cell.size(), x);
    if (cell.empty() || r.ec != std::errc() || r.ptr != cell.data() + cell.size())
      throw std::invalid_argument("bad number '" + cell + "' in '" + text + "'");
    v.push_back(x);
    pos = end + 1;
  }
  return v;
}

std::vector<std::string> parse_words(const std::string& text) {
  std::vector<std::string> v;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    if (end > pos) v.push_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  return v;
}

std::string number(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

// `--out` names either a format (written to stdout) or a file path.
bool is_format(const std::string& target) { return target.empty() || target == "-" || target == "csv" || target == "json"; }

std::string format_of(const std::string& target, const std::string& fallback) {
  if (target == "csv" || target == "json") return target;
  const auto ext = std::filesystem::path(target).extension().string();
  if (ext == ".csv") return "csv";
  if (ext == ".json") return "json";
  return fallback;
}

void emit(const std::string& target, const std::string& content, std::ostream& out) {
  if (is_format(target)) out << content;
  else write_atomic(target, content);
}

struct Common {
  std::uint64_t seed = 0;
  int threads = 1;
};

// --- decompose -------------------------------------------------------------

struct DecomposeArgs {
  std::string input, out, mode = "binary";
  std::optional<double> gap;
  bool complete = false;
  int mu = 2, depth = 2;
  double ratio = 0.375;
};

int cmd_decompose(const DecomposeArgs& a, std::ostream& out) {
  LacunaryDecomposition d;
  if (a.mode == "binary") {
    if (a.input.empty()) throw std::invalid_argument("decompose: --input is required");
    auto slopes = slopes_from_json(read_file(a.input));
    std::sort(slopes.begin(), slopes.end());
    d = binary_decomposition(slopes);
  } else if (a.mode == "chain") {
    if (a.input.empty()) throw std::invalid_argument("decompose: --input is required");
    const std::string text = read_file(a.input);
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw std::invalid_argument(std::string("decompose: ") + e.what());
    }
    if (j.is_array()) j = json{{"chain", j}};
    if (a.gap) j["gap"] = *a.gap;
    if (!j.contains("gap")) j["gap"] = 0.5;
    d = decomposition_from_json(j.dump());
  } else if (a.mode == "tower") {
    TowerShape shape;
    shape.depth = a.depth;
    shape.ratio = a.ratio;
    d = lacunary_tower(a.mu, shape);
  } else {
    throw std::invalid_argument("decompose: unknown mode " + a.mode);
  }
  if (a.complete) d = complete_decomposition(d);
  emit(a.out, decomposition_to_json(d), out);
  return 0;
}

// --- kernel-table ----------------------------------------------------------

struct KernelArgs {
  std::string kind = "fejer", range = "-3,3", out;
  double r = 1.0, h = 1.0;
  int samples = 7;
};

int cmd_kernel_table(const KernelArgs& a, std::ostream& out) {
  const KernelSpec spec{parse_kernel_kind(a.kind), a.r, a.h};
  const auto range = parse_numbers(a.range);
  if (range.size() != 2 || !(range[0] < range[1])) throw std::invalid_argument("kernel-table: --range needs a<b");
  if (a.samples < 2) throw std::invalid_argument("kernel-table: --samples must be at least 2");
  // `samples` points from the midpoint to each end of the range.
  const int steps = 2 * (a.samples - 1);
  std::string csv = "x,value\n";
  for (int k = 0; k <= steps; ++k) {
    const double x = k == steps ? range[1] : range[0] + (range[1] - range[0]) * k / steps;
    csv += number(x) + "," + number(spec(x)) + "\n";
  }
  emit(a.out, csv, out);
  return 0;
}

// --- apply -----------------------------------------------------------------

struct ApplyArgs {
  std::string op = "m1", directions, grid, out;
  double r = 1.0, h = 1.0, alpha = 0.0, max_lost = 1e-3, csv_spacing = 1.0;
  std::optional<double> reach;
  int aspect_levels = 2;
};

int cmd_apply(const ApplyArgs& a, const Common& c) {
  if (a.grid.empty() || a.out.empty()) throw std::invalid_argument("apply: --grid and --out are required");
  const Grid2D f = read_grid(a.grid, a.csv_spacing);
  const double reach = a.reach.value_or(0.5 * std::min(f.width, f.height) * f.spacing);
  OperatorConfig cfg = OperatorConfig::dyadic(f.spacing, reach, a.aspect_levels);
  cfg.threads = c.threads;
  Grid2D g;
  if (a.op == "strong") {
    g = strong_maximal(f, cfg);
  } else if (a.op == "gamma") {
    g = gamma_op(f, a.alpha, a.r, a.h, a.max_lost);
  } else {
    if (a.directions.empty()) throw std::invalid_argument("apply: --directions is required for " + a.op);
    const auto omega = DirectionSet::from_slopes(slopes_from_json(read_file(a.directions)));
    g = apply_operator(parse_operator(a.op), f, omega, cfg);
  }
  write_grid(a.out, g);
  return 0;
}

// --- overlap ---------------------------------------------------------------

struct OverlapArgs {
  std::string decomp, out;
  int samples = 0;
};

int cmd_overlap(const OverlapArgs& a, const Common& c, std::ostream& out) {
  if (a.decomp.empty()) throw std::invalid_argument("overlap: --decomp is required");
  const auto d = decomposition_from_json(read_file(a.decomp));
  json j;
  if (a.samples > 0) {
    double top = 1;
    for (const auto& r : d.rank_intervals()) top = std::max(top, 1.0 / (r.hi - r.lo));
    CounterRng rng(c.seed);
    int lo = 0, hi = 0;
    FreqPoint at_lo{1, 0}, at_hi{1, 0};
    for (int k = 0; k < a.samples; ++k) {
      const double x = std::exp(rng.uniform(0, std::log(20 * top)));
      const FreqPoint p{x, rng.uniform(d.domain().lo, d.domain().hi) * x + rng.uniform(-5, 5)};
      const auto [nl, nt] = overlap_count(d, p);
      if (nl > lo) lo = nl, at_lo = p;
      if (nt > hi) hi = nt, at_hi = p;
    }
    j = {{"method", "sampled"}, {"samples", a.samples}, {"n_low", lo}, {"n_top", hi},
         {"argmax_low", {at_lo.first, at_lo.second}}, {"argmax_top", {at_hi.first, at_hi.second}}};
  } else {
    const auto rep = max_overlap(d);
    j = {{"method", "exact"}, {"n_low", rep.n_low}, {"n_top", rep.n_top},
         {"argmax_low", {rep.argmax_low.first, rep.argmax_low.second}},
         {"argmax_top", {rep.argmax_top.first, rep.argmax_top.second}}};
  }
  j["order"] = d.order();
  j["bounds"] = {{"low", 40}, {"top", 12}};
  emit(a.out, j.dump(2) + "\n", out);
  return 0;
}

// --- check-support ---------------------------------------------------------

struct SupportArgs {
  std::string chain, out;
  std::optional<double> theta, R;
  int lattice = 512;
};

int cmd_check_support(const SupportArgs& a, std::ostream& out) {
  if (a.chain.empty()) throw std::invalid_argument("check-support: --chain is required");
  json in;
  try {
    in = json::parse(read_file(a.chain));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("check-support: ") + e.what());
  }
  std::vector<Interval> chain;
  std::vector<double> poles;
  double theta = 0, R = 0;
  try {
    for (const auto& iv : in.at("chain")) {
      const auto v = iv.get<std::vector<double>>();
      if (v.size() != 2) throw std::invalid_argument("check-support: intervals need two numbers");
      chain.push_back({v[0], v[1]});
    }
    if (in.contains("poles")) poles = in["poles"].get<std::vector<double>>();
    if (!a.theta && !in.contains("theta")) throw std::invalid_argument("check-support: theta is required");
    if (!a.R && !in.contains("R")) throw std::invalid_argument("check-support: R is required");
    theta = a.theta ? *a.theta : in["theta"].get<double>();
    R = a.R ? *a.R : in["R"].get<double>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("check-support: ") + e.what());
  }
  const auto rep = support_containment_check(chain, poles, theta, R, a.lattice);
  json bands = json::array();
  for (const auto& b : rep.bands)
    bands.push_back({{"k", b.k}, {"width_margin", b.width_margin}, {"lattice_margin", b.lattice_margin},
                     {"x1_margin", b.x1_margin}, {"contained", b.contained}});
  json j = {{"m", rep.m}, {"bands", bands}, {"contained", rep.all_contained()}};
  j["min_margin"] = rep.bands.empty() ? json(nullptr) : json(rep.min_margin());
  emit(a.out, j.dump(2) + "\n", out);
  return rep.all_contained() ? 0 : 1;
}

// --- sweep -----------------------------------------------------------------

struct SweepArgs {
  std::string mode = "N", values = "4,16,64,256", ops = "m1", family = "disk,needles,random", out = "csv";
  int size = 256, depth = 2;
  double spacing = 1.0 / 32, reach = 1.0;
  bool no_timing = false;
};

std::vector<TestFunctionSpec> family_specs(const std::vector<std::string>& names, int size, double spacing,
                                           std::uint64_t seed) {
  const double L = size * spacing;
  std::vector<TestFunctionSpec> specs;
  for (const auto& n : names) {
    TestFunctionSpec s;
    s.kind = parse_test_kind(n);
    switch (s.kind) {
      case TestKind::disk: s.radius = L / 16; break;
      case TestKind::annulus: s.radius = L / 16, s.inner = L / 32; break;
      case TestKind::needle_bundle: s.radius = L / 8, s.count = 8, s.eccentricity = 16; break;
      case TestKind::random_bumps: s.radius = L / 32, s.count = 6, s.seed = seed; break;
      case TestKind::hot_pixel: break;
    }
    specs.push_back(s);
  }
  return specs;
}

int cmd_sweep(const SweepArgs& a, const Common& c, std::ostream& out) {
  std::vector<int> labels;
  for (double v : parse_numbers(a.values)) {
    if (v != std::floor(v) || v < 1 || v > 1e6) throw std::invalid_argument("sweep: --values must be positive integers");
    labels.push_back(static_cast<int>(v));
  }
  std::vector<OperatorKind> ops;
  for (const auto& o : parse_words(a.ops)) ops.push_back(parse_operator(o));
  if (a.size < 8) throw std::invalid_argument("sweep: --size must be at least 8");
  const auto fam = make_family(family_specs(parse_words(a.family), a.size, a.spacing, c.seed), a.size, a.size,
                               a.spacing);
  OperatorConfig cfg = OperatorConfig::dyadic(a.spacing, a.reach);
  cfg.threads = c.threads;
  SweepResult res;
  if (a.mode == "N") {
    res = sweep_N(labels, fam, ops, cfg);
  } else if (a.mode == "mu") {
    TowerShape shape;
    shape.depth = a.depth;
    res = sweep_mu(labels, fam, ops, cfg, shape);
  } else {
    throw std::invalid_argument("sweep: --mode must be N or mu");
  }
  if (format_of(a.out, "csv") == "csv") {
    emit(a.out, sweep_csv(res, !a.no_timing), out);
  } else {
    json rows = json::array();
    for (const auto& r : res.rows)
      rows.push_back({{"label", r.label}, {"operator", to_string(r.op)}, {"max_ratio", r.max_ratio},
                      {"argmax", r.argmax}, {"directions", r.directions}, {"ref_sqrt_log", r.ref_sqrt_log()},
                      {"ref_log", r.ref_log()}, {"ref_sqrt_mu", r.ref_sqrt_mu()}, {"ref_mu", r.ref_mu()},
                      {"runtime_ms", a.no_timing ? 0.0 : r.runtime_ms}});
    emit(a.out, json{{"mode", a.mode}, {"rows", rows}}.dump(2) + "\n", out);
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Directional maximal operators over lacunary direction sets", "dirmax"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--seed", common.seed, "Seed for every random draw")->capture_default_str();
  app.add_option("--threads", common.threads, "Worker threads")->check(CLI::PositiveNumber);

  DecomposeArgs dec;
  auto* sd = app.add_subcommand("decompose", "Build a lacunary decomposition");
  sd->add_option("--mode", dec.mode, "binary | chain | tower")->capture_default_str();
  sd->add_option("--input", dec.input, "Slopes (binary) or chain JSON (chain)");
  sd->add_option("--gap", dec.gap, "Gap for --mode chain");
  sd->add_flag("--complete", dec.complete, "Complete the decomposition");
  sd->add_option("--mu", dec.mu, "Order for --mode tower");
  sd->add_option("--depth", dec.depth, "Points per side for --mode tower");
  sd->add_option("--ratio", dec.ratio, "Distance ratio for --mode tower");
  sd->add_option("--out", dec.out, "Output JSON file (stdout if omitted)");

  KernelArgs ker;
  auto* sk = app.add_subcommand("kernel-table", "Tabulate a kernel");
  sk->add_option("--kind", ker.kind, "fejer | vp | vp-hat | bump | xi | zeta")->capture_default_str();
  sk->add_option("--r", ker.r)->capture_default_str();
  sk->add_option("--h", ker.h)->capture_default_str();
  sk->add_option("--range", ker.range, "a,b")->capture_default_str();
  sk->add_option("--samples", ker.samples, "Points from the midpoint to each end")->capture_default_str();
  sk->add_option("--out", ker.out, "csv (stdout) or a file path");

  ApplyArgs app_args;
  auto* sa = app.add_subcommand("apply", "Apply an operator to a grid");
  sa->add_option("--op", app_args.op, "m0 | m1 | m2 | strong | gamma")->capture_default_str();
  sa->add_option("--directions", app_args.directions, "Slopes JSON");
  sa->add_option("--grid", app_args.grid, "Input grid (.grd binary or .csv)");
  sa->add_option("--csv-spacing", app_args.csv_spacing, "Spacing for CSV grids")->capture_default_str();
  sa->add_option("--r", app_args.r)->capture_default_str();
  sa->add_option("--h", app_args.h)->capture_default_str();
  sa->add_option("--alpha", app_args.alpha)->capture_default_str();
  sa->add_option("--max-lost", app_args.max_lost, "Allowed kernel mass outside the window")->capture_default_str();
  sa->add_option("--reach", app_args.reach, "Largest averaging radius");
  sa->add_option("--aspect-levels", app_args.aspect_levels)->capture_default_str();
  sa->add_option("--out", app_args.out, "Output grid");

  OverlapArgs ov;
  auto* so = app.add_subcommand("overlap", "Maximal strip overlap of a decomposition");
  so->add_option("--decomp,--input", ov.decomp, "Decomposition JSON");
  so->add_flag("--exact", "Exact sweep (default)");
  so->add_option("--samples", ov.samples, "Random sampling instead of the exact sweep");
  so->add_option("--out", ov.out, "json (stdout) or a file path");

  SupportArgs sup;
  auto* ss = app.add_subcommand("check-support", "Band containment for a chain of intervals");
  ss->add_option("--chain", sup.chain, "JSON {chain: [[lo,hi],...], poles: [...]}");
  ss->add_option("--theta", sup.theta);
  ss->add_option("--R", sup.R);
  ss->add_option("--lattice", sup.lattice)->capture_default_str();
  ss->add_option("--out", sup.out, "json (stdout) or a file path");

  SweepArgs sw;
  auto* sp = app.add_subcommand("sweep", "Norm ratio sweeps");
  sp->add_option("--mode", sw.mode, "N | mu")->capture_default_str();
  sp->add_option("--values", sw.values)->capture_default_str();
  sp->add_option("--ops", sw.ops)->capture_default_str();
  sp->add_option("--family", sw.family, "disk, annulus, needles, random, hot_pixel")->capture_default_str();
  sp->add_option("--size", sw.size, "Grid side in pixels")->capture_default_str();
  sp->add_option("--spacing", sw.spacing)->capture_default_str();
  sp->add_option("--reach", sw.reach, "Largest averaging radius")->capture_default_str();
  sp->add_option("--depth", sw.depth, "Points per side for mu sweeps")->capture_default_str();
  sp->add_flag("--no-timing", sw.no_timing, "Write zero runtimes so reruns are byte-identical");
  sp->add_option("--out", sw.out, "csv | json (stdout) or a file path")->capture_default_str();

  if (args.empty()) {
    err << app.help();
    return 1;
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return 1;
  }

  try {
    if (*sd) return cmd_decompose(dec, out);
    if (*sk) return cmd_kernel_table(ker, out);
    if (*sa) return cmd_apply(app_args, common);
    if (*so) return cmd_overlap(ov, common, out);
    if (*ss) return cmd_check_support(sup, out);
    if (*sp) return cmd_sweep(sw, common, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace dirmax
