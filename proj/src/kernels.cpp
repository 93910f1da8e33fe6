#include "dirmax/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dirmax {
namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be positive");
}

// (sin z / z)^2 without the 0/0 at the origin.
double sinc_sq(double z) {
  if (std::abs(z) < 1e-6) return 1.0 - z * z / 3.0;
  const double s = std::sin(z) / z;
  return s * s;
}

}  // namespace

double fejer_eval(double r, double x) {
  require_positive(r, "r");
  const double z = r * x;
  if (std::abs(z) < 1e-6) return r * (1.0 - z * z / 12.0);
  return r * sinc_sq(0.5 * z);
}

double vp_eval(double r, double x) { return 2.0 * fejer_eval(2.0 * r, x) - fejer_eval(r, x); }

double vp_transform(double r, double xi) {
  require_positive(r, "r");
  const double a = std::abs(xi);
  if (a <= r) return 1.0;
  if (a >= 2.0 * r) return 0.0;
  return 2.0 - a / r;
}

double fejer_from_vp(double r, double x, int depth) {
  require_positive(r, "r");
  if (depth < 1) throw std::invalid_argument("depth must be at least 1");
  double sum = 0.0;
  for (int j = 1; j <= depth; ++j) sum += std::ldexp(vp_eval(std::ldexp(r, -j), x), -j);
  return sum;
}

double bump_scale() {
  static const double a = [] {
    const double s = std::sin(0.25) / 0.25;
    return 1.0 / (s * s * s * s);
  }();
  return a;
}

double bump_phi(double x) {
  const double s = sinc_sq(0.25 * x);
  return bump_scale() * s * s;
}

double bump_integral() { return bump_scale() * 8.0 * std::numbers::pi / 3.0; }

double bump_eval(double h, double x) {
  require_positive(h, "h");
  return bump_phi(x / h) / h;
}

double xi_eval(double x) {
  const double p = bump_phi(x);
  return std::max(p, std::abs(x) * p);
}

int zeta_first_index(double r) {
  require_positive(r, "r");
  return static_cast<int>(std::ceil(std::log2(1.0 / r)));
}

double zeta_gamma(double r, int k) {
  if (k <= zeta_first_index(r)) return 0.0;
  return 4.0 * std::ldexp(1.0, -2 * k) / r;
}

double zeta_eval(double r, double x) {
  const int k0 = zeta_first_index(r);
  int first = k0 + 1;
  const double a = std::abs(x);
  if (a > 0) {
    // Smallest k with |x| < 2^k.
    int e;
    std::frexp(a, &e);  // a = m 2^e, m in [1/2, 1)
    first = std::max(first, e);
  }
  return (16.0 / 3.0) * std::ldexp(1.0, -2 * first) / r;
}

double zeta_l1(double r) { return 8.0 / r * std::ldexp(1.0, -zeta_first_index(r)); }

KernelKind parse_kernel_kind(std::string_view name) {
  if (name == "fejer") return KernelKind::fejer;
  if (name == "vp") return KernelKind::vallee_poussin;
  if (name == "vp-hat") return KernelKind::vp_transform;
  if (name == "bump") return KernelKind::bump;
  if (name == "xi") return KernelKind::majorant_xi;
  if (name == "zeta") return KernelKind::majorant_zeta;
  throw std::invalid_argument("unknown kernel kind: " + std::string(name));
}

double KernelSpec::operator()(double x) const {
  switch (kind) {
    case KernelKind::fejer: return fejer_eval(r, x);
    case KernelKind::vallee_poussin: return vp_eval(r, x);
    case KernelKind::vp_transform: return vp_transform(r, x);
    case KernelKind::bump: return bump_eval(h, x);
    case KernelKind::majorant_xi: return xi_eval(x);
    case KernelKind::majorant_zeta: return zeta_eval(r, x);
  }
  return 0.0;
}

}  // namespace dirmax
