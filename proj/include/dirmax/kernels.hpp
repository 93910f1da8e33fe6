#pragma once

// One-dimensional kernels used by the smoothed directional operators.
//
// Transforms are normalized so that vp_transform(r, xi) equals
// (1/2pi) * integral of vp_eval(r, x) e^{i x xi} dx; the kernels themselves
// integrate to 2pi.

#include <string_view>

namespace dirmax {

/// K_r(x) = 4 sin^2(rx/2) / (r x^2), with K_r(0) = r.
double fejer_eval(double r, double x);

/// V_r = 2 K_{2r} - K_r.
double vp_eval(double r, double x);

/// Trapezoid: 1 on [-r, r], 0 beyond 2r, linear in between.
double vp_transform(double r, double xi);

/// sum_{j=1..depth} 2^{-j} V_{r / 2^j}(x).
double fejer_from_vp(double r, double x, int depth);

/// The fixed bump phi(x) = a (sin(x/4) / (x/4))^4, a chosen so that
/// min over [0,1] of phi is exactly 1 (attained at x = 1).
double bump_scale();
double bump_phi(double x);
/// Closed form of the integral of phi: a * 8 pi / 3.
double bump_integral();
/// phi_h(x) = phi(x / h) / h.
double bump_eval(double h, double x);

/// max(|phi(x)|, |x phi(x)|).
double xi_eval(double x);

/// Index of the first dyadic shell of zeta_r: k0 = ceil(log2(1/r)).
int zeta_first_index(double r);
/// gamma_k = 4 * 4^{-k} / r for k > k0, zero otherwise.
double zeta_gamma(double r, int k);
/// zeta_r(x) = sum_{k > k0} gamma_k 1{|x| < 2^k}.
double zeta_eval(double r, double x);
/// Closed form of ||zeta_r||_1 = (8 / r) 2^{-k0}.
double zeta_l1(double r);
/// Constant C with |V_r| <= C zeta_r everywhere: |V_r| <= 3r and zeta_r > r/3
/// on the innermost shell, while 4/(r x^2) over (4/3)/(r x^2) bounds the rest.
inline constexpr double kZetaDomination = 9.0;

enum class KernelKind { fejer, vallee_poussin, vp_transform, bump, majorant_xi, majorant_zeta };

KernelKind parse_kernel_kind(std::string_view name);

struct KernelSpec {
  KernelKind kind = KernelKind::fejer;
  double r = 1.0;
  double h = 1.0;

  double operator()(double x) const;
};

}  // namespace dirmax
