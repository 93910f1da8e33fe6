#pragma once

// Independent numerical integration used as a reference by the tests.

#include <cmath>
#include <numbers>
#include <vector>

namespace oracle {

struct GaussLegendre {
  std::vector<double> nodes, weights;  // on [-1, 1]

  explicit GaussLegendre(int n) {
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1, p1 = x;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1);
        double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = x;
      weights[i] = 2 / ((1 - x * x) * dp * dp);
    }
  }

  template <class F>
  double integrate(F&& f, double a, double b) const {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(c + h * nodes[i]);
    return s * h;
  }

  template <class F>
  double panels(F&& f, double a, double b, int count) const {
    double s = 0;
    const double w = (b - a) / count;
    for (int p = 0; p < count; ++p) s += integrate(f, a + p * w, a + (p + 1) * w);
    return s;
  }
};

// Integral of cos(a x) / x^2 over [X, inf), X large.
inline double cos_over_x2_tail(double a, double X) {
  if (a == 0) return 1 / X;
  a = std::abs(a);
  return -std::sin(a * X) / (a * X * X) + 2 * std::cos(a * X) / (a * a * X * X * X);
}

// Whole-line integral of V_r(x) cos(xi x), with V_r written as
// 2 (cos rx - cos 2rx) / (r x^2): panels on [0, X] plus the closed-form tail.
template <class VP>
double vp_cosine_integral(VP&& vp, double r, double xi, int periods = 2000) {
  static const GaussLegendre gl(12);
  const double X = periods * 2 * std::numbers::pi / r;
  const int count = periods * 16;
  double inner = gl.panels([&](double x) { return vp(r, x) * std::cos(xi * x); }, 0, X, count);
  double tail = (cos_over_x2_tail(r + xi, X) + cos_over_x2_tail(r - xi, X) -
                 cos_over_x2_tail(2 * r + xi, X) - cos_over_x2_tail(2 * r - xi, X)) / r;
  return 2 * (inner + tail);
}

}  // namespace oracle
