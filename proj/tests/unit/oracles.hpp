#pragma once

// Test-only reference values computed without the library.

#include <cmath>
#include <functional>

namespace oracle {

inline double simpson(const std::function<double(double)>& f, double a, double b, double fa,
                      double fm, double fb, double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, eps / 2, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, eps / 2, depth - 1);
}

/// Adaptive Simpson quadrature.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double eps = 1e-12) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson(f, a, b, fa, fm, fb, whole, eps, 50);
}

inline double phi(int n, double r) {
  return integrate([n](double s) { return std::pow(std::sinh(s), n - 1); }, 0.0, r,
                   1e-15 * r * std::pow(std::sinh(r), n - 1));
}

inline double psi(int n, double p, double r) {
  if (r == 0.0) return 0.0;
  const double sh = std::pow(std::sinh(r), n - 1);
  return (p + 3.0) / (2.0 * (p + 1.0)) * sh - (n - 1) * phi(n, r) / std::tanh(r);
}

/// Bisection for a sign change of f on [a, b].
inline double bisect(const std::function<double(double)>& f, double a, double b) {
  double fa = f(a);
  for (int i = 0; i < 200 && b - a > 1e-14 * std::max(1.0, b); ++i) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

/// Lane-Emden index 5 in R^3: (1 + r^2/3)^{-1/2}.
inline double lane_emden5(double r) { return 1.0 / std::sqrt(1.0 + r * r / 3.0); }

/// u'' + 2 coth r u' + c u = 0 on H^3, u(0) = 1, c > 1.
inline double h3_linear_oscillatory(double c, double r) {
  const double k = std::sqrt(c - 1.0);
  return r == 0.0 ? 1.0 : std::sin(k * r) / (k * std::sinh(r));
}

/// Ground state for n = 3, p = 2: 6 / cosh^2 r.
inline double h3_quadratic_ground_state(double r) {
  const double ch = std::cosh(r);
  return 6.0 / (ch * ch);
}

}  // namespace oracle
