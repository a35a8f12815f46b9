#pragma once

#include <string>

namespace hyperem {

/// A radial Emden-Fowler problem u'' + (n-1) c coth(c r) u' + |u|^{p-1} u = 0,
/// u(0) = alpha, u'(0) = 0. The metric has curvature -c^2.
struct Params {
  int n = 3;
  double p = 2.0;
  double c = 1.0;
  double alpha = 1.0;

  /// Throws Error(Domain) unless n >= 2, p > 0, c > 0 and alpha is finite.
  void validate() const;
};

enum class RegimeTag { Sublinear, Linear, Subcritical, Supercritical };

struct Regime {
  RegimeTag tag = RegimeTag::Subcritical;
  bool critical_boundary = false;

  friend bool operator==(const Regime&, const Regime&) = default;
};

const char* to_string(RegimeTag tag);
std::string to_string(const Regime& regime);

/// Relative tolerance used when comparing p against 1 and (n+2)/(n-2).
inline constexpr double kExponentRelTol = 1e-12;

Regime classify_regime(int n, double p);

/// (n+2)/(n-2) for n >= 3; +infinity for n = 2.
double critical_exponent(int n);

/// Bottom of the L^2 spectrum of -Laplacian on H^n, (n-1)^2/4. Exact for integer n.
double spectral_gap(int n);

/// log(sinh r) for r > 0, accurate for large r.
double log_sinh(double r);

/// (sinh r)^{n-1}; overflows to +inf only when the true value does.
double sinh_pow(int n, double r);

/// phi_n(r) / (sinh r)^{n-1}, bounded for all r >= 0 (equal to 0 at r = 0).
double phi_ratio(int n, double r);

/// phi_n(r) = int_0^r (sinh s)^{n-1} ds.
double phi_n(int n, double r);

/// log(phi_n(r)) for r > 0; finite where phi_n itself would overflow.
double log_phi_n(int n, double r);

/// psi_p(r) = (p+3)/(2(p+1)) (sinh r)^{n-1} - (n-1) phi_n(r) coth r, with psi_p(0) = 0.
double psi_p(int n, double p, double r);

/// psi_p(r) / (sinh r)^{n-1}; same sign as psi_p and free of overflow.
double psi_p_scaled(int n, double p, double r);

/// Unique positive root of psi_p in the subcritical regime.
double find_R_np(int n, double p);

/// Decay constant ((n-1)/(p-1))^{1/(p-1)} of the slow-decay law.
double c_np(int n, double p);

struct LambdaPair {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

/// Roots of lambda^2 - (n-1) lambda + c = 0, for 0 < c <= (n-1)^2/4.
LambdaPair lambda_pair(int n, double c);

}  // namespace hyperem
