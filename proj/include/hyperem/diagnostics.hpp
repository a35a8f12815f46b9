#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hyperem/ode.hpp"

namespace hyperem {

/// F = u'^2/2 + |u|^{p+1}/(p+1).
double lyapunov_F(double p, const State& s);

/// Psi = phi_n(r) F + (sinh r)^{n-1} u u'/(p+1); zero at r = 0.
double pohozaev_Psi(int n, double p, const State& s);

/// Psi / (sinh r)^{n-1}, finite for all r > 0.
double pohozaev_Psi_scaled(int n, double p, const State& s);

struct PsiIdentityReport {
  std::size_t checked = 0;     // midpoints where the comparison was well conditioned
  double max_rel_error = 0.0;
  double r_at_max = 0.0;
  /// Consecutive checked midpoints between which dPsi/dr changes sign.
  std::vector<std::pair<double, double>> sign_changes;
};

/// Compares a central difference of Psi with u'^2 psi_p at midpoints of the accepted steps.
PsiIdentityReport psi_derivative_check(const Trajectory& traj);

/// F(r_{k+1}) <= F(r_k) + slack * F(0) for every consecutive sample pair.
bool F_monotone(const Trajectory& traj, double slack = 1e-10);

/// (sinh r)^{2(n-1)} F nondecreasing on samples; slack bounds the allowed drop of its log.
bool weighted_F_nondecreasing(const Trajectory& traj, double slack = 1e-6);

enum class SignPattern { Negative, Positive, Zero, Mixed };
const char* to_string(SignPattern s);

/// Sign of Psi over samples with r >= r_min.
SignPattern psi_sign(const Trajectory& traj, double r_min = 1e-2);

/// Psi(r_{k+1}) >= Psi(r_k) - slack * max|Psi| for samples with r >= r_min.
bool psi_nondecreasing(const Trajectory& traj, double r_min = 1e-2, double slack = 1e-10);

enum class ThetaVariant { Theta, ThetaP };

struct SeriesPoint {
  double r = 0.0;
  double value = 0.0;
};

/// Theta = u'/u or Theta_p = u'/(|u|^{p-1} u) on accepted steps within [r_lo, r_hi].
/// Throws Domain if u vanishes inside the window.
std::vector<SeriesPoint> theta_series(const Trajectory& traj, ThetaVariant variant, double r_lo,
                                      double r_hi);
/// Same on the final sign branch of the trajectory.
std::vector<SeriesPoint> theta_series(const Trajectory& traj, ThetaVariant variant);

/// Theta or Theta_p at a single radius from the dense output.
double theta_at(const Trajectory& traj, ThetaVariant variant, double r);

enum class DecayLaw { PolynomialSlow, ExponentialFast, SublinearEnvelope, Undetermined };
const char* to_string(DecayLaw law);

struct DecayEstimate {
  DecayLaw law = DecayLaw::Undetermined;
  DecayLaw hypothesis = DecayLaw::Undetermined;
  double fitted_rate = 0.0;
  double fitted_constant = 0.0;
  double r_lo = 0.0;
  double r_hi = 0.0;
  double residual = 0.0;
  std::size_t points = 0;
};

inline constexpr double kDecayResidualThreshold = 0.1;

/// PolynomialSlow: rate from log|u| against log r; constant C from |u|^{1-p} ~ r/C^{p-1}.
/// ExponentialFast: log|u| against r; constant is the signed prefactor.
/// SublinearEnvelope: log|u| at critical points against their radii.
/// The default window is [max(10, r_end/2), r_end] cut to the final sign branch
/// (all of it for the envelope).
DecayEstimate decay_fit(const Trajectory& traj, DecayLaw hypothesis,
                        std::optional<std::pair<double, double>> window = std::nullopt);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};

/// Ordinary least squares y ~ slope x + intercept.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct DiagnosticsReport {
  bool F_monotone = true;
  SignPattern Psi_sign = SignPattern::Zero;
  double Psi_identity_max_err = 0.0;
  DecayEstimate decay;
};

DiagnosticsReport diagnose(const Trajectory& traj, DecayLaw hypothesis);

}  // namespace hyperem
