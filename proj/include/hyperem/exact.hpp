#pragma once

#include <span>
#include <vector>

#include "hyperem/ode.hpp"

namespace hyperem {

/// A: p = n/(n-1), U = K (1 + cosh r)^{-(n-1)}
/// B: p = (n+1)/(n-1), U = K (cosh r)^{-(n-1)}
/// C: p = (n+3)/(n-1), U = K (cosh^2 r - n/(n+1))^{-(n-1)/2}
/// LinearMode: u'' + (n-1) coth r u' + c u = 0, u(0) = 1 (n = 3 only).
enum class Family { A, B, C, LinearMode };
const char* to_string(Family f);

struct Jet {
  double u = 0.0;
  double du = 0.0;
  double d2u = 0.0;
};

class ClosedForm {
 public:
  Family family() const { return family_; }
  int n() const { return n_; }
  /// Exponent p for the ground-state families, spectral parameter c for LinearMode.
  double p() const { return p_; }
  double spectral_parameter() const { return p_; }
  double constant() const { return k_; }
  double printed_constant() const { return printed_; }
  bool printed_constant_matches() const;
  double sign() const { return sign_; }

  Jet eval(double r) const;
  double amplitude() const { return eval(0.0).u; }
  /// The source term f(u) of the equation this form solves.
  double source(double u) const;
  /// |u'' + (n-1) coth r u' + f(u)|, using n u''(0) + f(u) below r = 1e-6.
  double residual(double r) const;

  /// The negative solution -U.
  ClosedForm negated() const;
  /// Same shape with a caller-chosen multiplicative constant (no validation).
  ClosedForm with_constant(double k) const;

  /// Samples on a uniform grid of `points` radii in [0, r_max], Hermite-interpolated.
  Trajectory as_trajectory(double r_max, std::size_t points) const;

 private:
  friend ClosedForm exact_ground_state(int n, Family family);
  friend ClosedForm linear_closed_form(int n, double c);

  double shape(double r, double* d1, double* d2) const;

  Family family_ = Family::B;
  int n_ = 3;
  double p_ = 2.0;
  double k_ = 1.0;
  double printed_ = 1.0;
  double sign_ = 1.0;
};

/// Ground state of family A, B or C. The constant is fixed by requiring a zero
/// residual at r = 1, then checked on [0, 10]; Validation error if that fails.
ClosedForm exact_ground_state(int n, Family family);

/// Constant as printed in the literature for the family.
double printed_ground_state_constant(int n, Family family);

/// Closed-form radial mode for n = 3: u = sinh(kr)/(k sinh r), r/sinh r or sin(kr)/(k sinh r).
ClosedForm linear_closed_form(int n, double c);

double residual_check(const ClosedForm& form, std::span<const double> grid);
/// Residual of a numeric trajectory from dense-output derivatives.
double residual_check(const Trajectory& traj, std::span<const double> grid);

std::vector<double> uniform_grid(double lo, double hi, std::size_t points);

enum class LinearClass { PositiveSlowDecay, PositiveBorderline, OscillatoryInfinite };
const char* to_string(LinearClass c);

/// Compares c with (n-1)^2/4 exactly.
LinearClass classify_linear(int n, double c);

struct LinearSolution {
  Trajectory traj;
  LinearClass cls = LinearClass::PositiveSlowDecay;
};

LinearSolution linear_solve(int n, double c, double r_max = 50.0, double tol = 1e-10);

struct LowerBoundReport {
  bool holds = true;
  double worst_margin = 0.0;  // min of u(r) - bound(r) over samples
  double r_at_worst = 0.0;
  std::size_t samples = 0;
};

/// u(r) >= u(0)/(l2 - l1) (l2 e^{-l1 r} - l1 e^{-l2 r}) - 1e-8 at every sample.
LowerBoundReport linear_lower_bound_check(const Trajectory& traj, int n, double c);

}  // namespace hyperem
