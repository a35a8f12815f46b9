#include "hyperem/exact.hpp"

#include <cmath>
#include <limits>

#include "hyperem/error.hpp"
#include "hyperem/geometry.hpp"

namespace hyperem {

namespace {

constexpr double kResidualSmallR = 1e-6;
constexpr double kValidationTol = 1e-9;

// g = h^{-m} with h, h', h'' given.
double inverse_power(double h, double dh, double d2h, double m, double* d1, double* d2) {
  const double g = std::pow(h, -m);
  *d1 = -m * g / h * dh;
  *d2 = m * (m + 1.0) * g / (h * h) * dh * dh - m * g / h * d2h;
  return g;
}

}  // namespace

const char* to_string(Family f) {
  switch (f) {
    case Family::A: return "A";
    case Family::B: return "B";
    case Family::C: return "C";
    case Family::LinearMode: return "LinearMode";
  }
  return "?";
}

const char* to_string(LinearClass c) {
  switch (c) {
    case LinearClass::PositiveSlowDecay: return "PositiveSlowDecay";
    case LinearClass::PositiveBorderline: return "PositiveBorderline";
    case LinearClass::OscillatoryInfinite: return "OscillatoryInfinite";
  }
  return "?";
}

double ClosedForm::shape(double r, double* d1, double* d2) const {
  const double m = n_ - 1.0;
  const double ch = std::cosh(r), sh = std::sinh(r);
  switch (family_) {
    case Family::A: return inverse_power(1.0 + ch, sh, ch, m, d1, d2);
    case Family::B: return inverse_power(ch, sh, ch, m, d1, d2);
    case Family::C: {
      const double a = n_ / (n_ + 1.0);
      return inverse_power(ch * ch - a, std::sinh(2.0 * r), 2.0 * std::cosh(2.0 * r), 0.5 * m, d1,
                           d2);
    }
    case Family::LinearMode: break;
  }
  // n = 3 linear mode: u = w / sinh r with w'' = (1 - c) w.
  const double c = p_;
  const double kappa = 1.0 - c;
  if (r < 1e-3) {
    const double a2 = -c / 6.0;
    const double a4 = -c * (2.0 - c) / 120.0 + c / 36.0;
    const double r2 = r * r;
    *d1 = 2.0 * a2 * r + 4.0 * a4 * r2 * r;
    *d2 = 2.0 * a2 + 12.0 * a4 * r2;
    return 1.0 + a2 * r2 + a4 * r2 * r2;
  }
  double w, dw;
  if (kappa > 0.0) {
    const double k = std::sqrt(kappa);
    w = std::sinh(k * r) / k;
    dw = std::cosh(k * r);
  } else if (kappa == 0.0) {
    w = r;
    dw = 1.0;
  } else {
    const double k = std::sqrt(-kappa);
    w = std::sin(k * r) / k;
    dw = std::cos(k * r);
  }
  const double d2w = kappa * w;
  const double inv = 1.0 / sh;
  const double coth = ch * inv;
  *d1 = (dw - w * coth) * inv;
  *d2 = (d2w - 2.0 * dw * coth + w * (2.0 * coth * coth - 1.0)) * inv;
  return w * inv;
}

Jet ClosedForm::eval(double r) const {
  if (r < 0.0) throw Error(ErrorKind::Domain, "closed form needs r >= 0");
  double d1 = 0.0, d2 = 0.0;
  const double g = shape(r, &d1, &d2);
  const double s = sign_ * k_;
  return {s * g, s * d1, s * d2};
}

double ClosedForm::source(double u) const {
  if (family_ == Family::LinearMode) return p_ * u;
  if (u == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(u), p_), u);
}

double ClosedForm::residual(double r) const {
  const Jet j = eval(r);
  if (r < kResidualSmallR) return std::abs(n_ * j.d2u + source(j.u));
  return std::abs(j.d2u + (n_ - 1) / std::tanh(r) * j.du + source(j.u));
}

bool ClosedForm::printed_constant_matches() const {
  return std::abs(k_ - printed_) <= 1e-9 * std::abs(printed_);
}

ClosedForm ClosedForm::negated() const {
  ClosedForm f = *this;
  f.sign_ = -sign_;
  return f;
}

ClosedForm ClosedForm::with_constant(double k) const {
  ClosedForm f = *this;
  f.k_ = k;
  return f;
}

Trajectory ClosedForm::as_trajectory(double r_max, std::size_t points) const {
  if (points < 2 || !(r_max > 0.0)) throw Error(ErrorKind::Domain, "need >= 2 points and r_max > 0");
  std::vector<State> states;
  std::vector<Derivative> ders;
  states.reserve(points);
  ders.reserve(points);
  for (double r : uniform_grid(0.0, r_max, points)) {
    const Jet j = eval(r);
    states.push_back({r, j.u, j.du});
    ders.push_back({j.du, j.d2u});
  }
  const Equation eq = family_ == Family::LinearMode ? Equation::linear(n_, p_)
                                                    : Equation::emden_fowler(n_, p_);
  const double alpha = states.front().u;
  return Trajectory::from_samples(eq, alpha, std::move(states), ders);
}

double printed_ground_state_constant(int n, Family family) {
  const double m = n - 1.0;
  switch (family) {
    case Family::A: return std::pow(n * n * m, m);
    case Family::B: return std::pow(n * m, m / 2.0);
    case Family::C: return std::pow(n * m / (n + 1.0), m / 4.0);
    case Family::LinearMode: break;
  }
  throw Error(ErrorKind::Domain, "linear modes have no printed constant");
}

ClosedForm exact_ground_state(int n, Family family) {
  if (family == Family::LinearMode) {
    throw Error(ErrorKind::Domain, "use linear_closed_form for linear modes");
  }
  if (n < 3) throw Error(ErrorKind::UnsupportedRegime, "closed-form ground states need n >= 3");
  ClosedForm f;
  f.family_ = family;
  f.n_ = n;
  const double m = n - 1.0;
  f.p_ = family == Family::A ? n / m : family == Family::B ? (n + 1.0) / m : (n + 3.0) / m;
  f.printed_ = printed_ground_state_constant(n, family);

  double d1 = 0.0, d2 = 0.0;
  const double g = f.shape(1.0, &d1, &d2);
  const double lg = d2 + m / std::tanh(1.0) * d1;
  const double kp = -lg / std::pow(g, f.p_);
  if (!(kp > 0.0)) throw Error(ErrorKind::Validation, "shape admits no positive constant");
  f.k_ = std::pow(kp, 1.0 / (f.p_ - 1.0));

  const double res = residual_check(f, uniform_grid(0.0, 10.0, 201));
  if (!(res < kValidationTol * std::max(1.0, f.amplitude()))) {
    throw Error(ErrorKind::Validation, "closed form fails the residual check");
  }
  return f;
}

ClosedForm linear_closed_form(int n, double c) {
  if (n != 3) throw Error(ErrorKind::UnsupportedRegime, "linear closed form is available for n = 3");
  if (!(c > 0.0)) throw Error(ErrorKind::Domain, "c must be > 0");
  ClosedForm f;
  f.family_ = Family::LinearMode;
  f.n_ = n;
  f.p_ = c;
  f.k_ = f.printed_ = 1.0;
  return f;
}

double residual_check(const ClosedForm& form, std::span<const double> grid) {
  double worst = 0.0;
  for (double r : grid) worst = std::max(worst, form.residual(r));
  return worst;
}

double residual_check(const Trajectory& traj, std::span<const double> grid) {
  const Equation& eq = traj.equation();
  double worst = 0.0;
  for (double r : grid) {
    const State s = traj.at(r);
    const Derivative d = traj.derivative_at(r);
    const double f = eq.source_term(s.u);
    const double res = r < kResidualSmallR ? std::abs(eq.n * d.dv + f)
                                           : std::abs(d.dv + eq.damping_coefficient(r) * s.v + f);
    worst = std::max(worst, res);
  }
  return worst;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
  std::vector<double> g(points);
  if (points == 1) {
    g[0] = lo;
    return g;
  }
  for (std::size_t i = 0; i < points; ++i) {
    g[i] = i + 1 == points ? hi : lo + (hi - lo) * static_cast<double>(i) / (points - 1);
  }
  return g;
}

LinearClass classify_linear(int n, double c) {
  if (!(c > 0.0)) throw Error(ErrorKind::Domain, "c must be > 0");
  const double gap = spectral_gap(n);
  if (c < gap) return LinearClass::PositiveSlowDecay;
  if (c == gap) return LinearClass::PositiveBorderline;
  return LinearClass::OscillatoryInfinite;
}

LinearSolution linear_solve(int n, double c, double r_max, double tol) {
  LinearSolution out;
  out.cls = classify_linear(n, c);
  IntegrateOptions opt;
  opt.r_max = r_max;
  opt.tol = tol;
  out.traj = integrate(Equation::linear(n, c), 1.0, opt);
  return out;
}

LowerBoundReport linear_lower_bound_check(const Trajectory& traj, int n, double c) {
  if (classify_linear(n, c) != LinearClass::PositiveSlowDecay) {
    throw Error(ErrorKind::UnsupportedRegime, "lower bound needs 0 < c < (n-1)^2/4");
  }
  const LambdaPair lp = lambda_pair(n, c);
  const double u0 = traj.samples().front().u;
  LowerBoundReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (const State& s : traj.samples()) {
    const double bound = u0 / (lp.lambda2 - lp.lambda1) *
                         (lp.lambda2 * std::exp(-lp.lambda1 * s.r) -
                          lp.lambda1 * std::exp(-lp.lambda2 * s.r));
    const double margin = s.u - bound;
    if (margin < rep.worst_margin) {
      rep.worst_margin = margin;
      rep.r_at_worst = s.r;
    }
    ++rep.samples;
  }
  rep.holds = rep.worst_margin >= -1e-8;
  return rep;
}

}  // namespace hyperem
