#include "hyperem/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "hyperem/error.hpp"
#include "hyperem/geometry.hpp"

namespace hyperem {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_power_unit(const Trajectory& traj) {
  const Equation& eq = traj.equation();
  if (eq.source != Source::Power || eq.damping != Damping::Hyperbolic) {
    throw Error(ErrorKind::UnsupportedRegime, "functional needs the hyperbolic power equation");
  }
  if (eq.curvature != 1.0) {
    throw Error(ErrorKind::Domain, "functional is defined for curvature -1; rescale first");
  }
}

int sign_of(double x) { return x < 0.0 ? -1 : (x > 0.0 ? 1 : 0); }

constexpr int kSub = 4;

// Classic RK4 from s over a signed distance in kSub substeps; out receives the kSub + 1 nodes.
void rk4_path(const Equation& eq, State s, double dist, std::array<State, kSub + 1>& out) {
  const double h = dist / kSub;
  out[0] = s;
  for (int i = 0; i < kSub; ++i) {
    const Derivative k1 = eq.rhs(s);
    const Derivative k2 = eq.rhs({s.r + h / 2, s.u + h / 2 * k1.du, s.v + h / 2 * k1.dv});
    const Derivative k3 = eq.rhs({s.r + h / 2, s.u + h / 2 * k2.du, s.v + h / 2 * k2.dv});
    const Derivative k4 = eq.rhs({s.r + h, s.u + h * k3.du, s.v + h * k3.dv});
    s.u += h / 6 * (k1.du + 2 * k2.du + 2 * k3.du + k4.du);
    s.v += h / 6 * (k1.dv + 2 * k2.dv + 2 * k3.dv + k4.dv);
    s.r += h;
    out[i + 1] = s;
  }
}

std::pair<double, double> final_branch_window(const Trajectory& traj, double lo, double hi) {
  for (const Event& e : traj.events()) {
    if (e.kind == EventKind::Zero && e.r < hi) lo = std::max(lo, e.r);
  }
  return {lo, hi};
}

std::size_t samples_in(const Trajectory& traj, double lo, double hi) {
  std::size_t k = 0;
  for (const State& s : traj.samples()) k += (s.r >= lo && s.r <= hi);
  return k;
}

}  // namespace

double lyapunov_F(double p, const State& s) {
  return 0.5 * s.v * s.v + std::pow(std::abs(s.u), p + 1.0) / (p + 1.0);
}

double pohozaev_Psi(int n, double p, const State& s) {
  if (s.r <= 0.0) return 0.0;
  return phi_n(n, s.r) * lyapunov_F(p, s) + sinh_pow(n, s.r) * s.u * s.v / (p + 1.0);
}

double pohozaev_Psi_scaled(int n, double p, const State& s) {
  if (s.r <= 0.0) return 0.0;
  return phi_ratio(n, s.r) * lyapunov_F(p, s) + s.u * s.v / (p + 1.0);
}

PsiIdentityReport psi_derivative_check(const Trajectory& traj) {
  require_power_unit(traj);
  PsiIdentityReport rep;
  const auto samples = traj.samples();
  const bool all_zero = std::all_of(samples.begin(), samples.end(),
                                    [](const State& s) { return s.u == 0.0 && s.v == 0.0; });
  if (all_zero) return rep;
  if (samples.size() < 100) {
    throw Error(ErrorKind::InsufficientData, "psi_derivative_check needs >= 100 samples");
  }
  const Equation& eq = traj.equation();
  const int n = eq.n;
  const double p = eq.p;

  int last_sign = 0;
  double last_r = 0.0;
  for (const Trajectory::Segment& seg : traj.segments()) {
    const double m = seg.r0 + 0.5 * seg.h;
    const double delta = std::min({1e-3 * std::max(1.0, m), seg.h / 8.0, m / 4.0});
    const State mid = traj.at(m);
    std::array<State, kSub + 1> fwd, bwd;
    rk4_path(eq, mid, delta, fwd);
    rk4_path(eq, mid, -delta, bwd);
    const State& lo = bwd.back();
    const State& hi = fwd.back();
    // RK4 loses its order near the kink of |u|^{p-1}u at u = 0 when p < 1.
    if (p < 1.0 && std::abs(mid.u) < 4.0 * delta * std::abs(mid.v)) continue;

    // Everything is divided by (sinh m)^{n-1}.
    const double ls_m = log_sinh(m);
    auto weight = [&](double r) { return std::exp((n - 1) * (log_sinh(r) - ls_m)); };
    auto psi_w = [&](const State& s) { return pohozaev_Psi_scaled(n, p, s) * weight(s.r); };
    auto rhs_w = [&](const State& s) { return s.v * s.v * psi_p_scaled(n, p, s.r) * weight(s.r); };

    const double D = (psi_w(hi) - psi_w(lo)) / (2.0 * delta);
    // Composite Simpson over the 2 kSub RK4 intervals.
    double E = rhs_w(lo) + rhs_w(hi);
    for (int j = 1; j < 2 * kSub; ++j) {
      const State& node = j < kSub ? bwd[kSub - j] : fwd[j - kSub];
      E += (j % 2 ? 4.0 : 2.0) * rhs_w(node);
    }
    E /= 6.0 * kSub;
    const double sigma = 0.5 * mid.v * mid.v + std::pow(std::abs(mid.u), p + 1.0) / (p + 1.0) +
                         std::abs(mid.u * mid.v) / (p + 1.0);
    if (!(std::abs(E) * delta > 1e-10 * sigma)) continue;

    ++rep.checked;
    const double rel = std::abs(D - E) / std::abs(E);
    if (rel > rep.max_rel_error) {
      rep.max_rel_error = rel;
      rep.r_at_max = m;
    }
    const int s = sign_of(D);
    if (last_sign != 0 && s != 0 && s != last_sign) rep.sign_changes.emplace_back(last_r, m);
    if (s != 0) {
      last_sign = s;
      last_r = m;
    }
  }
  return rep;
}

bool F_monotone(const Trajectory& traj, double slack) {
  const double p = traj.equation().p;
  const auto samples = traj.samples();
  if (samples.empty()) return true;
  const double allowance = slack * lyapunov_F(p, samples.front());
  for (std::size_t k = 1; k < samples.size(); ++k) {
    if (lyapunov_F(p, samples[k]) > lyapunov_F(p, samples[k - 1]) + allowance) return false;
  }
  return true;
}

bool weighted_F_nondecreasing(const Trajectory& traj, double slack) {
  const int n = traj.equation().n;
  const double p = traj.equation().p;
  double prev = -std::numeric_limits<double>::infinity();
  for (const State& s : traj.samples()) {
    if (s.r <= 0.0) continue;
    const double F = lyapunov_F(p, s);
    if (F <= 0.0) continue;
    const double lw = 2.0 * (n - 1) * log_sinh(s.r) + std::log(F);
    if (lw < prev - slack) return false;
    prev = std::max(prev, lw);
  }
  return true;
}

const char* to_string(SignPattern s) {
  switch (s) {
    case SignPattern::Negative: return "negative";
    case SignPattern::Positive: return "positive";
    case SignPattern::Zero: return "zero";
    case SignPattern::Mixed: return "mixed";
  }
  return "?";
}

SignPattern psi_sign(const Trajectory& traj, double r_min) {
  require_power_unit(traj);
  const int n = traj.equation().n;
  const double p = traj.equation().p;
  bool neg = false, pos = false;
  for (const State& s : traj.samples()) {
    if (s.r < r_min) continue;
    const double v = pohozaev_Psi_scaled(n, p, s);
    neg |= v < 0.0;
    pos |= v > 0.0;
  }
  if (neg && pos) return SignPattern::Mixed;
  if (neg) return SignPattern::Negative;
  if (pos) return SignPattern::Positive;
  return SignPattern::Zero;
}

bool psi_nondecreasing(const Trajectory& traj, double r_min, double slack) {
  require_power_unit(traj);
  const int n = traj.equation().n;
  const double p = traj.equation().p;
  std::vector<double> vals;
  for (const State& s : traj.samples()) {
    if (s.r >= r_min) vals.push_back(pohozaev_Psi(n, p, s));
  }
  double scale = 0.0;
  for (double v : vals) scale = std::max(scale, std::abs(v));
  for (std::size_t k = 1; k < vals.size(); ++k) {
    if (vals[k] < vals[k - 1] - slack * scale) return false;
  }
  return true;
}

std::vector<SeriesPoint> theta_series(const Trajectory& traj, ThetaVariant variant, double r_lo,
                                      double r_hi) {
  if (!(r_hi >= r_lo)) throw Error(ErrorKind::Domain, "empty theta window");
  for (const Event& e : traj.events()) {
    if (e.kind == EventKind::Zero && e.r >= r_lo && e.r <= r_hi) {
      throw Error(ErrorKind::Domain, "theta window contains a zero of u");
    }
  }
  std::vector<SeriesPoint> out;
  for (const State& s : traj.samples()) {
    if (s.r < r_lo || s.r > r_hi) continue;
    if (s.u == 0.0) throw Error(ErrorKind::Domain, "u vanishes inside the theta window");
    out.push_back({s.r, theta_at(traj, variant, s.r)});
  }
  return out;
}

std::vector<SeriesPoint> theta_series(const Trajectory& traj, ThetaVariant variant) {
  double lo = traj.r_begin();
  for (const Event& e : traj.events()) {
    if (e.kind == EventKind::Zero) lo = e.r;
  }
  if (lo > traj.r_begin()) lo = std::nextafter(lo, std::numeric_limits<double>::infinity());
  return theta_series(traj, variant, lo, traj.r_end());
}

double theta_at(const Trajectory& traj, ThetaVariant variant, double r) {
  const State s = traj.at(r);
  if (s.u == 0.0) throw Error(ErrorKind::Domain, "theta undefined where u = 0");
  if (variant == ThetaVariant::Theta) return s.v / s.u;
  return s.v / traj.equation().source_term(s.u);
}

const char* to_string(DecayLaw law) {
  switch (law) {
    case DecayLaw::PolynomialSlow: return "PolynomialSlow";
    case DecayLaw::ExponentialFast: return "ExponentialFast";
    case DecayLaw::SublinearEnvelope: return "SublinearEnvelope";
    case DecayLaw::Undetermined: return "Undetermined";
  }
  return "?";
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t m = x.size();
  if (m < 2 || y.size() != m) throw Error(ErrorKind::InsufficientData, "fit needs >= 2 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorKind::InsufficientData, "fit abscissae are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double e = y[i] - (f.slope * x[i] + f.intercept);
    ss += e * e;
  }
  f.rms = std::sqrt(ss / m);
  return f;
}

DecayEstimate decay_fit(const Trajectory& traj, DecayLaw hypothesis,
                        std::optional<std::pair<double, double>> window) {
  if (hypothesis == DecayLaw::Undetermined) {
    throw Error(ErrorKind::Domain, "decay_fit needs a concrete law hypothesis");
  }
  if (traj.samples().size() < 2) throw Error(ErrorKind::InsufficientData, "empty trajectory");
  DecayEstimate est;
  est.hypothesis = hypothesis;
  const double r_end = traj.r_end();
  double lo = window ? window->first : std::max(10.0, 0.5 * r_end);
  double hi = window ? window->second : r_end;
  lo = std::max(lo, traj.r_begin());
  hi = std::min(hi, r_end);

  if (hypothesis == DecayLaw::SublinearEnvelope) {
    std::vector<double> x, y;
    for (const Event& e : traj.events()) {
      if (e.kind != EventKind::CriticalPoint || e.r < lo || e.r > hi || e.value == 0.0) continue;
      x.push_back(e.r);
      y.push_back(std::log(std::abs(e.value)));
    }
    if (x.size() < 5) {
      throw Error(ErrorKind::InsufficientData, "envelope fit needs >= 5 critical points");
    }
    const LineFit f = fit_line(x, y);
    est.fitted_rate = -f.slope;
    est.fitted_constant = std::exp(f.intercept);
    est.residual = f.rms;
    est.points = x.size();
  } else {
    std::tie(lo, hi) = final_branch_window(traj, lo, hi);
    if (!(hi > lo) || samples_in(traj, lo, hi) < 50) {
      throw Error(ErrorKind::InsufficientData, "decay fit window holds fewer than 50 samples");
    }
    constexpr int kGrid = 256;
    std::vector<double> r(kGrid), u(kGrid);
    for (int i = 0; i < kGrid; ++i) {
      r[i] = lo + (hi - lo) * i / (kGrid - 1);
      u[i] = traj.at(r[i]).u;
      if (u[i] == 0.0 || !std::isfinite(u[i])) {
        throw Error(ErrorKind::InsufficientData, "u vanishes inside the fit window");
      }
    }
    const double sign = u.back() < 0.0 ? -1.0 : 1.0;
    std::vector<double> logu(kGrid);
    for (int i = 0; i < kGrid; ++i) logu[i] = std::log(std::abs(u[i]));
    est.points = kGrid;

    if (hypothesis == DecayLaw::PolynomialSlow) {
      const double p = traj.equation().p;
      if (traj.equation().source != Source::Power || !(p > 1.0)) {
        throw Error(ErrorKind::Domain, "polynomial decay law needs p > 1");
      }
      std::vector<double> logr(kGrid), z(kGrid);
      for (int i = 0; i < kGrid; ++i) {
        logr[i] = std::log(r[i]);
        z[i] = std::pow(std::abs(u[i]), 1.0 - p);
      }
      const LineFit loglog = fit_line(logr, logu);
      est.fitted_rate = -loglog.slope;
      est.residual = loglog.rms;
      const LineFit lin = fit_line(r, z);
      est.fitted_constant =
          lin.slope > 0.0 ? sign * std::pow(lin.slope, -1.0 / (p - 1.0)) : kNaN;
    } else {
      const LineFit f = fit_line(r, logu);
      est.fitted_rate = -f.slope;
      est.fitted_constant = sign * std::exp(f.intercept);
      est.residual = f.rms;
    }
  }
  est.r_lo = lo;
  est.r_hi = hi;
  const bool ok = std::isfinite(est.residual) && est.residual <= kDecayResidualThreshold &&
                  std::isfinite(est.fitted_rate) && std::isfinite(est.fitted_constant);
  est.law = ok ? hypothesis : DecayLaw::Undetermined;
  return est;
}

DiagnosticsReport diagnose(const Trajectory& traj, DecayLaw hypothesis) {
  DiagnosticsReport rep;
  rep.F_monotone = F_monotone(traj);
  rep.Psi_sign = psi_sign(traj);
  try {
    rep.Psi_identity_max_err = psi_derivative_check(traj).max_rel_error;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InsufficientData) throw;
    rep.Psi_identity_max_err = kNaN;
  }
  try {
    rep.decay = decay_fit(traj, hypothesis);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InsufficientData) throw;
    rep.decay.hypothesis = hypothesis;
    rep.decay.law = DecayLaw::Undetermined;
    rep.decay.fitted_rate = rep.decay.fitted_constant = rep.decay.residual = kNaN;
  }
  return rep;
}

}  // namespace hyperem
