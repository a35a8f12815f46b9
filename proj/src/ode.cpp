#include "hyperem/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hyperem/error.hpp"

namespace hyperem {

const char* to_string(EventKind kind) {
  return kind == EventKind::Zero ? "Zero" : "CriticalPoint";
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::ReachedRmax: return "ReachedRmax";
    case Termination::Underflow: return "Underflow";
    case Termination::StepFailure: return "StepFailure";
    case Termination::StepLimit: return "StepLimit";
    case Termination::Stopped: return "Stopped";
  }
  return "?";
}

Equation Equation::emden_fowler(int n, double p, double c) {
  return {n, p, Source::Power, Damping::Hyperbolic, c};
}

Equation Equation::linear(int n, double coeff) {
  return {n, coeff, Source::Linear, Damping::Hyperbolic, 1.0};
}

Equation Equation::euclidean(int n, Source source, double value) {
  return {n, value, source, Damping::Euclidean, 1.0};
}

double Equation::source_term(double u) const {
  if (source == Source::Linear) return p * u;
  if (u == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(u), p), u);
}

double Equation::damping_coefficient(double r) const {
  const double m = n - 1;
  if (damping == Damping::Euclidean) return m / r;
  const double cr = curvature * r;
  if (cr < kCothSeriesRadius) return m * (1.0 / r + curvature * cr / 3.0);
  return m * curvature / std::tanh(cr);
}

Derivative Equation::rhs(const State& s) const {
  const double f = source_term(s.u);
  if (s.r == 0.0) return {s.v, -f / n};
  return {s.v, -damping_coefficient(s.r) * s.v - f};
}

Derivative rhs(int n, double p, const State& state) {
  if (state.r < 0.0) throw Error(ErrorKind::Domain, "rhs needs r >= 0");
  return Equation::emden_fowler(n, p).rhs(state);
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

// PI step-size control constants.
constexpr double kSafety = 0.9;
constexpr double kFacMin = 0.2;
constexpr double kFacMax = 10.0;
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;

using Vec = std::array<double, 2>;

Vec eval_rhs(const Equation& eq, double r, const Vec& y) {
  const Derivative d = eq.rhs({r, y[0], y[1]});
  return {d.du, d.dv};
}

double poly(const std::array<double, 5>& c, double t) {
  const double t1 = 1.0 - t;
  return c[0] + t * (c[1] + t1 * (c[2] + t * (c[3] + t1 * c[4])));
}

double poly_derivative(const std::array<double, 5>& c, double t) {
  const double t1 = 1.0 - t;
  const double C = c[3] + t1 * c[4];
  const double dC = -c[4];
  const double B = c[2] + t * C;
  const double dB = C + t * dC;
  const double A = c[1] + t1 * B;
  const double dA = -B + t1 * dB;
  return A + t * dA;
}

double component(const Trajectory::Segment& s, int which, double t) {
  return poly(which == 0 ? s.cu : s.cv, t);
}

// Root of one dense-output component on [ta, tb] where it changes sign.
double refine_root(const Trajectory::Segment& s, int which, double ta, double tb) {
  double fa = component(s, which, ta);
  const double r_scale = std::max(1.0, s.r0 + s.h);
  for (int it = 0; it < 200 && (tb - ta) * s.h > 1e-12 * r_scale; ++it) {
    const double tm = 0.5 * (ta + tb);
    const double fm = component(s, which, tm);
    if ((fm < 0.0) == (fa < 0.0)) {
      ta = tm;
      fa = fm;
    } else {
      tb = tm;
    }
  }
  const double fb = component(s, which, tb);
  double t = 0.5 * (ta + tb);
  if (fb != fa) {
    const double secant = ta - fa * (tb - ta) / (fb - fa);
    if (secant >= ta && secant <= tb) t = secant;
  }
  return t;
}

double series_source(const Equation& eq, double alpha) { return eq.source_term(alpha); }

}  // namespace

double startup_radius(const Equation& eq, double alpha, double tol) {
  double r0 = std::max(1e-6, std::pow(tol, 0.25) * 1e-3);
  if (alpha != 0.0) {
    // Keep the neglected O(r^4) term small when the natural length scale is short.
    const double rate = std::abs(eq.source_term(alpha) / alpha);
    if (rate > 1.0) r0 = std::min(r0, 1e-3 / std::sqrt(rate));
  }
  return r0;
}

Trajectory Trajectory::from_samples(const Equation& eq, double alpha, std::vector<State> samples,
                                    const std::vector<Derivative>& derivatives, double tol) {
  if (samples.size() < 2 || samples.size() != derivatives.size()) {
    throw Error(ErrorKind::InsufficientData, "need >= 2 samples with matching derivatives");
  }
  Trajectory t;
  t.eq_ = eq;
  t.alpha_ = alpha;
  t.tol_ = tol;
  t.r_series_ = -1.0;
  t.r_max_ = samples.back().r;
  t.segments_.reserve(samples.size() - 1);
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    const State& a = samples[k];
    const State& b = samples[k + 1];
    if (!(b.r > a.r)) throw Error(ErrorKind::Domain, "samples must be strictly increasing in r");
    Segment s;
    s.r0 = a.r;
    s.h = b.r - a.r;
    const double hu0 = s.h * derivatives[k].du, hu1 = s.h * derivatives[k + 1].du;
    const double hv0 = s.h * derivatives[k].dv, hv1 = s.h * derivatives[k + 1].dv;
    s.cu = {a.u, b.u - a.u, hu0 - (b.u - a.u), 0.0, 0.0};
    s.cu[3] = s.cu[1] - hu1 - s.cu[2];
    s.cv = {a.v, b.v - a.v, hv0 - (b.v - a.v), 0.0, 0.0};
    s.cv[3] = s.cv[1] - hv1 - s.cv[2];
    t.segments_.push_back(s);
  }
  t.samples_ = std::move(samples);
  return t;
}

std::size_t Trajectory::locate(double r) const {
  auto it = std::upper_bound(segments_.begin(), segments_.end(), r,
                             [](double x, const Segment& s) { return x < s.r0; });
  if (it == segments_.begin()) return 0;
  return static_cast<std::size_t>(std::distance(segments_.begin(), it)) - 1;
}

State Trajectory::at(double r) const {
  if (samples_.empty()) throw Error(ErrorKind::InsufficientData, "empty trajectory");
  const double lo = r_begin(), hi = r_end();
  const double slack = 1e-12 * std::max(1.0, hi);
  if (r < lo - slack || r > hi + slack) {
    throw Error(ErrorKind::Domain, "r outside trajectory range");
  }
  r = std::clamp(r, lo, hi);
  if (r <= r_series_) {
    const double f = series_source(eq_, alpha_);
    return {r, alpha_ - f * r * r / (2.0 * eq_.n), -f * r / eq_.n};
  }
  if (segments_.empty()) return samples_.front();
  const Segment& s = segments_[locate(r)];
  const double t = std::clamp((r - s.r0) / s.h, 0.0, 1.0);
  return {r, poly(s.cu, t), poly(s.cv, t)};
}

Derivative Trajectory::derivative_at(double r) const {
  if (samples_.empty()) throw Error(ErrorKind::InsufficientData, "empty trajectory");
  const double lo = r_begin(), hi = r_end();
  const double slack = 1e-12 * std::max(1.0, hi);
  if (r < lo - slack || r > hi + slack) {
    throw Error(ErrorKind::Domain, "r outside trajectory range");
  }
  r = std::clamp(r, lo, hi);
  if (r <= r_series_) {
    const double f = series_source(eq_, alpha_);
    return {-f * r / eq_.n, -f / eq_.n};
  }
  if (segments_.empty()) return {0.0, 0.0};
  const Segment& s = segments_[locate(r)];
  const double t = std::clamp((r - s.r0) / s.h, 0.0, 1.0);
  return {poly_derivative(s.cu, t) / s.h, poly_derivative(s.cv, t) / s.h};
}

Trajectory integrate(const Equation& eq, double alpha, const IntegrateOptions& opt) {
  if (!(opt.tol >= 1e-13 && opt.tol <= 1e-3)) {
    throw Error(ErrorKind::Domain, "tol must lie in [1e-13, 1e-3]");
  }
  if (!(opt.r_max > 0.0) || !std::isfinite(opt.r_max)) {
    throw Error(ErrorKind::Domain, "r_max must be > 0");
  }
  if (!std::isfinite(alpha)) throw Error(ErrorKind::Domain, "alpha must be finite");
  if (eq.n < 2) throw Error(ErrorKind::Domain, "dimension n must be >= 2");
  if (eq.source == Source::Power && !(eq.p > 0.0)) {
    throw Error(ErrorKind::Domain, "exponent p must be > 0");
  }

  Trajectory traj;
  traj.eq_ = eq;
  traj.alpha_ = alpha;
  traj.tol_ = opt.tol;
  traj.r_max_ = opt.r_max;

  const double r_start = std::min(startup_radius(eq, alpha, opt.tol), 0.5 * opt.r_max);
  traj.r_series_ = r_start;
  const double f0 = eq.source_term(alpha);
  traj.samples_.push_back({0.0, alpha, 0.0});

  double r = r_start;
  Vec y{alpha - f0 * r * r / (2.0 * eq.n), -f0 * r / eq.n};
  traj.samples_.push_back({r, y[0], y[1]});

  const double blowup = 10.0 * std::abs(alpha) + 10.0;
  auto sgn = [](double x) { return x < 0.0 ? -1 : 1; };
  std::array<int, 2> last_sign{sgn(y[0]), sgn(y[1])};

  Vec k1 = eval_rhs(eq, r, y);
  // Initial step guess from the local time scale.
  double h;
  {
    const double sc = opt.tol * std::max(std::abs(y[0]), std::abs(y[1])) + 1e-300;
    const double d0 = std::hypot(y[0], y[1]) / sc;
    const double d1 = std::hypot(k1[0], k1[1]) / sc;
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-3 : 0.01 * d0 / d1;
    h = std::max(std::min(h, opt.h_max), r_start);
  }

  double facold = 1e-4;
  bool last_rejected = false;
  std::size_t accepted = 0;
  Termination term = Termination::ReachedRmax;
  std::vector<Event> step_events;

  while (r < opt.r_max) {
    if (accepted >= opt.max_steps) {
      term = Termination::StepLimit;
      break;
    }
    const bool last = r + std::min(h, opt.h_max) >= opt.r_max;
    h = last ? opt.r_max - r : std::min(h, opt.h_max);
    if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, r)) {
      term = Termination::StepFailure;
      break;
    }

    Vec y2, y3, y4, y5, y6, y7;
    for (int i = 0; i < 2; ++i) y2[i] = y[i] + h * a21 * k1[i];
    const Vec k2 = eval_rhs(eq, r + c2 * h, y2);
    for (int i = 0; i < 2; ++i) y3[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    const Vec k3 = eval_rhs(eq, r + c3 * h, y3);
    for (int i = 0; i < 2; ++i) y4[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    const Vec k4 = eval_rhs(eq, r + c4 * h, y4);
    for (int i = 0; i < 2; ++i) {
      y5[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    }
    const Vec k5 = eval_rhs(eq, r + c5 * h, y5);
    for (int i = 0; i < 2; ++i) {
      y6[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    }
    const double r_new = last ? opt.r_max : r + h;
    const Vec k6 = eval_rhs(eq, r_new, y6);
    for (int i = 0; i < 2; ++i) {
      y7[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    }
    const Vec k7 = eval_rhs(eq, r_new, y7);

    Vec e;
    for (int i = 0; i < 2; ++i) {
      e[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }
    const double scale =
        opt.tol * std::max({std::abs(y[0]), std::abs(y[1]), std::abs(y7[0]), std::abs(y7[1])}) +
        1e-300;
    const double err = std::sqrt(0.5 * ((e[0] / scale) * (e[0] / scale) +
                                        (e[1] / scale) * (e[1] / scale)));

    if (!std::isfinite(err) || !std::isfinite(y7[0]) || !std::isfinite(y7[1])) {
      h *= 0.25;
      last_rejected = true;
      ++traj.rejected_;
      continue;
    }

    const double fac11 = std::pow(std::max(err, 1e-300), kExpo);
    if (err <= 1.0) {
      double fac = fac11 / std::pow(facold, kBeta);
      fac = std::clamp(fac / kSafety, 1.0 / kFacMax, 1.0 / kFacMin);
      double h_next = h / fac;
      facold = std::max(err, 1e-4);
      if (last_rejected) h_next = std::min(h_next, h);
      last_rejected = false;

      Trajectory::Segment seg;
      seg.r0 = r;
      seg.h = r_new - r;
      for (int i = 0; i < 2; ++i) {
        auto& c = i == 0 ? seg.cu : seg.cv;
        c[0] = y[i];
        c[1] = y7[i] - y[i];
        c[2] = h * k1[i] - c[1];
        c[3] = c[1] - h * k7[i] - c[2];
        c[4] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }

      // Sign changes of u and u' on a sub-grid of the step.
      step_events.clear();
      constexpr int kProbe = 4;
      for (int which = 0; which < 2; ++which) {
        double t_prev = 0.0;
        for (int j = 1; j <= kProbe; ++j) {
          const double t = static_cast<double>(j) / kProbe;
          const double val = j == kProbe ? y7[which] : component(seg, which, t);
          const int s = sgn(val);
          if (s != last_sign[which]) {
            const double troot = refine_root(seg, which, t_prev, t);
            Event ev;
            ev.r = seg.r0 + troot * seg.h;
            if (which == 0) {
              ev.kind = EventKind::Zero;
              ev.value = component(seg, 1, troot);
            } else {
              ev.kind = EventKind::CriticalPoint;
              ev.value = component(seg, 0, troot);
            }
            step_events.push_back(ev);
            last_sign[which] = s;
          }
          t_prev = t;
        }
      }
      std::sort(step_events.begin(), step_events.end(),
                [](const Event& a, const Event& b) { return a.r < b.r; });
      for (Event& ev : step_events) {
        ev.index = traj.events_.size();
        traj.events_.push_back(ev);
      }

      traj.segments_.push_back(seg);
      r = r_new;
      y = y7;
      k1 = k7;
      ++accepted;
      traj.samples_.push_back({r, y[0], y[1]});
      h = h_next;

      if (std::abs(y[0]) > blowup) {
        term = Termination::StepFailure;
        break;
      }
      if (alpha != 0.0 && std::max(std::abs(y[0]), std::abs(y[1])) < kUnderflowFloor) {
        term = Termination::Underflow;
        break;
      }
      if (opt.stop && opt.stop(traj.samples_.back(), traj.events_)) {
        term = Termination::Stopped;
        break;
      }
    } else {
      h /= std::min(1.0 / kFacMin, fac11 / kSafety);
      last_rejected = true;
      ++traj.rejected_;
    }
  }
  traj.termination_ = term;
  return traj;
}

Trajectory integrate(const Params& params, double r_max, double tol) {
  params.validate();
  IntegrateOptions opt;
  opt.r_max = r_max;
  opt.tol = tol;
  return integrate(Equation::emden_fowler(params.n, params.p, params.c), params.alpha, opt);
}

Trajectory integrate_euclidean(int n, Source source, double value, double alpha, double r_max,
                               double tol) {
  IntegrateOptions opt;
  opt.r_max = r_max;
  opt.tol = tol;
  return integrate(Equation::euclidean(n, source, value), alpha, opt);
}

State CurvatureRescaling::to_curved(const State& s) const {
  return {s.r / c, s.u * std::pow(c, q), s.v * std::pow(c, q + 1.0)};
}

State CurvatureRescaling::to_unit(const State& s) const {
  return {s.r * c, s.u * std::pow(c, -q), s.v * std::pow(c, -q - 1.0)};
}

CurvatureRescaling rescale_curvature(const Params& params) {
  params.validate();
  if (classify_regime(params.n, params.p).tag == RegimeTag::Linear) {
    throw Error(ErrorKind::UnsupportedRegime, "curvature rescaling does not apply when p = 1");
  }
  CurvatureRescaling out;
  out.c = params.c;
  out.q = 2.0 / (params.p - 1.0);
  out.unit = params;
  out.unit.c = 1.0;
  out.unit.alpha = params.alpha * std::pow(params.c, -out.q);
  return out;
}

double rescaled_amplitude(double c, double p, double unit_amplitude) {
  if (!(c > 0.0)) throw Error(ErrorKind::Domain, "c must be > 0");
  return std::pow(c, 2.0 / (p - 1.0)) * unit_amplitude;
}

}  // namespace hyperem
