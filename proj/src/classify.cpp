#include "hyperem/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hyperem/error.hpp"
#include "hyperem/parallel.hpp"

namespace hyperem {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kRStart = 40.0;
constexpr double kRLimit = 640.0;
const double kExpansionLimit = std::ldexp(1.0, 60);

void require_subcritical(int n, double p) {
  if (classify_regime(n, p).tag != RegimeTag::Subcritical) {
    throw Error(ErrorKind::UnsupportedRegime, "operation needs a subcritical exponent");
  }
}

bool has_zero(std::span<const Event> events) {
  return std::any_of(events.begin(), events.end(),
                     [](const Event& e) { return e.kind == EventKind::Zero; });
}

std::size_t zeros_in(std::span<const Event> events) {
  return static_cast<std::size_t>(std::count_if(
      events.begin(), events.end(), [](const Event& e) { return e.kind == EventKind::Zero; }));
}

DecayEstimate undetermined(DecayLaw hypothesis) {
  DecayEstimate d;
  d.hypothesis = hypothesis;
  d.fitted_rate = d.fitted_constant = d.residual = kNaN;
  return d;
}

DecayEstimate try_fit(const Trajectory& traj, DecayLaw law) {
  try {
    return decay_fit(traj, law);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InsufficientData) throw;
    return undetermined(law);
  }
}

}  // namespace

const char* to_string(SignClass s) {
  switch (s) {
    case SignClass::PositiveForever: return "PositiveForever";
    case SignClass::NegativeForever: return "NegativeForever";
    case SignClass::SignChanging: return "SignChanging";
    case SignClass::OscillatoryInfinite: return "OscillatoryInfinite";
  }
  return "?";
}

const char* to_string(SeparatrixSide s) {
  switch (s) {
    case SeparatrixSide::Below: return "Below";
    case SeparatrixSide::Above: return "Above";
    case SeparatrixSide::AtSeparatrix: return "AtSeparatrix";
    case SeparatrixSide::NotApplicable: return "NotApplicable";
  }
  return "?";
}

const char* to_string(Side s) {
  switch (s) {
    case Side::Below: return "below";
    case Side::Above: return "above";
    case Side::Undecided: return "undecided";
  }
  return "?";
}

ZeroCount count_zeros(const Trajectory& traj) {
  ZeroCount out;
  for (const Event& e : traj.events()) {
    if (e.kind == EventKind::Zero) out.zeros.push_back(e);
  }
  out.k = out.zeros.size();
  return out;
}

bool zero_finality_certificate(int n, double p, const State& s, double c) {
  if (!(p >= 1.0) || s.r <= 0.0 || s.u == 0.0) return false;
  if (!(s.u * s.v < 0.0)) return false;
  const double half = 0.5 * (n - 1) * c;
  return s.v / s.u > -half && std::pow(std::abs(s.u), p - 1.0) < half * half;
}

std::vector<double> intersections(const Trajectory& a, const Trajectory& b,
                                  std::optional<std::pair<double, double>> window) {
  const Equation& ea = a.equation();
  const Equation& eb = b.equation();
  if (ea.n != eb.n || ea.p != eb.p || ea.source != eb.source || ea.damping != eb.damping ||
      ea.curvature != eb.curvature) {
    throw Error(ErrorKind::Domain, "trajectories solve different equations");
  }
  if (a.alpha() == b.alpha()) {
    throw Error(ErrorKind::DegenerateComparison, "identical initial data");
  }
  double lo = std::max(a.r_begin(), b.r_begin());
  double hi = std::min(a.r_end(), b.r_end());
  if (window) {
    lo = std::max(lo, window->first);
    hi = std::min(hi, window->second);
  }
  if (!(hi > lo)) throw Error(ErrorKind::Domain, "trajectories do not overlap");

  std::vector<double> knots{lo, hi};
  for (const auto* t : {&a, &b}) {
    for (const State& s : t->samples()) {
      if (s.r > lo && s.r < hi) knots.push_back(s.r);
    }
  }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  auto w = [&](double r) { return a.at(r).u - b.at(r).u; };
  auto neg = [](double x) { return x < 0.0; };
  std::vector<double> roots;
  constexpr int kSub = 4;
  double r_prev = lo;
  double w_prev = w(lo);
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    for (int j = 1; j <= kSub; ++j) {
      const double r = j == kSub ? knots[i + 1]
                                 : knots[i] + (knots[i + 1] - knots[i]) * j / kSub;
      const double wr = w(r);
      if (neg(wr) != neg(w_prev)) {
        double x0 = r_prev, x1 = r;
        const bool neg0 = neg(w_prev);
        for (int it = 0; it < 100 && x1 - x0 > 1e-12 * std::max(1.0, x1); ++it) {
          const double xm = 0.5 * (x0 + x1);
          (neg(w(xm)) == neg0 ? x0 : x1) = xm;
        }
        roots.push_back(0.5 * (x0 + x1));
      }
      r_prev = r;
      w_prev = wr;
    }
  }
  return roots;
}

std::size_t count_intersections(const Trajectory& a, const Trajectory& b,
                                std::optional<std::pair<double, double>> window) {
  return intersections(a, b, window).size();
}

Report classify_solution(const Params& params, double r_max, double tol) {
  params.validate();
  if (params.alpha == 0.0) {
    throw Error(ErrorKind::Domain, "alpha = 0 is the trivial solution");
  }
  Report rep;
  rep.params = params;
  rep.regime = classify_regime(params.n, params.p);
  rep.r_max_used = r_max;
  rep.tol_used = tol;

  IntegrateOptions opt;
  opt.r_max = r_max;
  opt.tol = tol;
  const Equation eq = Equation::emden_fowler(params.n, params.p, params.c);
  const Trajectory traj = integrate(eq, params.alpha, opt);
  rep.termination = traj.termination();
  rep.r_end = traj.r_end();

  ZeroCount zc = count_zeros(traj);
  rep.zero_count = zc.k;
  rep.zeros = std::move(zc.zeros);
  rep.zero_count_final =
      zero_finality_certificate(params.n, params.p, traj.samples().back(), params.c);

  const double gap = spectral_gap(params.n) * params.c * params.c;
  switch (rep.regime.tag) {
    case RegimeTag::Sublinear:
      rep.sign_class = SignClass::OscillatoryInfinite;
      rep.decay = try_fit(traj, DecayLaw::SublinearEnvelope);
      break;
    case RegimeTag::Linear:
      if (rep.zero_count == 0) {
        rep.sign_class = params.alpha > 0 ? SignClass::PositiveForever : SignClass::NegativeForever;
      } else {
        rep.sign_class = 1.0 > gap ? SignClass::OscillatoryInfinite : SignClass::SignChanging;
      }
      rep.decay = try_fit(traj, DecayLaw::ExponentialFast);
      break;
    case RegimeTag::Subcritical:
    case RegimeTag::Supercritical: {
      if (rep.zero_count == 0) {
        rep.sign_class = params.alpha > 0 ? SignClass::PositiveForever : SignClass::NegativeForever;
      } else {
        rep.sign_class = SignClass::SignChanging;
      }
      rep.decay = try_fit(traj, DecayLaw::PolynomialSlow);
      if (rep.regime.tag == RegimeTag::Subcritical) {
        const DecayEstimate fast = try_fit(traj, DecayLaw::ExponentialFast);
        const bool fast_detected = fast.law == DecayLaw::ExponentialFast &&
                                   fast.fitted_rate > 0.5 * (params.n - 1) * params.c &&
                                   !(fast.residual >= rep.decay.residual);
        if (fast_detected) rep.decay = fast;
        if (rep.zero_count > 0) {
          rep.separatrix_side = SeparatrixSide::Above;
        } else if (fast_detected || !rep.zero_count_final) {
          rep.separatrix_side = SeparatrixSide::AtSeparatrix;
        } else {
          rep.separatrix_side = SeparatrixSide::Below;
        }
      }
      break;
    }
  }
  return rep;
}

SideDecision separatrix_side(int n, double p, double alpha, double tol) {
  require_subcritical(n, p);
  const double target = c_np(n, p);
  const double q = 1.0 / (p - 1.0);
  const Equation eq = Equation::emden_fowler(n, p);
  SideDecision out;
  for (double R = kRStart; R <= kRLimit; R *= 2.0) {
    bool certified = false;
    bool plateau = false;
    double onset = -1.0;
    IntegrateOptions opt;
    opt.r_max = R;
    opt.tol = tol;
    opt.stop = [&](const State& s, std::span<const Event> events) {
      if (has_zero(events)) return true;
      if (zero_finality_certificate(n, p, s)) {
        certified = true;
        return true;
      }
      const double scaled = std::pow(s.r, q) * s.u;
      if (s.r >= 10.0 && std::abs(scaled - target) <= 0.2 * target) {
        if (onset < 0.0) onset = s.r;
        if (s.r - onset >= 1.0) {
          plateau = true;
          return true;
        }
      } else {
        onset = -1.0;
      }
      return false;
    };
    const Trajectory traj = integrate(eq, alpha, opt);
    out.r_max_used = R;
    if (has_zero(traj.events())) {
      out.side = Side::Above;
      out.reason = "zero";
      return out;
    }
    if (certified || plateau) {
      out.side = Side::Below;
      out.reason = certified ? "certificate" : "plateau";
      return out;
    }
    if (traj.termination() != Termination::ReachedRmax) break;
  }
  out.side = Side::Undecided;
  out.reason = "undecided";
  return out;
}

SeparatrixResult find_separatrix(int n, double p, double lo, double hi, double tol_alpha,
                                 double tol) {
  require_subcritical(n, p);
  if (!(lo > 0.0) || !(hi > lo) || !(tol_alpha > 0.0)) {
    throw Error(ErrorKind::Domain, "need 0 < lo < hi and tol_alpha > 0");
  }
  SeparatrixResult res;
  auto record = [&](double alpha, Side side) {
    ++res.probes;
    res.trace.push_back({res.probes, lo, hi, alpha, to_string(side)});
  };

  bool lo_checked = false;
  Side s = separatrix_side(n, p, hi, tol).side;
  record(hi, s);
  while (s != Side::Above) {
    if (s == Side::Below) {
      lo = hi;
      lo_checked = true;
    }
    hi *= 2.0;
    if (hi > kExpansionLimit) throw Error(ErrorKind::BracketExpansion, "upper bracket exceeds 2^60");
    s = separatrix_side(n, p, hi, tol).side;
    record(hi, s);
  }
  while (!lo_checked) {
    s = separatrix_side(n, p, lo, tol).side;
    record(lo, s);
    if (s == Side::Below) break;
    if (s == Side::Above) hi = lo;
    lo *= 0.5;
    if (lo < 1.0 / kExpansionLimit) throw Error(ErrorKind::BracketExpansion, "lower bracket below 2^-60");
  }

  res.converged = true;
  while (hi - lo >= tol_alpha) {
    const double mid = 0.5 * (lo + hi);
    s = separatrix_side(n, p, mid, tol).side;
    if (s == Side::Above) hi = mid;
    if (s == Side::Below) lo = mid;
    record(mid, s);
    if (s == Side::Undecided) {
      res.converged = false;
      res.lo = lo;
      res.hi = hi;
      res.alpha_star = mid;
      return res;
    }
  }
  res.lo = lo;
  res.hi = hi;
  res.alpha_star = 0.5 * (lo + hi);
  return res;
}

std::vector<FirstZeroRow> first_zero_map(int n, double p, std::vector<double> alphas, double tol) {
  require_subcritical(n, p);
  std::sort(alphas.begin(), alphas.end());
  const Equation eq = Equation::emden_fowler(n, p);
  return parallel_map(alphas.size(), [&](std::size_t i) {
    FirstZeroRow row;
    row.alpha = alphas[i];
    for (double R = kRStart; R <= kRLimit; R *= 2.0) {
      IntegrateOptions opt;
      opt.r_max = R;
      opt.tol = tol;
      opt.stop = [](const State&, std::span<const Event> ev) { return has_zero(ev); };
      const Trajectory traj = integrate(eq, row.alpha, opt);
      row.r_max_used = R;
      for (const Event& e : traj.events()) {
        if (e.kind == EventKind::Zero) {
          row.r_alpha = e.r;
          return row;
        }
      }
      if (traj.termination() != Termination::ReachedRmax) break;
    }
    return row;
  });
}

ZeroCountProbe probe_zero_count(int n, double p, double alpha, std::size_t cap, double tol) {
  const Equation eq = Equation::emden_fowler(n, p);
  ZeroCountProbe out;
  out.alpha = alpha;
  for (double R = kRStart; R <= kRLimit; R *= 2.0) {
    bool certified = false;
    IntegrateOptions opt;
    opt.r_max = R;
    opt.tol = tol;
    opt.stop = [&](const State& s, std::span<const Event> ev) {
      if (zeros_in(ev) >= cap) return true;
      certified = zero_finality_certificate(n, p, s);
      return certified;
    };
    const Trajectory traj = integrate(eq, alpha, opt);
    out.zeros = zeros_in(traj.events());
    out.final = certified;
    if (certified || out.zeros >= cap || traj.termination() != Termination::ReachedRmax) break;
  }
  return out;
}

ThresholdResult zero_count_threshold(int n, double p, std::size_t k, double alpha_hi,
                                     double tol_alpha, double tol) {
  require_subcritical(n, p);
  if (k == 0) throw Error(ErrorKind::Domain, "k must be >= 1");
  if (!(alpha_hi > 0.0) || !(tol_alpha > 0.0)) {
    throw Error(ErrorKind::Domain, "need alpha_hi > 0 and tol_alpha > 0");
  }
  ThresholdResult res;
  res.k = k;
  double hi = alpha_hi;
  while (probe_zero_count(n, p, hi, k, tol).zeros < k) {
    hi *= 2.0;
    if (hi > kExpansionLimit) throw Error(ErrorKind::BracketExpansion, "upper bracket exceeds 2^60");
  }
  double lo = 0.5 * hi;
  while (probe_zero_count(n, p, lo, k, tol).zeros >= k) {
    lo *= 0.5;
    if (lo < 1.0 / kExpansionLimit) throw Error(ErrorKind::BracketExpansion, "lower bracket below 2^-60");
  }

  constexpr int kChecks = 8;
  std::vector<double> grid(kChecks);
  for (int i = 0; i < kChecks; ++i) grid[i] = lo + (hi - lo) * i / (kChecks - 1);
  res.monotonicity_probes = parallel_map(grid.size(), [&](std::size_t i) {
    return probe_zero_count(n, p, grid[i], k + 1, tol);
  });
  bool reached = false;
  bool undecided = false;
  for (const ZeroCountProbe& pr : res.monotonicity_probes) {
    const bool at_least_k = pr.zeros >= k;
    if (reached && !at_least_k) res.ambiguous = true;
    reached |= at_least_k;
    undecided |= !pr.final && pr.zeros < k + 1;
  }
  for (std::size_t i = 1; i < res.monotonicity_probes.size(); ++i) {
    if (res.monotonicity_probes[i].zeros < res.monotonicity_probes[i - 1].zeros) {
      res.ambiguous = true;
    }
  }
  res.lo = lo;
  res.hi = hi;
  if (res.ambiguous) {
    res.alpha_k = kNaN;
    res.note = "EXPLORATORY: zero count is not monotone in alpha on the bracket";
    return res;
  }
  for (const ZeroCountProbe& pr : res.monotonicity_probes) {
    if (pr.zeros >= k) {
      hi = std::min(hi, pr.alpha);
    } else {
      lo = std::max(lo, pr.alpha);
    }
  }
  while (hi - lo >= tol_alpha) {
    const double mid = 0.5 * (lo + hi);
    (probe_zero_count(n, p, mid, k, tol).zeros >= k ? hi : lo) = mid;
  }
  res.lo = lo;
  res.hi = hi;
  res.alpha_k = 0.5 * (lo + hi);
  res.note = undecided ? "EXPLORATORY: some probes reached R_max without a certified count"
                       : "EXPLORATORY: assumes the zero count is nondecreasing in alpha";
  return res;
}

}  // namespace hyperem
