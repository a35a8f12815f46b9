#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "hyperem/geometry.hpp"

namespace hyperem {

struct State {
  double r = 0.0;
  double u = 0.0;
  double v = 0.0;  // u'
};

struct Derivative {
  double du = 0.0;
  double dv = 0.0;
};

enum class EventKind { Zero, CriticalPoint };

/// A zero of u (value = u' there) or a zero of u' (value = u there).
struct Event {
  EventKind kind = EventKind::Zero;
  double r = 0.0;
  double value = 0.0;
  std::size_t index = 0;
};

enum class Termination {
  ReachedRmax,
  Underflow,   // max(|u|, |u'|) fell below kUnderflowFloor
  StepFailure, // step size underflow, non-finite state or blow-up guard
  StepLimit,   // IntegrateOptions::max_steps accepted steps taken
  Stopped,     // IntegrateOptions::stop returned true
};

const char* to_string(EventKind kind);
const char* to_string(Termination t);

inline constexpr double kUnderflowFloor = 1e-280;
/// Below this radius coth r is replaced by 1/r + r/3.
inline constexpr double kCothSeriesRadius = 1e-8;

enum class Damping { Hyperbolic, Euclidean };
enum class Source { Power, Linear };

/// u'' + D(r) u' + f(u) = 0 with D = (n-1) c coth(c r) (hyperbolic, curvature -c^2)
/// or (n-1)/r (Euclidean), and f(u) = |u|^{p-1} u or f(u) = coeff * u.
struct Equation {
  int n = 3;
  double p = 2.0;  // exponent for Source::Power, coefficient for Source::Linear
  Source source = Source::Power;
  Damping damping = Damping::Hyperbolic;
  double curvature = 1.0;

  static Equation emden_fowler(int n, double p, double c = 1.0);
  static Equation linear(int n, double coeff);
  static Equation euclidean(int n, Source source, double value);

  double source_term(double u) const;
  /// Coefficient of u' for r > 0.
  double damping_coefficient(double r) const;
  Derivative rhs(const State& s) const;
};

/// Right-hand side of the regular radial problem on H^n (curvature -1).
Derivative rhs(int n, double p, const State& state);

struct IntegrateOptions {
  double r_max = 50.0;
  double tol = 1e-10;
  std::size_t max_steps = 1'000'000;
  double h_max = 0.5;
  /// Checked after every accepted step; true ends the run with Termination::Stopped.
  std::function<bool(const State&, std::span<const Event>)> stop;
};

class Trajectory {
 public:
  /// One accepted step with its continuous extension
  /// y(r0 + t h) = c0 + t (c1 + (1-t) (c2 + t (c3 + (1-t) c4))).
  struct Segment {
    double r0 = 0.0;
    double h = 0.0;
    std::array<double, 5> cu{};
    std::array<double, 5> cv{};
  };

  Trajectory() = default;

  /// Builds a trajectory with cubic Hermite interpolation between given samples.
  static Trajectory from_samples(const Equation& eq, double alpha, std::vector<State> samples,
                                 const std::vector<Derivative>& derivatives, double tol = 0.0);

  const Equation& equation() const { return eq_; }
  double alpha() const { return alpha_; }
  Params params() const { return {eq_.n, eq_.p, eq_.curvature, alpha_}; }
  std::span<const State> samples() const { return samples_; }
  std::span<const Event> events() const { return events_; }
  std::span<const Segment> segments() const { return segments_; }
  Termination termination() const { return termination_; }
  double tol() const { return tol_; }
  double r_max_requested() const { return r_max_; }
  double r_begin() const { return samples_.empty() ? 0.0 : samples_.front().r; }
  double r_end() const { return samples_.empty() ? 0.0 : samples_.back().r; }
  std::size_t accepted_steps() const { return segments_.size(); }
  std::size_t rejected_steps() const { return rejected_; }

  /// Dense-output state at r in [r_begin, r_end].
  State at(double r) const;
  /// Derivative of the dense output at r.
  Derivative derivative_at(double r) const;

 private:
  friend Trajectory integrate(const Equation&, double, const IntegrateOptions&);

  std::size_t locate(double r) const;

  Equation eq_;
  double alpha_ = 0.0;
  double r_series_ = 0.0;  // [0, r_series_] is covered by the Taylor startup
  double tol_ = 0.0;
  double r_max_ = 0.0;
  std::vector<State> samples_;
  std::vector<Segment> segments_;
  std::vector<Event> events_;
  Termination termination_ = Termination::ReachedRmax;
  std::size_t rejected_ = 0;
};

/// Radius below which the Taylor startup replaces numerical integration.
double startup_radius(const Equation& eq, double alpha, double tol);

/// Core integrator: Dormand-Prince 5(4) with PI step control, dense output and
/// event location. Never throws for integration failures; see termination().
Trajectory integrate(const Equation& eq, double alpha, const IntegrateOptions& options);

/// Integrates the hyperbolic problem described by params.
Trajectory integrate(const Params& params, double r_max, double tol);

/// Same contract with coth r replaced by 1/r (the Euclidean Lane-Emden profile).
Trajectory integrate_euclidean(int n, Source source, double value, double alpha, double r_max,
                               double tol);

/// Maps a curvature -c^2 problem onto the curvature -1 problem via
/// u_c(r) = c^{2/(p-1)} u(c r).
struct CurvatureRescaling {
  Params unit;      // equivalent c = 1 instance
  double c = 1.0;
  double q = 0.0;   // 2/(p-1)

  /// State of the curvature -c^2 solution from the unit solution's state at c*r.
  State to_curved(const State& unit_state) const;
  State to_unit(const State& curved_state) const;
};

CurvatureRescaling rescale_curvature(const Params& params);

/// Ground-state amplitude bound c^{2/(p-1)} U(0) for curvature -c^2.
double rescaled_amplitude(double c, double p, double unit_amplitude);

}  // namespace hyperem
