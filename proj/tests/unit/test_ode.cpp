#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hyperem/error.hpp"
#include "hyperem/ode.hpp"
#include "oracles.hpp"

using namespace hyperem;

static IntegrateOptions opts(double r_max, double tol = 1e-10) {
  IntegrateOptions o;
  o.r_max = r_max;
  o.tol = tol;
  return o;
}

namespace {

double first_zero(const Trajectory& t) {
  for (const Event& e : t.events()) {
    if (e.kind == EventKind::Zero) return e.r;
  }
  return NAN;
}

}  // namespace

TEST_CASE("euclidean linear profile is sin r / r") {
  const Trajectory t = integrate_euclidean(3, Source::Linear, 1.0, 1.0, 10.0, 1e-12);
  CHECK(first_zero(t) == doctest::Approx(std::numbers::pi).epsilon(1e-11));
  for (double r : {0.5, 2.0, 5.0, 9.5}) {
    CHECK(t.at(r).u == doctest::Approx(std::sin(r) / r).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("euclidean Lane-Emden index 5") {
  const Trajectory t = integrate_euclidean(3, Source::Power, 5.0, 1.0, 30.0, 1e-12);
  CHECK(t.termination() == Termination::ReachedRmax);
  for (double r : {0.01, 1.0, 7.0, 30.0}) {
    CHECK(t.at(r).u == doctest::Approx(oracle::lane_emden5(r)).epsilon(1e-8));
  }
}

TEST_CASE("hyperbolic linear mode above the gap") {
  const double c = 2.0;
  const Trajectory t = integrate(Equation::linear(3, c), 1.0, opts(12.0, 1e-12));
  for (double r : {0.2, 1.5, 4.0, 11.0}) {
    CHECK(t.at(r).u == doctest::Approx(oracle::h3_linear_oscillatory(c, r)).epsilon(1e-8).scale(1e-6));
  }
  CHECK(first_zero(t) == doctest::Approx(std::numbers::pi).epsilon(1e-10));
}

TEST_CASE("ground state with p = 2, n = 3") {
  const Trajectory t = integrate(Params{3, 2.0, 1.0, 6.0}, 8.0, 1e-12);
  for (double r : {0.1, 1.0, 3.0, 6.0}) {
    CHECK(t.at(r).u == doctest::Approx(oracle::h3_quadratic_ground_state(r)).epsilon(1e-7));
  }
}

TEST_CASE("dense output derivative matches the equation") {
  const Trajectory t = integrate(Params{4, 1.5, 1.0, 3.0}, 20.0, 1e-10);
  for (double r : {0.7, 3.3, 12.1}) {
    const State s = t.at(r);
    const Derivative d = t.derivative_at(r);
    const Derivative f = rhs(4, 1.5, s);
    CHECK(d.du == doctest::Approx(s.v).epsilon(1e-6).scale(1e-8));
    CHECK(d.dv == doctest::Approx(f.dv).epsilon(1e-5).scale(1e-7));
  }
}

TEST_CASE("events alternate and are refined") {
  const Trajectory t = integrate(Params{3, 2.0, 1.0, 50.0}, 30.0, 1e-10);
  for (const Event& e : t.events()) {
    const State s = t.at(e.r);
    if (e.kind == EventKind::Zero) {
      CHECK(std::abs(s.u) < 1e-9 * 50.0);
    } else {
      CHECK(std::abs(s.v) < 1e-9 * 50.0);
    }
  }
}

TEST_CASE("integration options are validated") {
  CHECK_THROWS_AS(integrate(Params{3, 2.0, 1.0, 1.0}, 10.0, 1e-2), Error);
  CHECK_THROWS_AS(integrate(Params{3, 2.0, 1.0, 1.0}, -1.0, 1e-10), Error);
  CHECK_THROWS_AS(integrate(Params{3, -1.0, 1.0, 1.0}, 10.0, 1e-10), Error);
}

TEST_CASE("trivial solution and stop callback") {
  const Trajectory zero = integrate(Params{3, 2.0, 1.0, 0.0}, 5.0, 1e-10);
  CHECK(zero.r_end() == doctest::Approx(5.0));
  CHECK(zero.at(2.0).u == 0.0);

  IntegrateOptions opt;
  opt.r_max = 50.0;
  opt.stop = [](const State& s, std::span<const Event>) { return s.r > 3.0; };
  const Trajectory t = integrate(Equation::emden_fowler(3, 2.0), 1.0, opt);
  CHECK(t.termination() == Termination::Stopped);
  CHECK(t.r_end() < 4.0);
}

TEST_CASE("step limit terminates cleanly") {
  IntegrateOptions opt;
  opt.r_max = 50.0;
  opt.max_steps = 50;
  const Trajectory t = integrate(Equation::emden_fowler(3, 0.5), 1.0, opt);
  CHECK(t.termination() == Termination::StepLimit);
  CHECK(t.accepted_steps() == 50);
}

TEST_CASE("curvature rescaling") {
  CHECK_THROWS_AS(rescale_curvature(Params{3, 1.0, 2.0, 1.0}), Error);
  const Params curved{3, 2.0, 2.0, 5.0};
  const CurvatureRescaling m = rescale_curvature(curved);
  CHECK(m.q == doctest::Approx(2.0));
  CHECK(m.unit.alpha == doctest::Approx(5.0 / 4.0));
  const Trajectory tc = integrate(curved, 10.0, 1e-11);
  const Trajectory tu = integrate(m.unit, 20.0, 1e-11);
  for (double r : {0.3, 2.0, 7.5}) {
    const State mapped = m.to_curved(tu.at(2.0 * r));
    CHECK(mapped.r == doctest::Approx(r));
    CHECK(mapped.u == doctest::Approx(tc.at(r).u).epsilon(1e-7));
    CHECK(mapped.v == doctest::Approx(tc.at(r).v).epsilon(1e-6).scale(1e-6));
    const State back = m.to_unit(mapped);
    CHECK(back.u == doctest::Approx(tu.at(2.0 * r).u).epsilon(1e-12));
  }
  CHECK(rescaled_amplitude(2.0, 2.0, 6.0) == doctest::Approx(24.0));
}

TEST_CASE("from_samples interpolates") {
  std::vector<State> s;
  std::vector<Derivative> d;
  for (int i = 0; i <= 100; ++i) {
    const double r = 0.05 * i;
    s.push_back({r, std::exp(-r), -std::exp(-r)});
    d.push_back({-std::exp(-r), std::exp(-r)});
  }
  const Trajectory t = Trajectory::from_samples(Equation::emden_fowler(3, 2.0), 1.0, s, d);
  CHECK(t.at(2.525).u == doctest::Approx(std::exp(-2.525)).epsilon(1e-7));
  CHECK_THROWS_AS(t.at(6.0), Error);
}
