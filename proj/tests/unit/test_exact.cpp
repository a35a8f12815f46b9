#include <doctest.h>

#include <cmath>

#include "hyperem/error.hpp"
#include "hyperem/exact.hpp"
#include "oracles.hpp"

using namespace hyperem;

TEST_CASE("family B at n = 3 is 6 sech^2") {
  const ClosedForm f = exact_ground_state(3, Family::B);
  CHECK(f.p() == doctest::Approx(2.0));
  for (double r : {0.0, 0.5, 2.0, 9.0}) {
    CHECK(f.eval(r).u == doctest::Approx(oracle::h3_quadratic_ground_state(r)).epsilon(1e-12));
  }
  CHECK(f.printed_constant_matches());
}

TEST_CASE("closed forms solve their equations") {
  const auto grid = uniform_grid(0.0, 10.0, 201);
  for (int n : {3, 4, 5, 6}) {
    for (Family fam : {Family::A, Family::B, Family::C}) {
      const ClosedForm f = exact_ground_state(n, fam);
      CHECK(residual_check(f, grid) < 1e-9 * std::max(1.0, f.amplitude()));
      // Finite differences as an independent check of eval().
      const double r = 1.3, h = 1e-4;
      const double d2 = (f.eval(r + h).u - 2 * f.eval(r).u + f.eval(r - h).u) / (h * h);
      const double d1 = (f.eval(r + h).u - f.eval(r - h).u) / (2 * h);
      const double u = f.eval(r).u;
      const double res = d2 + (n - 1) / std::tanh(r) * d1 + std::pow(u, f.p());
      CHECK(std::abs(res) < 1e-5 * std::max(1.0, f.amplitude()));
    }
  }
}

TEST_CASE("family A printed constant does not solve the equation") {
  for (int n : {3, 4, 5}) {
    const ClosedForm f = exact_ground_state(n, Family::A);
    CHECK_FALSE(f.printed_constant_matches());
    CHECK(f.with_constant(f.printed_constant()).residual(1.0) > 1.0);
    CHECK(f.constant() == doctest::Approx(std::pow(n * (n - 1.0), n - 1)).epsilon(1e-10));
  }
  CHECK(exact_ground_state(3, Family::A).amplitude() == doctest::Approx(9.0));
  CHECK(exact_ground_state(3, Family::C).amplitude() == doctest::Approx(std::sqrt(24.0)));
}

TEST_CASE("closed form matches the integrator") {
  const ClosedForm f = exact_ground_state(4, Family::C);
  const Trajectory t = integrate(Params{4, f.p(), 1.0, f.amplitude()}, 6.0, 1e-12);
  for (double r : {0.5, 2.0, 5.0}) CHECK(t.at(r).u == doctest::Approx(f.eval(r).u).epsilon(1e-7));
  const ClosedForm neg = f.negated();
  CHECK(neg.eval(1.0).u == doctest::Approx(-f.eval(1.0).u));
  CHECK(neg.residual(1.0) < 1e-9);
}

TEST_CASE("linear modes") {
  CHECK(classify_linear(3, 0.5) == LinearClass::PositiveSlowDecay);
  CHECK(classify_linear(3, 1.0) == LinearClass::PositiveBorderline);
  CHECK(classify_linear(3, 1.5) == LinearClass::OscillatoryInfinite);
  CHECK(classify_linear(4, 2.25) == LinearClass::PositiveBorderline);

  const ClosedForm osc = linear_closed_form(3, 2.0);
  for (double r : {1e-5, 0.7, 4.0}) {
    CHECK(osc.eval(r).u == doctest::Approx(oracle::h3_linear_oscillatory(2.0, r)).epsilon(1e-10));
  }
  CHECK(linear_closed_form(3, 1.0).eval(2.0).u == doctest::Approx(2.0 / std::sinh(2.0)));
  CHECK_THROWS_AS(linear_closed_form(4, 1.0), Error);

  const LinearSolution s = linear_solve(3, 0.5, 30.0);
  CHECK(s.cls == LinearClass::PositiveSlowDecay);
  const LowerBoundReport lb = linear_lower_bound_check(s.traj, 3, 0.5);
  CHECK(lb.holds);
  CHECK(lb.samples > 10);
  CHECK(residual_check(s.traj, uniform_grid(0.5, 29.5, 50)) < 1e-6);
}
