#include <doctest.h>

#include <cmath>

#include "hyperem/diagnostics.hpp"
#include "hyperem/error.hpp"
#include "hyperem/geometry.hpp"
#include "oracles.hpp"

using namespace hyperem;

static IntegrateOptions opts(double r_max, double tol = 1e-10) {
  IntegrateOptions o;
  o.r_max = r_max;
  o.tol = tol;
  return o;
}

TEST_CASE("functionals at a state") {
  const State s{1.2, 0.5, -0.25};
  CHECK(lyapunov_F(2.0, s) == doctest::Approx(0.5 * 0.0625 + 0.125 / 3.0));
  const double sh2 = std::pow(std::sinh(1.2), 2);
  const double ref = oracle::phi(3, 1.2) * lyapunov_F(2.0, s) + sh2 * 0.5 * -0.25 / 3.0;
  CHECK(pohozaev_Psi(3, 2.0, s) == doctest::Approx(ref).epsilon(1e-10));
  CHECK(pohozaev_Psi_scaled(3, 2.0, s) * sh2 == doctest::Approx(ref).epsilon(1e-10));
}

TEST_CASE("energy decreases and the Pohozaev identity holds") {
  const Trajectory t = integrate(Params{3, 2.0, 1.0, 4.0}, 40.0, 1e-10);
  CHECK(F_monotone(t));
  CHECK(weighted_F_nondecreasing(t));
  const PsiIdentityReport rep = psi_derivative_check(t);
  CHECK(rep.checked > 50);
  CHECK(rep.max_rel_error < 1e-4);
}

TEST_CASE("Psi sign by regime") {
  const Trajectory super = integrate(Params{3, 6.0, 1.0, 1.0}, 30.0, 1e-10);
  CHECK(psi_sign(super) == SignPattern::Negative);
  const Trajectory gs = integrate(Params{3, 2.0, 1.0, 6.0}, 15.0, 1e-11);
  CHECK(psi_sign(gs) == SignPattern::Positive);
}

TEST_CASE("theta series") {
  const Trajectory t = integrate(Params{3, 2.0, 1.0, 1.0}, 40.0, 1e-10);
  const auto th = theta_series(t, ThetaVariant::Theta, 20.0, 40.0);
  REQUIRE(!th.empty());
  // u ~ 2/r: Theta ~ -1/r
  CHECK(th.back().value == doctest::Approx(-1.0 / th.back().r).epsilon(0.1));
  const Trajectory osc = integrate(Params{3, 2.0, 1.0, 7.0}, 10.0, 1e-10);
  CHECK_THROWS_AS(theta_series(osc, ThetaVariant::Theta, 0.1, 10.0), Error);
  CHECK(theta_at(t, ThetaVariant::ThetaP, 30.0) ==
        doctest::Approx(t.at(30.0).v / (t.at(30.0).u * t.at(30.0).u)));
}

TEST_CASE("fit_line recovers a line") {
  const LineFit f = fit_line({0, 1, 2, 3, 4}, {1, 3, 5, 7, 9});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.rms < 1e-12);
}

TEST_CASE("decay fits") {
  const Trajectory slow = integrate(Params{3, 2.0, 1.0, 1.0}, 100.0, 1e-10);
  const DecayEstimate d = decay_fit(slow, DecayLaw::PolynomialSlow);
  CHECK(d.law == DecayLaw::PolynomialSlow);
  CHECK(d.fitted_constant == doctest::Approx(c_np(3, 2.0)).epsilon(0.05));

  const Trajectory lin = integrate(Equation::linear(3, 0.75), 1.0, opts(40.0));
  const DecayEstimate e = decay_fit(lin, DecayLaw::ExponentialFast);
  CHECK(e.law == DecayLaw::ExponentialFast);
  CHECK(e.fitted_rate == doctest::Approx(lambda_pair(3, 0.75).lambda1).epsilon(0.02));

  const Trajectory short_run = integrate(Params{3, 2.0, 1.0, 1.0}, 2.0, 1e-10);
  CHECK_THROWS_AS(decay_fit(short_run, DecayLaw::PolynomialSlow), Error);
}

TEST_CASE("functionals need curvature -1") {
  const Trajectory t = integrate(Params{3, 2.0, 2.0, 1.0}, 10.0, 1e-10);
  CHECK_THROWS_AS(psi_sign(t), Error);
}
