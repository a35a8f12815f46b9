#include <doctest.h>

#include <cmath>

#include "hyperem/error.hpp"
#include "hyperem/geometry.hpp"
#include "oracles.hpp"

using namespace hyperem;

TEST_CASE("regime boundaries") {
  CHECK(classify_regime(3, 0.5).tag == RegimeTag::Sublinear);
  CHECK(classify_regime(3, 1.0).tag == RegimeTag::Linear);
  CHECK(classify_regime(3, 2.0).tag == RegimeTag::Subcritical);
  CHECK(classify_regime(3, 6.0).tag == RegimeTag::Supercritical);
  const Regime crit = classify_regime(3, 5.0);
  CHECK(crit.tag == RegimeTag::Supercritical);
  CHECK(crit.critical_boundary);
  CHECK(classify_regime(2, 1e6).tag == RegimeTag::Subcritical);
  CHECK(std::isinf(critical_exponent(2)));
  CHECK(critical_exponent(4) == doctest::Approx(3.0));
}

TEST_CASE("params validation") {
  CHECK_THROWS_AS((Params{1, 2.0, 1.0, 1.0}.validate()), Error);
  CHECK_THROWS_AS((Params{3, 0.0, 1.0, 1.0}.validate()), Error);
  CHECK_THROWS_AS((Params{3, 2.0, 0.0, 1.0}.validate()), Error);
  CHECK_THROWS_AS((Params{3, 2.0, 1.0, NAN}.validate()), Error);
  CHECK_NOTHROW((Params{3, 2.0, 1.0, -4.0}.validate()));
}

TEST_CASE("spectral gap and lambda pair") {
  CHECK(spectral_gap(3) == 1.0);
  CHECK(spectral_gap(4) == 2.25);
  for (double c : {0.1, 0.5, 0.99}) {
    const LambdaPair lp = lambda_pair(3, c);
    const double disc = std::sqrt(4.0 - 4.0 * c);
    CHECK(lp.lambda1 == doctest::Approx((2.0 - disc) / 2.0).epsilon(1e-14));
    CHECK(lp.lambda2 == doctest::Approx((2.0 + disc) / 2.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(lambda_pair(3, 1.5), Error);
}

TEST_CASE("phi_n against quadrature") {
  for (int n : {2, 3, 4, 5, 7}) {
    for (double r : {1e-3, 0.1, 0.7, 2.0, 6.0, 15.0}) {
      const double ref = oracle::phi(n, r);
      CHECK(phi_n(n, r) == doctest::Approx(ref).epsilon(1e-9));
      CHECK(log_phi_n(n, r) == doctest::Approx(std::log(ref)).epsilon(1e-9));
      CHECK(phi_ratio(n, r) == doctest::Approx(ref / std::pow(std::sinh(r), n - 1)).epsilon(1e-9));
    }
  }
  // Closed form for n = 3.
  const double r = 3.3;
  CHECK(phi_n(3, r) == doctest::Approx(0.5 * (std::sinh(r) * std::cosh(r) - r)).epsilon(1e-13));
  CHECK(phi_n(3, 0.0) == 0.0);
  CHECK(std::isfinite(log_phi_n(3, 800.0)));
  CHECK(log_sinh(800.0) == doctest::Approx(800.0 - std::log(2.0)));
}

TEST_CASE("psi_p and its root") {
  for (auto [n, p] : {std::pair{3, 2.0}, {3, 1.5}, {4, 5.0 / 3.0}, {5, 2.0}}) {
    for (double r : {0.3, 1.0, 2.5}) {
      const double ref = oracle::psi(n, p, r);
      CHECK(psi_p(n, p, r) == doctest::Approx(ref).epsilon(1e-8).scale(1.0));
      CHECK(psi_p_scaled(n, p, r) * std::pow(std::sinh(r), n - 1) ==
            doctest::Approx(ref).epsilon(1e-8).scale(1.0));
    }
    const double R = find_R_np(n, p);
    const double ref = oracle::bisect([&](double r) { return oracle::psi(n, p, r); }, 1e-3, 50.0);
    CHECK(R == doctest::Approx(ref).epsilon(1e-8));
    CHECK(psi_p(n, p, 0.5 * R) > 0.0);
    CHECK(psi_p(n, p, 2.0 * R) < 0.0);
  }
  CHECK_THROWS_AS(find_R_np(3, 6.0), Error);
}

TEST_CASE("decay constant") {
  CHECK(c_np(3, 2.0) == doctest::Approx(2.0));
  CHECK(c_np(3, 6.0) == doctest::Approx(std::pow(2.0 / 5.0, 0.2)));
}
