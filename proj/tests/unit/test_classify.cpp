#include <doctest.h>

#include <cmath>

#include "hyperem/classify.hpp"
#include "hyperem/error.hpp"
#include "oracles.hpp"

using namespace hyperem;

TEST_CASE("classification on either side of the ground state") {
  const Report below = classify_solution({3, 2.0, 1.0, 1.0});
  CHECK(below.sign_class == SignClass::PositiveForever);
  CHECK(below.zero_count == 0);
  CHECK(below.separatrix_side == SeparatrixSide::Below);
  CHECK(below.decay.law == DecayLaw::PolynomialSlow);

  const Report above = classify_solution({3, 2.0, 1.0, 7.0});
  CHECK(above.sign_class == SignClass::SignChanging);
  CHECK(above.zero_count == 1);
  CHECK(above.zero_count_final);
  CHECK(above.separatrix_side == SeparatrixSide::Above);

  const Report neg = classify_solution({3, 2.0, 1.0, -1.0});
  CHECK(neg.sign_class == SignClass::NegativeForever);

  CHECK_THROWS_AS(classify_solution({3, 2.0, 1.0, 0.0}), Error);
}

TEST_CASE("regimes without a separatrix") {
  const Report super = classify_solution({3, 6.0, 1.0, 1.0});
  CHECK(super.separatrix_side == SeparatrixSide::NotApplicable);
  CHECK(super.decay.fitted_rate == doctest::Approx(0.2).epsilon(0.1));
  const Report sub = classify_solution({3, 0.5, 1.0, 1.0}, 10.0);
  CHECK(sub.sign_class == SignClass::OscillatoryInfinite);
  CHECK(sub.zero_count > 10);
}

TEST_CASE("zero finality certificate") {
  // n = 3: need u v < 0, v/u > -1, |u|^{p-1} < 1
  CHECK(zero_finality_certificate(3, 2.0, {10.0, 0.1, -0.05}));
  CHECK_FALSE(zero_finality_certificate(3, 2.0, {10.0, 0.1, 0.05}));
  CHECK_FALSE(zero_finality_certificate(3, 2.0, {10.0, 0.1, -0.2}));
  CHECK_FALSE(zero_finality_certificate(3, 2.0, {10.0, 1.5, -0.1}));
  CHECK(zero_finality_certificate(3, 2.0, {10.0, -0.1, 0.05}));
  // Curvature -4 widens both bounds.
  CHECK(zero_finality_certificate(3, 2.0, {10.0, 1.5, -0.1}, 2.0));
}

TEST_CASE("intersections") {
  const Trajectory a = integrate(Params{3, 2.0, 1.0, 1.0}, 30.0, 1e-10);
  const Trajectory b = integrate(Params{3, 2.0, 1.0, 2.0}, 30.0, 1e-10);
  // Both approach 2/r; the smaller one overtakes once.
  CHECK(count_intersections(a, b) == 1);
  CHECK(count_intersections(a, b, std::pair{0.0, 3.0}) == 0);
  const Trajectory c = integrate(Params{3, 2.0, 1.0, 7.0}, 30.0, 1e-10);
  const auto xs = intersections(a, c);
  REQUIRE(!xs.empty());
  CHECK(std::abs(a.at(xs[0]).u - c.at(xs[0]).u) < 1e-8);
  CHECK_THROWS_AS(intersections(a, a), Error);
  const Trajectory other = integrate(Params{3, 3.0, 1.0, 2.0}, 30.0, 1e-10);
  CHECK_THROWS_AS(intersections(a, other), Error);
}

TEST_CASE("separatrix side decisions") {
  CHECK(separatrix_side(3, 2.0, 5.5).side == Side::Below);
  CHECK(separatrix_side(3, 2.0, 6.5).side == Side::Above);
  CHECK_THROWS_AS(separatrix_side(3, 6.0, 1.0), Error);
}

TEST_CASE("separatrix bisection with a wide bracket") {
  // The ground state for n = 3, p = 2 is 6 / cosh^2 r.
  const SeparatrixResult r = find_separatrix(3, 2.0, 0.5, 1.0, 1e-3);
  CHECK(r.converged);
  CHECK(r.alpha_star == doctest::Approx(oracle::h3_quadratic_ground_state(0.0)).epsilon(1e-3));
  CHECK(r.trace.front().decision == "below");
  CHECK(r.hi - r.lo <= 1e-3);
}

TEST_CASE("first zero map is decreasing") {
  const auto rows = first_zero_map(3, 2.0, {50.0, 7.0, 20.0, 3.0});
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].alpha == 3.0);
  CHECK_FALSE(rows[0].r_alpha.has_value());
  CHECK(*rows[1].r_alpha > *rows[2].r_alpha);
  CHECK(*rows[2].r_alpha > *rows[3].r_alpha);
}

TEST_CASE("zero count probe and threshold") {
  const ZeroCountProbe p = probe_zero_count(3, 2.0, 50.0, 10, 1e-10);
  CHECK(p.final);
  CHECK(p.zeros >= 1);
  const ThresholdResult t = zero_count_threshold(3, 2.0, 1, 10.0, 1e-3);
  CHECK_FALSE(t.ambiguous);
  CHECK(t.alpha_k == doctest::Approx(6.0).epsilon(1e-3));
}
