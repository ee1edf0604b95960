#include <doctest.h>

#include <cmath>

#include "parlab/quadrature.hpp"
#include "parlab/special.hpp"

using namespace parlab;

TEST_CASE("adaptive GK integrates smooth functions to near machine precision") {
    double v = quadrature::adaptive([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-14);
    CHECK(v == doctest::Approx(2.0).epsilon(1e-13));
    double g = quadrature::adaptive([](double x) { return std::exp(-x * x); }, -8.0, 8.0, 1e-14);
    CHECK(g == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));
}

TEST_CASE("trapezoid refinement on doubly decaying integrands") {
    // INT exp(-e^{-u} - e^{u}) du = 2 K_0(2) (modified Bessel), frozen value
    double v = quadrature::trapezoid_refine(
        [](double u) { return std::exp(-std::exp(-u) - std::exp(u)); }, -30.0, 30.0, 201, 1e-13);
    CHECK(v == doctest::Approx(0.2277877454990669).epsilon(1e-11));
}

TEST_CASE("compensated accumulator survives cancellation") {
    quadrature::Accumulator acc;
    acc.add(1e16);
    for (int i = 0; i < 10; ++i) acc.add(0.1);
    acc.add(-1e16);
    CHECK(acc.value() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("incomplete gamma: values and complement") {
    // P(1/2, x) = erf(sqrt(x))
    for (double x : {0.01, 0.25, 1.0, 5.0, 30.0}) {
        CHECK(special::gamma_p(0.5, x) == doctest::Approx(std::erf(std::sqrt(x))).epsilon(1e-12));
        CHECK(special::gamma_p(2.0, x) + special::gamma_q(2.0, x) ==
              doctest::Approx(1.0).epsilon(1e-14));
    }
    // P(1, x) = 1 - e^{-x}
    CHECK(special::gamma_p(1.0, 0.25) == doctest::Approx(1.0 - std::exp(-0.25)).epsilon(1e-13));
}

TEST_CASE("unit ball volumes and sphere areas") {
    CHECK(special::unit_ball_volume(1) == doctest::Approx(2.0));
    CHECK(special::unit_ball_volume(2) == doctest::Approx(M_PI));
    CHECK(special::unit_ball_volume(3) == doctest::Approx(4.0 * M_PI / 3.0));
    CHECK(special::unit_sphere_area(1) == doctest::Approx(2.0));
    CHECK(special::unit_sphere_area(2) == doctest::Approx(2.0 * M_PI));
    CHECK(special::unit_sphere_area(3) == doctest::Approx(4.0 * M_PI));
}
