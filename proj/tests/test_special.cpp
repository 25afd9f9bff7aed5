#include <doctest.h>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "wsieve/errors.hpp"
#include "wsieve/quadrature.hpp"
#include "wsieve/special.hpp"

using namespace wsieve;
using namespace wsieve::special;

TEST_CASE("digamma at 1/2 and 1") {
    CHECK(std::fabs(digamma(0.5) + kEulerGamma + 2 * std::log(2.0)) <= 1e-12);
    CHECK(digamma(0.5) == doctest::Approx(-1.9635100260214235).epsilon(1e-14));
    CHECK(std::fabs(digamma(1.0) + kEulerGamma) <= 1e-14);
}

TEST_CASE("digamma against Boost") {
    for (double x = 0.1; x <= 1e4; x *= 1.07) {
        const double want = boost::math::digamma(x);
        REQUIRE(digamma(x) == doctest::Approx(want).epsilon(1e-12).scale(1.0));
    }
    for (double x : {-0.5, -1.5, -2.25, -7.75})
        CHECK(digamma(x) == doctest::Approx(boost::math::digamma(x)).epsilon(1e-12));
}

TEST_CASE("log gamma against the standard library") {
    for (double x = 0.1; x <= 1e4; x *= 1.09) REQUIRE(log_gamma(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-13).scale(1.0));
    CHECK(log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(log_gamma(101.0) == doctest::Approx(363.73937555556347).epsilon(1e-14));
}

TEST_CASE("poles") {
    for (double x : {0.0, -1.0, -4.0}) {
        try {
            digamma(x);
            FAIL("expected a pole");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::PoleError);
        }
        CHECK_THROWS_AS(log_gamma(x), Error);
    }
}

TEST_CASE("upper incomplete gamma") {
    const double g = upper_incomplete_gamma(2, 100);
    CHECK(std::fabs(g / (100 * std::exp(-100.0)) - 1) <= 0.02);
    CHECK(g == doctest::Approx(101 * std::exp(-100.0)).epsilon(1e-13));
    for (double s : {0.5, 1.0, 2.5, 7.0, 30.0})
        for (double x : {0.1, 1.0, 5.0, 20.0, 80.0})
            REQUIRE(upper_incomplete_gamma(s, x) ==
                    doctest::Approx(boost::math::tgamma(s, x)).epsilon(1e-12));
    CHECK(log_upper_incomplete_gamma(3, 800) ==
          doctest::Approx(2 * std::log(800.0) - 800 + std::log(1 + 2 / 800.0 + 2 / 640000.0)).epsilon(1e-13));
}

TEST_CASE("quadrature") {
    const double v = quad::integrate([](double x) { return std::exp(-x * x); }, 0, 3, 1e-13, {}).value;
    CHECK(v == doctest::Approx(std::sqrt(kPi) / 2 * std::erf(3.0)).epsilon(1e-13));
    const double k[] = {0.5};
    const double kink = quad::integrate([](double x) { return std::fabs(x - 0.5); }, 0, 1, 1e-14, k).value;
    CHECK(kink == doctest::Approx(0.25).epsilon(1e-14));
    const double logv = quad::integrate([](double x) { return std::log(x); }, 0, 1, 1e-10, {}).value;
    CHECK(logv == doctest::Approx(-1).epsilon(1e-9));
    CHECK_THROWS_AS(quad::integrate([](double x) { return 1 / x; }, 0, 1, 1e-12, {}, 50), Error);
}
