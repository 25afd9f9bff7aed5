#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "wsieve/delay_ode.hpp"
#include "wsieve/errors.hpp"
#include "wsieve/special.hpp"

using namespace wsieve;

namespace {

Errc code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return Errc::DomainError;
}

}  // namespace

TEST_CASE("c_kappa") {
    CHECK(dde::c_kappa(1).value == doctest::Approx(0.5614594836).epsilon(1e-10));
    CHECK(dde::c_kappa(2).value == doctest::Approx(0.1576183758).epsilon(1e-9));
    const auto c100 = dde::c_kappa(100);
    CHECK(c100.log_value == doctest::Approx(-100 * special::kEulerGamma - std::lgamma(101.0)).epsilon(1e-14));
    CHECK(c100.value == doctest::Approx(std::exp(c100.log_value)));
    CHECK(dde::c_kappa(400).log_value < -2000);
}

TEST_CASE("closed form for kappa = 1") {
    const auto J = dde::solve_j(1, 2);
    double worst = 0;
    for (int i = 1; i <= 10000; ++i) {
        const double w = 1 + i / 10000.0;
        worst = std::max(worst, std::fabs(J.q(w) - (w * (2 - std::log(w)) - 1)));
    }
    CHECK(worst <= 1e-10);
    CHECK(J.q(1.5) == doctest::Approx(1.391802337838).epsilon(1e-12));
    CHECK(dde::eval_j(J, 0.5, 0) == doctest::Approx(0.2807297).epsilon(1e-7));
    CHECK(dde::eval_j(J, 1.5, 0) == doctest::Approx(0.5614594836 * 1.391802337838).epsilon(1e-9));
    CHECK(dde::eval_j(J, -1, 0) == 0.0);
    CHECK(dde::eval_j(J, -1, 1) == 0.0);
    CHECK(code_of([&] { dde::eval_j(J, 2.5, 0); }) == Errc::OutOfRange);
}

TEST_CASE("normalization and initial segment") {
    for (int k : {1, 2, 5, 17, 60}) {
        const auto J = dde::solve_j(k, std::min(k + 2.0, 3.0));
        CHECK(J.q(1.0) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(J.q(0.5) == doctest::Approx(std::pow(0.5, k)).epsilon(1e-13));
        CHECK(J.q(0.0) == 0.0);
    }
}

TEST_CASE("kappa = 2 against the RK4 oracle") {
    // Frozen from the RK4 oracle at step 1e-5.
    const double frozen = 2.17540701351326;
    const auto J = dde::solve_j(2, 4);
    CHECK(J.q(1.5) == doctest::Approx(frozen).epsilon(1e-12));
    const oracle::Rk4Dde rk(2, 4, 2000);
    for (double w = 0.25; w <= 4; w += 0.25)
        REQUIRE(J.q(w) == doctest::Approx(static_cast<double>(rk.q(w))).epsilon(1e-10));
}

TEST_CASE("larger kappa against the RK4 oracle") {
    for (int k : {10, 40}) {
        const auto J = dde::solve_j(k, k);
        const oracle::Rk4Dde rk(k, k, 4000);
        for (double w = 0.5; w <= k; w += k / 16.0)
            REQUIRE(J.q(w) == doctest::Approx(static_cast<double>(rk.q(w))).epsilon(1e-8));
    }
}

TEST_CASE("residual, continuity and monotonicity") {
    for (int k : {1, 2, 5, 10, 40}) {
        const auto J = dde::solve_j(k, k + 2);
        CHECK(J.max_residual(1000) <= 1e-10);
        for (int m = 1; m <= k + 1; ++m) {
            const double left = J.q(m - 1e-12), right = J.q(m + 1e-12);
            REQUIRE(std::fabs(left - right) <= 1e-10 * std::fabs(J.q(m)));
        }
        double prev = 0;
        for (int i = 1; i <= 1000; ++i) {
            const double w = (k + 2.0) * i / 1000;
            REQUIRE(J.q_prime(w) >= -1e-10 * J.q(w));
            REQUIRE(J.q(w) >= prev * (1 - 1e-12));
            prev = J.q(w);
        }
    }
}

TEST_CASE("degree independence") {
    for (int k : {3, 20}) {
        const auto a = dde::solve_j(k, k, {1e-10, 16});
        const auto b = dde::solve_j(k, k, {1e-10, 32});
        for (double w = 0.3; w <= k; w += 0.37) REQUIRE(a.q(w) == doctest::Approx(b.q(w)).epsilon(1e-10));
    }
}

TEST_CASE("log-domain evaluation for large kappa") {
    const auto J = dde::solve_j(200, 10);
    CHECK(J.log_j(1.0) == doctest::Approx(dde::c_kappa(200).log_value).epsilon(1e-13));
    CHECK(std::isfinite(J.log_j(9.5)));
    CHECK(J.j(9.5) >= 0);
}

TEST_CASE("json round trip") {
    const auto J = dde::solve_j(6, 6);
    const auto K = dde::JFunction::from_json(J.to_json());
    for (double w = 0.1; w <= 6; w += 0.29) REQUIRE(K.q(w) == J.q(w));
    CHECK(K.kappa() == 6);
}

TEST_CASE("solver preconditions") {
    CHECK_THROWS_AS(dde::solve_j(5, 0.5), Error);
    CHECK_THROWS_AS(dde::solve_j(5, 8), Error);
    CHECK_THROWS_AS(dde::solve_j(0, 1), Error);
    CHECK_THROWS_AS(dde::solve_j(dde::kMaxKappa + 1, 2), Error);
}

TEST_CASE("saddle-point main term") {
    const dde::SaddleParams p100{100};
    CHECK(p100.u() == doctest::Approx(100 - 1.0 / 9));
    CHECK(dde::saddle_j_prime(p100, 0).value == doctest::Approx(1 / std::sqrt(100 * special::kPi)).epsilon(1e-12));
    const double w = 15;
    CHECK(dde::saddle_j_prime(p100, w).value < std::exp(-w * w / 100) / std::sqrt(100 * special::kPi));

    // Direct evaluation of the main term at kappa = 40, w = 5.
    const double d = -2.0 / 9, k = 40;
    const double direct = std::exp(-25 / k) / std::sqrt(special::kPi * k) *
                          (1 - 2 * d * 5 / k - 4.0 / 9 * 125 / (k * k));
    const auto s = dde::saddle_j_prime(dde::SaddleParams{40}, 5);
    CHECK(s.value == doctest::Approx(direct).epsilon(1e-14));
    CHECK(s.value == doctest::Approx(0.048744).epsilon(1e-4));
    CHECK(s.envelope == doctest::Approx((1 / k + std::pow(5.0, 6) / std::pow(k, 4)) / std::sqrt(special::kPi * k)));
    CHECK(code_of([] { dde::saddle_j_prime(dde::SaddleParams{40}, 10); }) == Errc::OutOfValidity);
}

TEST_CASE("saddle agrees with the solver within three envelopes") {
    const dde::SaddleParams sp{40};
    const auto J = dde::solve_j(40, sp.u());
    const double end = std::pow(40.0, 0.6);
    double worst = 0;
    for (int i = 0; i <= 2000; ++i) {
        const double w = end * i / 2000;
        const auto s = dde::saddle_j_prime(sp, w);
        worst = std::max(worst, std::fabs(s.value - J.j_prime(sp.u() - w)) / s.envelope);
    }
    CHECK(worst <= 3);
}

TEST_CASE("tail inequality") {
    for (int k : {10, 20, 40, 60}) {
        const double u = k - 1.0 / 9;
        const auto J = dde::solve_j(k, u);
        const auto rep = dde::tail_check(J, u);
        CHECK(rep.max_violation <= 0);
        CHECK(rep.min_margin_near_start > 0);
    }
}
