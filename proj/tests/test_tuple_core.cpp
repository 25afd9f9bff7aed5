#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "wsieve/arith.hpp"
#include "wsieve/errors.hpp"
#include "wsieve/tuple_core.hpp"
#include "wsieve/tuple_spec.hpp"

using namespace wsieve;
using tuple::Form;

namespace {

tuple::LinearSystem shifts(std::vector<std::int64_t> h) { return tuple::build_shifts(h); }

Errc code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return Errc::DomainError;
}

// Direct count of n mod d with L(n) = 0 mod d.
std::uint64_t brute_rho(const tuple::LinearSystem& L, std::uint64_t d) {
    std::uint64_t c = 0;
    for (std::uint64_t n = 0; n < d; ++n) {
        __int128 prod = 1;
        for (const auto& f : L.forms()) {
            __int128 v = (static_cast<__int128>(f.a) * n + f.b) % static_cast<__int128>(d);
            if (v < 0) v += d;
            prod = prod * v % d;
        }
        if (prod == 0) ++c;
    }
    return c;
}

}  // namespace

TEST_CASE("build_system examples") {
    auto L = tuple::build_system(std::vector<Form>{{1, 0}, {1, 2}});
    CHECK(L.kappa() == 2);
    CHECK(L.discriminant() == 2);
    CHECK(code_of([] { tuple::build_system(std::vector<Form>{{1, 0}, {1, 0}}); }) == Errc::ZeroDiscriminant);
    CHECK(code_of([] { tuple::build_system(std::vector<Form>{{2, 4}}); }) == Errc::GcdViolation);
    CHECK(code_of([] { tuple::build_system(std::vector<Form>{{0, 1}}); }) == Errc::ZeroDiscriminant);
    CHECK(code_of([] { tuple::build_system(std::vector<Form>{{1LL << 31, 1}}); }) == Errc::CoefficientRange);
}

TEST_CASE("discriminant examples") {
    CHECK(tuple::build_system(std::vector<Form>{{1, 0}, {2, 1}}).discriminant() == 2);
    CHECK(tuple::build_system(std::vector<Form>{{1, 0}}).discriminant() == 1);
    CHECK(shifts({0, 2, 6}).discriminant() == 2 * 6 * 4);
    // Products beyond 64 bits stay exact.
    auto big = tuple::build_system(std::vector<Form>{{2147483647, 1}, {2147483629, 3}, {2147483587, 5}});
    CHECK(big.discriminant() == tuple::discriminant(big));
    CHECK(big.discriminant() > mpz_class("1000000000000000000000000"));
}

TEST_CASE("rho examples") {
    auto T = shifts({0, 2});
    CHECK(tuple::rho(T, 2) == 1);
    CHECK(tuple::rho(T, 15) == 4);
    CHECK(tuple::rho(T, 1) == 1);
    CHECK(tuple::rho(T, 4) == brute_rho(T, 4));
    CHECK(tuple::rho(T, 9) == brute_rho(T, 9));
}

TEST_CASE("rho is multiplicative and matches a direct count") {
    arith::ArithmeticTables tab(2000);
    for (auto L : {shifts({0, 2}), shifts({0, 2, 6}),
                   tuple::build_system(std::vector<Form>{{3, 1}, {5, -2}, {7, 4}})}) {
        for (std::uint64_t d1 = 1; d1 <= 60; ++d1) {
            if (!tab.is_squarefree(d1)) continue;
            for (std::uint64_t d2 = 1; d2 <= 60; ++d2) {
                if (!tab.is_squarefree(d2) || std::gcd(d1, d2) != 1) continue;
                const auto d = d1 * d2;
                REQUIRE(tuple::rho(L, d) == tuple::rho(L, d1) * tuple::rho(L, d2));
                REQUIRE(tuple::rho(L, d) == brute_rho(L, d));
                REQUIRE(tuple::roots_mod(L, d).size() == tuple::rho(L, d));
            }
        }
    }
}

TEST_CASE("rho(p) = kappa away from the discriminant") {
    for (auto L : {shifts({0, 2}), shifts({0, 2, 6}), shifts({0, 4, 6, 10}),
                   tuple::build_system(std::vector<Form>{{3, 1}, {5, -2}})}) {
        const auto delta = L.discriminant();
        for (std::uint32_t p : arith::primes_below(1000)) {
            if (p <= static_cast<std::uint32_t>(L.kappa())) continue;
            if (mpz_divisible_ui_p(delta.get_mpz_t(), p)) continue;
            REQUIRE(tuple::rho_prime(L, p) == static_cast<std::uint64_t>(L.kappa()));
        }
    }
}

TEST_CASE("root finder agrees with a residue scan") {
    auto L = tuple::build_system(std::vector<Form>{{6, 1}, {35, -4}, {-11, 9}});
    for (std::uint32_t p : arith::primes_below(400)) {
        std::vector<std::uint64_t> scan;
        for (std::uint64_t n = 0; n < p; ++n)
            for (const auto& f : L.forms())
                if ((static_cast<__int128>(f.a) * n + f.b) % p == 0) {
                    scan.push_back(n);
                    break;
                }
        REQUIRE(tuple::roots_mod_prime(L, p) == scan);
    }
}

TEST_CASE("admissibility") {
    auto bad = tuple::is_admissible(shifts({0, 2, 4}));
    CHECK_FALSE(bad.admissible);
    CHECK(bad.failing_prime == 3u);
    CHECK(tuple::is_admissible(shifts({0, 2, 6})).admissible);
    CHECK(tuple::is_admissible(shifts({0})).admissible);
    auto rep = tuple::is_admissible(tuple::build_system(std::vector<Form>{{1, 0}, {1, 10}}));
    CHECK(rep.admissible);
    CHECK(rep.discriminant_primes == std::vector<std::uint64_t>{5});
    CHECK(rep.discriminant_primes_ok);
}

TEST_CASE("f values") {
    auto T = shifts({0, 2});
    auto f3 = tuple::f_values(T, 3);
    CHECK(f3.f == mpq_class(3, 2));
    CHECK(f3.f_prime == mpq_class(1, 2));
    auto f6 = tuple::f_values(shifts({0}), 6);
    CHECK(f6.f == 6);
    CHECK(f6.f_prime == 2);
    auto f1 = tuple::f_values(T, 1);
    CHECK(f1.f == 1);
    CHECK(f1.f_prime == 1);
    arith::ArithmeticTables tab(3000);
    for (std::uint64_t d = 1; d <= 3000; ++d) {
        if (!tab.is_squarefree(d)) continue;
        const auto fv = tuple::f_values(shifts({0, 2, 6}), d);
        REQUIRE(fv.f * tuple::rho(shifts({0, 2, 6}), d) == d);
    }
    CHECK(code_of([] { tuple::f_values(tuple::build_system(std::vector<Form>{{2, 1}}), 2); }) ==
          Errc::DensityZero);
}

TEST_CASE("V product") {
    CHECK(tuple::V_product_exact(shifts({0, 2}), 5) == mpq_class(1, 6));
    CHECK(tuple::V_product(shifts({0, 2}), 5) == doctest::Approx(1.0 / 6));
    CHECK(tuple::V_product(shifts({0}), 3) == doctest::Approx(0.5));
    CHECK(tuple::V_product(shifts({0, 2}), 2) == 1.0);
    CHECK(code_of([] { tuple::V_product(shifts({0, 2, 4}), 10); }) == Errc::ZeroFactor);
}

TEST_CASE("1/V grows like log^kappa with a frozen constant") {
    // max over z in [10, 1e5] of 1/(V(z) log^kappa z), frozen from this computation.
    const double frozen[] = {0.0, 1.97, 2.90};
    for (int kappa : {1, 2}) {
        auto L = kappa == 1 ? shifts({0}) : shifts({0, 2});
        double worst = 0;
        for (double z = 10; z <= 1e5; z *= 1.25)
            worst = std::max(worst, 1.0 / (tuple::V_product(L, z) * std::pow(std::log(z), kappa)));
        CHECK(worst <= frozen[kappa]);
    }
}

TEST_CASE("H sum") {
    CHECK(tuple::H_sum(shifts({0}), 10).value == doctest::Approx(1.3127).epsilon(1e-4));
    CHECK(tuple::H_sum(shifts({0, 2}), 2).value == 0.0);
    const auto h = tuple::H_sum(shifts({0, 2}), 1000);
    CHECK(std::fabs(h.residual) < 4);
    CHECK(h.residual == doctest::Approx(h.value - 2 * std::log(1000.0)));
}

TEST_CASE("omega_L") {
    auto T = shifts({0, 2});
    CHECK(tuple::omega_L(T, 3) == 2);
    CHECK(tuple::omega_L(T, 7) == 3);
    CHECK(tuple::omega_L(shifts({0}), 1) == 0);
    CHECK(code_of([&] { tuple::omega_L(T, 0); }) == Errc::ZeroValue);
    arith::ArithmeticTables tab(1'000'010);
    for (auto L : {shifts({0, 2}), tuple::build_system(std::vector<Form>{{3, 1}, {-5, 7}})}) {
        for (std::int64_t n = -100000; n <= 200000; n += 7) {
            bool zero = false;
            int expected = 0;
            for (int i = 0; i < L.kappa(); ++i) {
                const auto v = L.form_value(i, n);
                if (v == 0) zero = true;
                else expected += oracle::naive_big_omega(static_cast<std::uint64_t>(std::llabs(v)));
            }
            if (zero) continue;
            REQUIRE(tuple::omega_L(L, n, &tab) == expected);
            REQUIRE(tuple::omega_L(L, n) == expected);
        }
    }
}

TEST_CASE("tuple spec parsing") {
    auto a = tuple::parse_tuple_spec("0,2,6");
    auto b = tuple::parse_tuple_spec(R"({"forms": [[1,0],[1,2],[1,6]]})");
    CHECK(a.forms() == b.forms());
    CHECK(tuple::parse_tuple_spec(tuple::to_json(a)).forms() == a.forms());
    CHECK(code_of([] { tuple::parse_tuple_spec("0,x"); }) == Errc::ParseError);
    CHECK(code_of([] { tuple::parse_tuple_spec(R"({"forms": [[1]]})"); }) == Errc::ParseError);
}
