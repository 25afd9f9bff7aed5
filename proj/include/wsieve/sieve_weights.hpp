#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "wsieve/delay_ode.hpp"
#include "wsieve/moments.hpp"
#include "wsieve/tuple_core.hpp"

namespace wsieve::sieve {

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

/// Richert weights: a_1 = b, a_p = -b for primes p < y, a_p = -log(z/p)/log z
/// for primes y <= p < z, and a_d = 0 otherwise.
struct RichertWeights {
    double b = 1;
    double y = 2;
    double z = 3;

    RichertWeights(double b_, double y_, double z_);
};

double richert_a(const RichertWeights& W, std::uint64_t d);

/// Squarefree nu < xi with every prime factor below z_prime, ascending (1 included).
class Support {
public:
    Support(double xi, double z_prime, std::uint64_t budget = kDefaultBudget);

    double xi() const noexcept { return xi_; }
    double z_prime() const noexcept { return z_prime_; }
    const std::vector<std::uint64_t>& elements() const noexcept { return elements_; }
    std::size_t size() const noexcept { return elements_.size(); }
    std::optional<std::size_t> find(std::uint64_t m) const;
    /// Distinct primes of elements()[i], ascending.
    const std::vector<std::uint32_t>& primes_of(std::size_t i) const { return factors_.at(i); }
    /// Primes p < z_prime.
    const std::vector<std::uint32_t>& primes() const noexcept { return primes_; }

private:
    double xi_, z_prime_;
    std::vector<std::uint32_t> primes_;
    std::vector<std::uint64_t> elements_;
    std::vector<std::vector<std::uint32_t>> factors_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

/// A lambda/zeta pair on a Support. Scalar is mpq_class (exact) or double.
template <class Scalar>
class LambdaSystemT {
public:
    static LambdaSystemT from_zeta(const tuple::LinearSystem& L, Support support,
                                   std::vector<Scalar> zeta);
    static LambdaSystemT from_lambda(const tuple::LinearSystem& L, Support support,
                                     std::vector<Scalar> lambda);

    const Support& support() const noexcept { return support_; }
    const std::vector<Scalar>& zeta() const noexcept { return zeta_; }
    const std::vector<Scalar>& lambda() const noexcept { return lambda_; }
    const std::vector<mpq_class>& f() const noexcept { return f_; }
    const std::vector<mpq_class>& f_prime() const noexcept { return f_prime_; }

    /// zeta_m, or 0 when m is outside the support.
    Scalar zeta_at(std::uint64_t m) const;
    Scalar lambda_at(std::uint64_t m) const;
    /// lambda_nu / lambda_1.
    Scalar lambda_normalized(std::size_t i) const;

    /// {"xi", "z_prime", "support", "zeta", "lambda"} with rationals as "p/q" strings.
    std::string to_json() const;

private:
    LambdaSystemT(const tuple::LinearSystem& L, Support support);

    Support support_;
    std::vector<mpq_class> f_, f_prime_;
    std::vector<Scalar> zeta_, lambda_;
};

using ExactLambdaSystem = LambdaSystemT<mpq_class>;
using LambdaSystem = LambdaSystemT<double>;

/// mu(d) lambda_d / f(d) = sum_{r < xi/d} zeta_{dr} / f'(dr).
template <class Scalar>
std::vector<Scalar> lambda_from_zeta(const Support& S, const std::vector<mpq_class>& f,
                                     const std::vector<mpq_class>& f_prime,
                                     const std::vector<Scalar>& zeta);

/// mu(r) zeta_r / f'(r) = sum_{d < xi/r} lambda_{dr} / f(dr).
template <class Scalar>
std::vector<Scalar> zeta_from_lambda(const Support& S, const std::vector<mpq_class>& f,
                                     const std::vector<mpq_class>& f_prime,
                                     const std::vector<Scalar>& lambda);

/// zeta_r = P*(log(xi/r) / log z') over the support.
std::vector<double> zeta_from_poly(const moments::SievePolynomial& P, const Support& S);

/// Rational stand-in for zeta_from_poly: P with rational coefficients evaluated at
/// log(xi/r)/log z' rounded to a multiple of 2^-denominator_bits.
std::vector<mpq_class> zeta_from_rational_poly(const std::vector<mpq_class>& coefficients,
                                               const Support& S, int denominator_bits = 20);

struct GSumResult {
    double value = 0;
    std::uint64_t nodes = 0;
};

/// G(xi, z') = sum_{m < xi, m | P(z')} mu^2(m) / f'(m), floating point, with
/// leaf aggregation by prefix sums over primes.
GSumResult G_sum(const tuple::LinearSystem& L, double xi, double z_prime,
                 std::uint64_t budget = kDefaultBudget);

/// Same sum in exact rationals by full enumeration.
mpq_class G_sum_exact(const tuple::LinearSystem& L, double xi, double z_prime,
                      std::uint64_t budget = kDefaultBudget);

struct GComparison {
    double G = 0;
    double V = 0;
    double tau = 0;
    double j_tau = 0;
    double ratio = 0;  // G V(z') / j_kappa(tau)
};

/// Compares G(xi, z') with j_kappa(tau)/V(z'), tau = log xi / log z'.
GComparison g_compare(const tuple::LinearSystem& L, double xi, double z_prime,
                      const dde::JFunction& J, std::uint64_t budget = kDefaultBudget);

/// A = {L(n) : 1 <= n <= x}, X = x.
class SieveInstance {
public:
    SieveInstance(tuple::LinearSystem L, std::uint64_t x);

    const tuple::LinearSystem& system() const noexcept { return L_; }
    std::uint64_t x() const noexcept { return x_; }

    /// |A_d| for squarefree d, counted by residue classes.
    std::uint64_t count_divisible(std::uint64_t d) const;
    /// R_d = |A_d| - x rho(d)/d, exact.
    mpq_class remainder(std::uint64_t d) const;

private:
    tuple::LinearSystem L_;
    std::uint64_t x_;
    mutable std::unordered_map<std::uint64_t, mpq_class> cache_;
};

struct Decomposition {
    double lhs = 0;           // sum_n (sum a_d)(sum lambda)^2
    double main = 0;          // S_A
    double main_relaxed = 0;  // S_A with (d, m) = 1 dropped
    double error = 0;         // E_A
    double residual = 0;      // lhs - (x S_A + E_A)
    /// Exact mode: every per-weight bracket lhs_d - x S_d - E_d is zero.
    std::optional<bool> exact_identity;
};

/// Sieve identity on an instance. Exact mode checks, for every d in the
/// support of a, the rational identity lhs_d = x S_d + E_d; the weights a_d
/// then only scale exact zeros.
template <class Scalar>
Decomposition decompose(const SieveInstance& inst, const RichertWeights& W,
                        const LambdaSystemT<Scalar>& S, std::uint64_t budget = kDefaultBudget);

/// z xi^2 V(z)^-7.
double error_bound_analytic(const tuple::LinearSystem& L, double z, double xi);

}  // namespace wsieve::sieve
