#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wsieve/arith.hpp"

namespace wsieve::tuple {

/// One linear form a*n + b.
struct Form {
    std::int64_t a = 1;
    std::int64_t b = 0;

    friend bool operator==(const Form&, const Form&) = default;
};

// Coefficient magnitude bound; keeps every pairwise cross term a_t b_s - a_s b_t in 64 bits.
inline constexpr std::int64_t kMaxCoefficient = std::int64_t{1} << 31;

/// The product L(n) = prod (a_i n + b_i) of kappa validated linear forms.
/// Immutable after construction; build via build_system().
class LinearSystem {
public:
    const std::vector<Form>& forms() const noexcept { return forms_; }
    int kappa() const noexcept { return static_cast<int>(forms_.size()); }
    /// prod a_i * prod_{t<s} (a_t b_s - a_s b_t), exact.
    const mpz_class& discriminant() const noexcept { return delta_; }

    /// Value of form i at n; throws RangeOverflow outside 64 bits.
    std::int64_t form_value(int i, std::int64_t n) const;

private:
    friend LinearSystem build_system(std::span<const Form> forms);
    std::vector<Form> forms_;
    mpz_class delta_;
};

/// Validates gcd(a_i, b_i) = 1 and Delta_L != 0.
LinearSystem build_system(std::span<const Form> forms);

/// Forms n + h_i (the usual prime-tuple shorthand).
LinearSystem build_shifts(std::span<const std::int64_t> shifts);

mpz_class discriminant(const LinearSystem& system);

/// Distinct roots n mod p of L(n) = 0 (mod p), ascending.
std::vector<std::uint64_t> roots_mod_prime(const LinearSystem& system, std::uint64_t p);

/// rho(p) for prime p.
std::uint64_t rho_prime(const LinearSystem& system, std::uint64_t p);

/// rho(d): multiplicative product over p | d for squarefree d; for non-squarefree d
/// a direct count of residues mod d (diagnostic only, d <= 10^8).
std::uint64_t rho(const LinearSystem& system, std::uint64_t d);

/// All roots n in [0, d) of L(n) = 0 (mod d) for squarefree d, assembled by CRT, ascending.
std::vector<std::uint64_t> roots_mod(const LinearSystem& system, std::uint64_t d);

struct Admissibility {
    /// rho(p) < p for all primes p <= kappa.
    bool admissible = true;
    std::optional<std::uint64_t> failing_prime;
    /// Same check over the primes dividing Delta_L that exceed kappa.
    bool discriminant_primes_ok = true;
    std::optional<std::uint64_t> discriminant_failing_prime;
    std::vector<std::uint64_t> discriminant_primes;
};

Admissibility is_admissible(const LinearSystem& system);

struct FValues {
    mpq_class f;        // d / rho(d)
    mpq_class f_prime;  // prod_{p | d} (f(p) - 1)
};

/// Throws DensityZero when rho(p) = 0 for some p | d.
FValues f_values(const LinearSystem& system, std::uint64_t d);

/// V(z) = prod_{p < z} (1 - rho(p)/p). Throws ZeroFactor when some factor vanishes.
double V_product(const LinearSystem& system, double z);
mpq_class V_product_exact(const LinearSystem& system, double z);

struct HSumResult {
    double value = 0;     // sum_{p < s} rho(p) log p / p
    double residual = 0;  // value - kappa log s
};

HSumResult H_sum(const LinearSystem& system, double s);

/// Omega(|L(n)|) with multiplicity. Throws ZeroValue if a form vanishes at n.
int omega_L(const LinearSystem& system, std::int64_t n,
            const arith::ArithmeticTables* tables = nullptr);

}  // namespace wsieve::tuple
