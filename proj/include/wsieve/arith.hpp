#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace wsieve::arith {

// Memory cap for ArithmeticTables (entries, not bytes).
inline constexpr std::uint64_t kDefaultTableCap = 200'000'000;

/// Linear-sieve tables over [1, limit]: primes, least prime factor and Moebius.
class ArithmeticTables {
public:
    explicit ArithmeticTables(std::uint64_t limit, std::uint64_t cap = kDefaultTableCap);

    std::uint64_t limit() const noexcept { return limit_; }
    const std::vector<std::uint32_t>& primes() const noexcept { return primes_; }

    std::uint32_t least_prime_factor(std::uint64_t n) const { return lpf_.at(n); }
    int moebius(std::uint64_t n) const { return mu_.at(n); }
    bool is_prime(std::uint64_t n) const { return n >= 2 && lpf_.at(n) == n; }
    bool is_squarefree(std::uint64_t n) const { return n >= 1 && mu_.at(n) != 0; }
    /// Number of distinct prime factors.
    int distinct_prime_count(std::uint64_t n) const;
    /// Distinct prime factors, ascending.
    std::vector<std::uint32_t> distinct_primes(std::uint64_t n) const;

private:
    std::uint64_t limit_;
    std::vector<std::uint32_t> primes_;
    std::vector<std::uint32_t> lpf_;
    std::vector<std::int8_t> mu_;
};

/// Plain sieve of Eratosthenes: all primes p < bound.
std::vector<std::uint32_t> primes_below(std::uint64_t bound);

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m);

/// Deterministic Miller-Rabin for all 64-bit inputs.
bool is_prime64(std::uint64_t n);

/// Prime factorization as (prime, exponent) pairs, ascending. factor64(1) is empty.
std::vector<std::pair<std::uint64_t, int>> factor64(std::uint64_t n);

/// Omega(n): prime factors counted with multiplicity. Omega(1) = 0.
int big_omega64(std::uint64_t n);

/// Modular inverse of a mod m (gcd(a, m) must be 1); result in [0, m).
std::uint64_t inverse_mod(std::int64_t a, std::uint64_t m);

/// Nonnegative residue of a mod m.
std::uint64_t reduce_mod(std::int64_t a, std::uint64_t m);

}  // namespace wsieve::arith
