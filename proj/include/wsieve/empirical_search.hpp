#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "wsieve/tuple_core.hpp"

namespace wsieve::search {

/// Omega(L(n)) = sum_i Omega(|a_i n + b_i|) over 1 <= n <= x.
struct OmegaHistogram {
    std::uint64_t x = 0;
    std::map<int, std::uint64_t> counts;
    std::uint64_t excluded = 0;  // n with some L_i(n) = 0

    std::uint64_t total() const;
    int max_omega() const;
};

struct SearchOptions {
    std::uint64_t segment_size = 1 << 16;
    unsigned threads = 0;  // 0: hardware concurrency
    std::uint64_t x_cap = 100'000'000;
    std::uint64_t prime_cap = 100'000'000;  // largest sieving prime allowed
};

/// Segmented division sieve over the rho(p) residue classes per form for p up to
/// sqrt(max |L_i(n)|); a cofactor left above 1 is prime.
OmegaHistogram omega_profile(const tuple::LinearSystem& L, std::uint64_t x,
                             const SearchOptions& options = {});

/// Number of n <= x with L(n) != 0 and Omega(L(n)) <= r.
std::uint64_t count_at_most(const tuple::LinearSystem& L, std::uint64_t x, int r,
                            const SearchOptions& options = {});
std::uint64_t count_at_most(const OmegaHistogram& h, int r);

struct DensityReport {
    std::uint64_t x = 0;
    int r = 0;
    std::uint64_t count = 0;
    double comparator = 0;  // x / log^kappa x
    double ratio = 0;
};

DensityReport density_report(const tuple::LinearSystem& L, std::uint64_t x, int r,
                             const SearchOptions& options = {});

std::string histogram_csv(const OmegaHistogram& h);
std::string histogram_json(const OmegaHistogram& h);
std::string density_json(const DensityReport& d);

}  // namespace wsieve::search
