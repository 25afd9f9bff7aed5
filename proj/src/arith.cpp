#include "wsieve/arith.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <tuple>

#include "wsieve/errors.hpp"

namespace wsieve::arith {

ArithmeticTables::ArithmeticTables(std::uint64_t limit, std::uint64_t cap) : limit_(limit) {
    if (limit < 2) throw Error(Errc::DomainError, "table limit must be >= 2");
    if (limit > cap || limit > 0xFFFFFFFFull)
        throw Error(Errc::LimitTooLarge, "table limit " + std::to_string(limit) + " exceeds cap");

    lpf_.assign(limit + 1, 0);
    mu_.assign(limit + 1, 0);
    mu_[1] = 1;
    lpf_[1] = 1;
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (lpf_[i] == 0) {
            lpf_[i] = static_cast<std::uint32_t>(i);
            mu_[i] = -1;
            primes_.push_back(static_cast<std::uint32_t>(i));
        }
        for (std::uint32_t p : primes_) {
            const std::uint64_t ip = i * p;
            if (p > lpf_[i] || ip > limit) break;
            lpf_[ip] = p;
            mu_[ip] = (p == lpf_[i]) ? 0 : static_cast<std::int8_t>(-mu_[i]);
        }
    }
}

int ArithmeticTables::distinct_prime_count(std::uint64_t n) const {
    return static_cast<int>(distinct_primes(n).size());
}

std::vector<std::uint32_t> ArithmeticTables::distinct_primes(std::uint64_t n) const {
    std::vector<std::uint32_t> out;
    while (n > 1) {
        const std::uint32_t p = lpf_.at(n);
        out.push_back(p);
        while (n % p == 0) n /= p;
    }
    return out;
}

std::vector<std::uint32_t> primes_below(std::uint64_t bound) {
    std::vector<std::uint32_t> out;
    if (bound <= 2) return out;
    std::vector<bool> composite(bound, false);
    for (std::uint64_t i = 2; i < bound; ++i) {
        if (composite[i]) continue;
        out.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j < bound; j += i) composite[j] = true;
    }
    return out;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

bool is_prime64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // This base set is deterministic below 3.3e24.
    for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

namespace {

std::uint64_t pollard_brent(std::uint64_t n) {
    if (n % 2 == 0) return 2;
    for (std::uint64_t c = 1;; ++c) {
        std::uint64_t y = 2, x = 2, g = 1, q = 1, ys = 2;
        const std::uint64_t m = 128;
        std::uint64_t r = 1;
        auto f = [&](std::uint64_t v) { return (mulmod(v, v, n) + c) % n; };
        do {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) y = f(y);
            std::uint64_t k = 0;
            do {
                ys = y;
                for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += m;
            } while (k < r && g == 1);
            r *= 2;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void factor_rec(std::uint64_t n, std::vector<std::uint64_t>& out) {
    if (n == 1) return;
    if (is_prime64(n)) {
        out.push_back(n);
        return;
    }
    const std::uint64_t d = pollard_brent(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

}  // namespace

std::vector<std::pair<std::uint64_t, int>> factor64(std::uint64_t n) {
    std::vector<std::uint64_t> ps;
    for (std::uint64_t p = 2; p < 1000 && p * p <= n; p += (p == 2 ? 1 : 2)) {
        while (n % p == 0) {
            ps.push_back(p);
            n /= p;
        }
    }
    factor_rec(n, ps);
    std::sort(ps.begin(), ps.end());
    std::vector<std::pair<std::uint64_t, int>> out;
    for (std::uint64_t p : ps) {
        if (!out.empty() && out.back().first == p)
            ++out.back().second;
        else
            out.emplace_back(p, 1);
    }
    return out;
}

int big_omega64(std::uint64_t n) {
    if (n == 0) throw Error(Errc::ZeroValue, "Omega(0) is undefined");
    int total = 0;
    for (const auto& [p, e] : factor64(n)) total += e;
    return total;
}

std::uint64_t reduce_mod(std::int64_t a, std::uint64_t m) {
    const __int128 r = static_cast<__int128>(a) % static_cast<__int128>(m);
    return static_cast<std::uint64_t>(r < 0 ? r + m : r);
}

std::uint64_t inverse_mod(std::int64_t a, std::uint64_t m) {
    __int128 t = 0, new_t = 1;
    __int128 r = m, new_r = reduce_mod(a, m);
    while (new_r != 0) {
        const __int128 q = r / new_r;
        std::tie(t, new_t) = std::make_pair(new_t, t - q * new_t);
        std::tie(r, new_r) = std::make_pair(new_r, r - q * new_r);
    }
    if (r != 1) throw Error(Errc::DomainError, "no inverse modulo " + std::to_string(m));
    if (t < 0) t += m;
    return static_cast<std::uint64_t>(t);
}

}  // namespace wsieve::arith
