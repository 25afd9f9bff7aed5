#include "wsieve/tuple_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "wsieve/errors.hpp"

namespace wsieve::tuple {

namespace {

std::uint64_t abs_u64(__int128 v) { return static_cast<std::uint64_t>(v < 0 ? -v : v); }

// Residue scan doubles as the oracle for small primes.
constexpr std::uint64_t kScanBelow = 50;

std::uint64_t form_mod(const Form& f, std::uint64_t n, std::uint64_t m) {
    const std::uint64_t a = arith::reduce_mod(f.a, m);
    const std::uint64_t b = arith::reduce_mod(f.b, m);
    return (arith::mulmod(a, n, m) + b) % m;
}

bool vanishes_mod(const LinearSystem& L, std::uint64_t n, std::uint64_t m) {
    for (const Form& f : L.forms())
        if (form_mod(f, n, m) == 0) return true;
    return false;
}

}  // namespace

std::int64_t LinearSystem::form_value(int i, std::int64_t n) const {
    const Form& f = forms_.at(static_cast<std::size_t>(i));
    const __int128 v = static_cast<__int128>(f.a) * n + f.b;
    if (v > INT64_MAX || v < -INT64_MAX)
        throw Error(Errc::RangeOverflow, "form value exceeds 64 bits at n=" + std::to_string(n));
    return static_cast<std::int64_t>(v);
}

LinearSystem build_system(std::span<const Form> forms) {
    if (forms.empty()) throw Error(Errc::DomainError, "a linear system needs at least one form");
    LinearSystem L;
    for (const Form& f : forms) {
        if (std::llabs(f.a) >= kMaxCoefficient || std::llabs(f.b) >= kMaxCoefficient)
            throw Error(Errc::CoefficientRange, "coefficients must be below 2^31 in magnitude");
        if (std::gcd(f.a, f.b) != 1)
            throw Error(Errc::GcdViolation, "gcd(" + std::to_string(f.a) + ", " +
                                                std::to_string(f.b) + ") != 1");
        L.forms_.push_back(f);
    }
    L.delta_ = discriminant(L);
    if (L.delta_ == 0) throw Error(Errc::ZeroDiscriminant, "Delta_L = 0");
    return L;
}

LinearSystem build_shifts(std::span<const std::int64_t> shifts) {
    std::vector<Form> forms;
    for (std::int64_t h : shifts) forms.push_back({1, h});
    return build_system(forms);
}

mpz_class discriminant(const LinearSystem& L) {
    const auto& fs = L.forms();
    mpz_class delta = 1;
    for (const Form& f : fs) delta *= mpz_class(std::to_string(f.a));
    for (std::size_t t = 0; t < fs.size(); ++t) {
        for (std::size_t s = t + 1; s < fs.size(); ++s) {
            const __int128 cross = static_cast<__int128>(fs[t].a) * fs[s].b -
                                   static_cast<__int128>(fs[s].a) * fs[t].b;
            mpz_class c(std::to_string(abs_u64(cross)));
            delta *= (cross < 0) ? mpz_class(-c) : c;
        }
    }
    return delta;
}

std::vector<std::uint64_t> roots_mod_prime(const LinearSystem& L, std::uint64_t p) {
    std::vector<std::uint64_t> roots;
    if (p < kScanBelow) {
        for (std::uint64_t n = 0; n < p; ++n)
            if (vanishes_mod(L, n, p)) roots.push_back(n);
        return roots;
    }
    for (const Form& f : L.forms()) {
        // p | a with gcd(a, b) = 1 leaves a*n + b a unit mod p: no root.
        if (arith::reduce_mod(f.a, p) == 0) continue;
        const std::uint64_t inv = arith::inverse_mod(f.a, p);
        const std::uint64_t minus_b = (p - arith::reduce_mod(f.b, p)) % p;
        roots.push_back(arith::mulmod(minus_b, inv, p));
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

std::uint64_t rho_prime(const LinearSystem& L, std::uint64_t p) {
    return roots_mod_prime(L, p).size();
}

std::uint64_t rho(const LinearSystem& L, std::uint64_t d) {
    if (d == 0) throw Error(Errc::DomainError, "rho(0) is undefined");
    if (d == 1) return 1;
    const auto fac = arith::factor64(d);
    const bool squarefree =
        std::all_of(fac.begin(), fac.end(), [](const auto& pe) { return pe.second == 1; });
    if (squarefree) {
        std::uint64_t r = 1;
        for (const auto& [p, e] : fac) r *= rho_prime(L, p);
        return r;
    }
    if (d > 100'000'000) throw Error(Errc::BudgetExceeded, "direct root count limited to d <= 1e8");
    std::uint64_t count = 0;
    for (std::uint64_t n = 0; n < d; ++n) {
        unsigned __int128 prod = 1;
        for (const Form& f : L.forms()) prod = prod * form_mod(f, n, d) % d;
        if (prod == 0) ++count;
    }
    return count;
}

std::vector<std::uint64_t> roots_mod(const LinearSystem& L, std::uint64_t d) {
    std::vector<std::uint64_t> roots{0};
    std::uint64_t modulus = 1;
    for (const auto& [p, e] : arith::factor64(d)) {
        if (e != 1) throw Error(Errc::DomainError, "roots_mod requires squarefree d");
        const auto rp = roots_mod_prime(L, p);
        std::vector<std::uint64_t> next;
        next.reserve(roots.size() * rp.size());
        // x = r (mod modulus), x = s (mod p)
        const std::uint64_t inv = modulus == 1 ? 0 : arith::inverse_mod(static_cast<std::int64_t>(modulus % p), p);
        for (std::uint64_t r : roots) {
            for (std::uint64_t s : rp) {
                const std::uint64_t diff = (s + p - r % p) % p;
                const std::uint64_t k = modulus == 1 ? s : arith::mulmod(diff, inv, p);
                next.push_back(modulus == 1 ? s : r + modulus * k);
            }
        }
        roots = std::move(next);
        modulus *= p;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

Admissibility is_admissible(const LinearSystem& L) {
    Admissibility out;
    const auto kappa = static_cast<std::uint64_t>(L.kappa());
    for (std::uint32_t p : arith::primes_below(kappa + 1)) {
        if (rho_prime(L, p) >= p) {
            out.admissible = false;
            out.failing_prime = p;
            break;
        }
    }
    // Primes dividing Delta_L, collected factor by factor.
    std::set<std::uint64_t> ps;
    const auto& fs = L.forms();
    auto collect = [&](__int128 v) {
        for (const auto& [p, e] : arith::factor64(abs_u64(v))) ps.insert(p);
    };
    for (const Form& f : fs) collect(f.a);
    for (std::size_t t = 0; t < fs.size(); ++t)
        for (std::size_t s = t + 1; s < fs.size(); ++s)
            collect(static_cast<__int128>(fs[t].a) * fs[s].b -
                    static_cast<__int128>(fs[s].a) * fs[t].b);
    for (std::uint64_t p : ps) {
        if (p <= kappa) continue;
        out.discriminant_primes.push_back(p);
        if (out.discriminant_primes_ok && rho_prime(L, p) >= p) {
            out.discriminant_primes_ok = false;
            out.discriminant_failing_prime = p;
        }
    }
    return out;
}

FValues f_values(const LinearSystem& L, std::uint64_t d) {
    FValues out{1, 1};
    if (d == 1) return out;
    for (const auto& [p, e] : arith::factor64(d)) {
        if (e != 1) throw Error(Errc::DomainError, "f_values requires squarefree d");
        const std::uint64_t r = rho_prime(L, p);
        if (r == 0) throw Error(Errc::DensityZero, "rho(" + std::to_string(p) + ") = 0");
        const mpq_class fp(mpz_class(std::to_string(p)), mpz_class(std::to_string(r)));
        out.f *= fp;
        out.f_prime *= fp - 1;
    }
    out.f.canonicalize();
    out.f_prime.canonicalize();
    return out;
}

double V_product(const LinearSystem& L, double z) {
    if (!(z >= 2)) throw Error(Errc::DomainError, "V_product needs z >= 2");
    double v = 1;
    for (std::uint32_t p : arith::primes_below(static_cast<std::uint64_t>(std::ceil(z)))) {
        if (p >= z) break;
        const std::uint64_t r = rho_prime(L, p);
        if (r >= p) throw Error(Errc::ZeroFactor, "rho(" + std::to_string(p) + ") = p");
        v *= 1.0 - static_cast<double>(r) / p;
    }
    return v;
}

mpq_class V_product_exact(const LinearSystem& L, double z) {
    if (!(z >= 2)) throw Error(Errc::DomainError, "V_product needs z >= 2");
    mpq_class v = 1;
    for (std::uint32_t p : arith::primes_below(static_cast<std::uint64_t>(std::ceil(z)))) {
        if (p >= z) break;
        const std::uint64_t r = rho_prime(L, p);
        if (r >= p) throw Error(Errc::ZeroFactor, "rho(" + std::to_string(p) + ") = p");
        v *= mpq_class(static_cast<unsigned long>(p - r), static_cast<unsigned long>(p));
    }
    v.canonicalize();
    return v;
}

HSumResult H_sum(const LinearSystem& L, double s) {
    HSumResult out;
    if (s <= 2) {
        out.residual = -L.kappa() * std::log(std::max(s, 1.0));
        return out;
    }
    for (std::uint32_t p : arith::primes_below(static_cast<std::uint64_t>(std::ceil(s)))) {
        if (p >= s) break;
        out.value += static_cast<double>(rho_prime(L, p)) * std::log(static_cast<double>(p)) / p;
    }
    out.residual = out.value - L.kappa() * std::log(s);
    return out;
}

int omega_L(const LinearSystem& L, std::int64_t n, const arith::ArithmeticTables* tables) {
    int total = 0;
    for (int i = 0; i < L.kappa(); ++i) {
        const std::int64_t v = L.form_value(i, n);
        if (v == 0) throw Error(Errc::ZeroValue, "form " + std::to_string(i) + " vanishes at n=" +
                                                     std::to_string(n));
        std::uint64_t m = static_cast<std::uint64_t>(v < 0 ? -v : v);
        if (tables != nullptr && m <= tables->limit()) {
            while (m > 1) {
                m /= tables->least_prime_factor(m);
                ++total;
            }
        } else {
            total += arith::big_omega64(m);
        }
    }
    return total;
}

}  // namespace wsieve::tuple
