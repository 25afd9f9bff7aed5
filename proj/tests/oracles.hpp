#pragma once

// Test-only reference computations. Nothing here calls into the library's
// numerical paths.

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

namespace oracle {

/// Fixed-step RK4 method of steps for w q' = kappa q(w) - kappa q(w-1),
/// q = w^kappa on (0, 1]. Delayed values at half steps come from 4-point
/// Lagrange interpolation of the stored grid.
class Rk4Dde {
public:
    Rk4Dde(int kappa, double w_max, int steps_per_unit) : kappa_(kappa), n_(steps_per_unit) {
        const long total = static_cast<long>(std::ceil(w_max * n_)) + 1;
        q_.assign(total + 1, 0.0L);
        const long double hs = 1.0L / n_;
        for (long i = 0; i <= n_ && i <= total; ++i) q_[i] = std::pow(i * hs, (long double)kappa_);
        for (long i = n_; i < total; ++i) {
            const long double w = i * hs;
            auto f = [&](long double ww, long double qq, long double delayed) {
                return kappa_ * (qq - delayed) / ww;
            };
            const long double d0 = q_[i - n_];
            const long double dh = delayed_half(i - n_);
            const long double d1 = q_[i + 1 - n_];
            const long double k1 = f(w, q_[i], d0);
            const long double k2 = f(w + hs / 2, q_[i] + hs / 2 * k1, dh);
            const long double k3 = f(w + hs / 2, q_[i] + hs / 2 * k2, dh);
            const long double k4 = f(w + hs, q_[i] + hs * k3, d1);
            q_[i + 1] = q_[i] + hs / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        }
    }

    /// q at w by cubic interpolation of the grid.
    long double q(double w) const {
        if (w <= 0) return 0;
        const long double x = w * n_;
        long i = static_cast<long>(std::floor(x)) - 1;
        if (i < 0) i = 0;
        if (i + 3 >= static_cast<long>(q_.size())) i = static_cast<long>(q_.size()) - 4;
        const long double t = x - i;
        long double acc = 0;
        for (int a = 0; a < 4; ++a) {
            long double basis = 1;
            for (int b = 0; b < 4; ++b)
                if (b != a) basis *= (t - b) / (a - b);
            acc += basis * q_[i + a];
        }
        return acc;
    }

private:
    // q at (i + 1/2) / n using the four surrounding grid values (exact for w <= 1).
    long double delayed_half(long i) const {
        const long double w = (i + 0.5L) / n_;
        if (w <= 1) return w <= 0 ? 0 : std::pow(w, (long double)kappa_);
        return (-q_[i - 1] + 9 * q_[i] + 9 * q_[i + 1] - q_[i + 2]) / 16;
    }

    int kappa_;
    long n_;
    std::vector<long double> q_;
};

/// Naive Omega by trial division.
inline int naive_big_omega(std::uint64_t n) {
    int count = 0;
    for (std::uint64_t p = 2; p * p <= n; ++p)
        while (n % p == 0) {
            n /= p;
            ++count;
        }
    return count + (n > 1 ? 1 : 0);
}

inline bool naive_is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

/// Composite Simpson rule with an even number of panels.
template <class F>
long double simpson(F f, long double a, long double b, long panels) {
    if (panels % 2) ++panels;
    const long double h = (b - a) / panels;
    long double s = f(a) + f(b);
    for (long i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
    return s * h / 3;
}

struct MarginInputs {
    long double I1 = 0, I3 = 0;
};

/// I1 = int_0^u j'(u - w) dw and I3 = int_0^u (log(l/w) - 1 + w/l) j'(u - w) dw from
/// the RK4 grid, with w = s^2 to tame the logarithm.
inline MarginInputs margin_inputs(int kappa, double u, double l, int steps_per_unit, long panels) {
    const Rk4Dde dde(kappa, u + 1, steps_per_unit);
    const long double c = std::exp(-0.57721566490153286061L * kappa) / std::tgamma(kappa + 1.0L);
    auto jp = [&](long double w) -> long double {
        if (w <= 0) return 0;
        return c * kappa * (dde.q(w) - dde.q(w - 1)) / w;
    };
    MarginInputs out;
    out.I1 = simpson([&](long double w) { return jp(u - w); }, 0, u, panels);
    out.I3 = simpson(
        [&](long double s) {
            if (s == 0) return 0.0L;
            const long double w = s * s;
            return 2 * s * (std::log(l / w) - 1 + w / l) * jp(u - w);
        },
        0, std::sqrt((long double)u), panels);
    return out;
}

}  // namespace oracle
