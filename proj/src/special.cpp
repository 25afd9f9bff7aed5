#include "wsieve/special.hpp"

#include <cmath>
#include <limits>

#include "wsieve/errors.hpp"

namespace wsieve::special {

namespace {

bool is_nonpositive_integer(double x) { return x <= 0 && x == std::floor(x); }

// Stirling series for log Gamma, valid for x >= 10 to full double precision.
double log_gamma_large(double x) {
    static constexpr double c[] = {1.0 / 12, -1.0 / 360, 1.0 / 1260, -1.0 / 1680,
                                   1.0 / 1188, -691.0 / 360360, 1.0 / 156};
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    double series = 0, pw = inv;
    for (double ck : c) {
        series += ck * pw;
        pw *= inv2;
    }
    return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2 * kPi) + series;
}

// log Gamma(s) - s log x + x, used to build Gamma(s, x) in log form.
double lower_series_log(double s, double x) {
    // gamma(s, x) = x^s e^-x sum_{n>=0} x^n / (s (s+1) ... (s+n))
    double term = 1.0 / s, sum = term;
    for (int n = 1; n < 100000; ++n) {
        term *= x / (s + n);
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-17) break;
    }
    return std::log(sum) + s * std::log(x) - x;
}

double upper_fraction_log(double s, double x) {
    // Modified Lentz on Gamma(s, x) = e^-x x^s / (x + 1 - s - 1(1-s)/(x + 3 - s - ...)).
    constexpr double tiny = 1e-300;
    double b = x + 1 - s;
    double c = 1 / tiny;
    double d = 1 / b;
    double h = d;
    for (int i = 1; i < 100000; ++i) {
        const double an = -i * (i - s);
        b += 2;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1) < 1e-16) break;
    }
    return std::log(h) - x + s * std::log(x);
}

}  // namespace

double log_gamma(double x) {
    if (is_nonpositive_integer(x)) throw Error(Errc::PoleError, "log_gamma pole");
    if (x < 0.5) {
        // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return std::log(kPi / std::fabs(std::sin(kPi * x))) - log_gamma(1 - x);
    }
    double shift = 0;
    while (x < 10) {
        shift -= std::log(x);
        x += 1;
    }
    return log_gamma_large(x) + shift;
}

double digamma(double x) {
    if (is_nonpositive_integer(x)) throw Error(Errc::PoleError, "digamma pole");
    if (x < 0.5) return digamma(1 - x) - kPi / std::tan(kPi * x);
    double shift = 0;
    while (x < 10) {
        shift -= 1 / x;
        x += 1;
    }
    // psi(x) ~ log x - 1/(2x) - sum B_2k / (2k x^2k)
    static constexpr double b[] = {1.0 / 12, -1.0 / 120, 1.0 / 252, -1.0 / 240,
                                   1.0 / 132, -691.0 / 32760, 1.0 / 12};
    const double inv2 = 1 / (x * x);
    double series = 0, pw = inv2;
    for (double bk : b) {
        series += bk * pw;
        pw *= inv2;
    }
    return std::log(x) - 0.5 / x - series + shift;
}

double log_upper_incomplete_gamma(double s, double x) {
    if (!(s > 0) || !(x >= 0)) throw Error(Errc::DomainError, "incomplete gamma needs s > 0, x >= 0");
    if (x == 0) return log_gamma(s);
    if (x < s + 1) {
        const double lg = log_gamma(s);
        const double lower = std::exp(lower_series_log(s, x) - lg);
        return lg + std::log1p(-lower);
    }
    return upper_fraction_log(s, x);
}

double upper_incomplete_gamma(double s, double x) {
    return std::exp(log_upper_incomplete_gamma(s, x));
}

}  // namespace wsieve::special
