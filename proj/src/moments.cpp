#include "wsieve/moments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "wsieve/errors.hpp"
#include "wsieve/format.hpp"
#include "wsieve/quadrature.hpp"
#include "wsieve/special.hpp"

namespace wsieve::moments {

namespace {

using special::kPi;

bool is_standard_u(int kappa, double u) { return std::fabs(u - (kappa - 1.0 / 9.0)) < 1e-12; }

// Kinks of w -> j'(u - w): where u - w crosses a piece boundary of J.
std::vector<double> knot_breaks(const dde::JFunction& J, double u) {
    std::vector<double> out;
    for (const auto& p : J.pieces()) {
        if (p.a > 0 && p.a < u) out.push_back(u - p.a);
    }
    return out;
}

void require_cover(const dde::JFunction& J, double u) {
    if (!(u > 0)) throw Error(Errc::DomainError, "u must be positive");
    if (u > J.w_max() * (1 + 1e-15)) throw Error(Errc::OutOfRange, "JFunction does not cover u");
}

struct Value {
    double value;
    double error;
};

// int_0^b F(w) log w dw: closed form on [0, delta) from F(w) ~ F(0) + F'(0) w,
// adaptive quadrature on [delta, b].
Value log_weighted(const std::function<double(double)>& F, double b,
                   const std::vector<double>& breaks, double tol) {
    const double delta = std::min(1e-4, b / 4);
    const double f0 = F(0.0);
    const double slope = (F(delta) - f0) / delta;
    const double ld = std::log(delta);
    const double head = f0 * delta * (ld - 1) + slope * delta * delta * (ld / 2 - 0.25);
    const auto tail = quad::integrate([&](double w) { return F(w) * std::log(w); }, delta, b, tol,
                                      breaks);
    return {head + tail.value, tail.abs_error};
}

MomentReport make_report(std::string name, int kappa, double u, double numeric, double err) {
    MomentReport r;
    r.quantity = std::move(name);
    r.kappa = kappa;
    r.u = u;
    r.numeric = numeric;
    r.quad_error = err;
    return r;
}

void attach(MomentReport& r, double asymptotic, double envelope) {
    r.asymptotic = asymptotic;
    r.difference = r.numeric - asymptotic;
    r.envelope = envelope;
}

void attach_asymptotic(MomentReport& r, int i, bool log_moment) {
    if (!is_standard_u(r.kappa, r.u)) return;
    const double k = r.kappa;
    if (log_moment)
        attach(r, asymptotic_J2_0(r.kappa), std::log(k) / k);
    else if (i == 0)
        attach(r, asymptotic_J1_0(r.kappa), 1 / k);
    else if (i == 1)
        attach(r, asymptotic_J1_1(r.kappa), 1 / std::sqrt(k));
}

}  // namespace

SievePolynomial::SievePolynomial(std::vector<double> coefficients, double u)
    : coeffs_(std::move(coefficients)), u_(u) {
    if (coeffs_.empty()) coeffs_.push_back(0.0);
    if (!(u >= 0)) throw Error(Errc::DomainError, "polynomial domain end u must be >= 0");
    constexpr int kGrid = 2000;
    sup_ = -HUGE_VAL;
    inf_ = HUGE_VAL;
    for (int i = 0; i <= kGrid; ++i) {
        const double v = (*this)(u * i / kGrid);
        sup_ = std::max(sup_, v);
        inf_ = std::min(inf_, v);
    }
    if (!(inf_ > 0)) throw Error(Errc::DomainError, "P must be positive on [0, u]");
}

double SievePolynomial::operator()(double w) const {
    double acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * w + *it;
    return acc;
}

double asymptotic_J1_0(int) { return 0.5; }

double asymptotic_J1_1(int kappa) { return 0.5 * std::sqrt(kappa / kPi) - 1.0 / 18.0; }

double asymptotic_J2_0(int kappa) {
    const double k = kappa;
    return 0.25 * std::log(k) + 0.25 * special::digamma(0.5) - 1 / (9 * std::sqrt(kPi * k));
}

MomentReport moment_J1(const dde::JFunction& J, double u, int i, double tol) {
    require_cover(J, u);
    if (i < 0) throw Error(Errc::DomainError, "moment index must be >= 0");
    const auto res = quad::integrate(
        [&](double w) { return std::pow(w, i) * J.j_prime(u - w); }, 0, u, tol, knot_breaks(J, u));
    auto r = make_report("J1(" + std::to_string(i) + ")", J.kappa(), u, res.value, res.abs_error);
    attach_asymptotic(r, i, false);
    return r;
}

MomentReport moment_J2(const dde::JFunction& J, double u, double tol) {
    require_cover(J, u);
    const auto v = log_weighted([&](double w) { return J.j_prime(u - w); }, u, knot_breaks(J, u), tol);
    auto r = make_report("J2(0)", J.kappa(), u, v.value, v.error);
    attach_asymptotic(r, 0, true);
    return r;
}

MomentReport moment_J1(const dde::SaddleParams& sp, int i, double tol) {
    const double u = sp.u();
    const double top = std::min(u, std::pow(static_cast<double>(sp.kappa), 0.6));
    const auto res = quad::integrate(
        [&](double w) { return std::pow(w, i) * dde::saddle_j_prime(sp, std::min(w, top)).value; },
        0, top, tol);
    auto r = make_report("J1(" + std::to_string(i) + ")", sp.kappa, u, res.value, res.abs_error);
    attach_asymptotic(r, i, false);
    return r;
}

MomentReport moment_J2(const dde::SaddleParams& sp, double tol) {
    const double u = sp.u();
    const double top = std::min(u, std::pow(static_cast<double>(sp.kappa), 0.6));
    const auto v = log_weighted(
        [&](double w) { return dde::saddle_j_prime(sp, std::min(w, top)).value; }, top, {}, tol);
    auto r = make_report("J2(0)", sp.kappa, u, v.value, v.error);
    attach_asymptotic(r, 0, true);
    return r;
}

namespace {

dde::JFunction solve_covering(int kappa, double u) {
    const double w_max = std::max(1.0, std::ceil(u));
    return dde::solve_j(kappa, std::min(w_max, kappa + 2.0));
}

dde::SaddleParams saddle_for(int kappa, double u) {
    // u = kappa - 1/3 - d
    return {kappa, kappa - 1.0 / 3.0 - u};
}

}  // namespace

MomentReport moment_J1(int kappa, double u, int i, Source source) {
    if (source == Source::saddle) return moment_J1(saddle_for(kappa, u), i);
    return moment_J1(solve_covering(kappa, u), u, i);
}

MomentReport moment_J2(int kappa, double u, Source source) {
    if (source == Source::saddle) return moment_J2(saddle_for(kappa, u));
    return moment_J2(solve_covering(kappa, u), u);
}

Ratios ratios(const dde::JFunction& J) {
    const int kappa = J.kappa();
    if (kappa < 2) throw Error(Errc::DomainError, "ratios need kappa >= 2");
    const double u = kappa - 1.0 / 9.0;
    const double j10 = moment_J1(J, u, 0).numeric;
    const double j11 = moment_J1(J, u, 1).numeric;
    const double j20 = moment_J2(J, u).numeric;
    const double k = kappa;
    Ratios r;
    r.kappa = kappa;
    r.r1 = j11 / j10;
    r.r2 = j20 / j10;
    r.r1_asymptotic = std::sqrt(k / kPi) - 1.0 / 9.0;
    r.r2_asymptotic = 0.5 * std::log(k) + 0.5 * special::digamma(0.5) - 2 / (9 * std::sqrt(kPi * k));
    return r;
}

Ratios ratios(int kappa) {
    if (kappa < 2) throw Error(Errc::DomainError, "ratios need kappa >= 2");
    return ratios(dde::solve_j(kappa, kappa));
}

double inner_I3(double w, double l) {
    if (!(w > 0) || w > l) throw Error(Errc::DomainError, "inner_I3 needs 0 < w <= l");
    return std::log(l / w) - 1 + w / l;
}

double inner_I2(const SievePolynomial& P, double w, double l) {
    const auto& p = P.coefficients();
    const std::size_t deg = p.size() - 1;
    if (deg == 0) return 0;
    // D(t) = P(w) - P(w - t) = -sum_k p_k sum_{j>=1} C(k,j) w^(k-j) (-t)^j
    std::vector<double> D(deg + 1, 0.0);
    for (std::size_t k = 1; k <= deg; ++k) {
        double binom = 1;
        for (std::size_t j = 1; j <= k; ++j) {
            binom = binom * static_cast<double>(k - j + 1) / static_cast<double>(j);
            const double sign = (j % 2) ? 1.0 : -1.0;  // -(-1)^j
            D[j] += sign * p[k] * binom * std::pow(w, static_cast<double>(k - j));
        }
    }
    // Q(t) = D(t)/t, then integrate Q(t)^2 t (1 - t/l) over [0, w].
    std::vector<double> Q(D.begin() + 1, D.end());
    std::vector<double> S(2 * Q.size() - 1, 0.0);
    for (std::size_t a = 0; a < Q.size(); ++a)
        for (std::size_t b = 0; b < Q.size(); ++b) S[a + b] += Q[a] * Q[b];
    double total = 0;
    for (std::size_t n = 0; n < S.size(); ++n) {
        const double e = static_cast<double>(n);
        total += S[n] * (std::pow(w, e + 2) / (e + 2) - std::pow(w, e + 3) / (l * (e + 3)));
    }
    return total;
}

MainIntegrals main_integrals(const dde::JFunction& J, double u, double l, const SievePolynomial& P,
                             double tol) {
    if (u > l) throw Error(Errc::DomainError, "main_integrals requires u <= l");
    require_cover(J, u);
    if (P.u() < u * (1 - 1e-12)) throw Error(Errc::DomainError, "P checked only on [0, P.u()] < u");
    const auto breaks = knot_breaks(J, u);
    MainIntegrals out;
    auto P2j = [&](double w) {
        const double p = P(w);
        return p * p * J.j_prime(u - w);
    };
    out.I1 = quad::integrate(P2j, 0, u, tol, breaks).value;
    if (!P.is_constant()) {
        out.I2 = quad::integrate([&](double w) { return inner_I2(P, w, l) * J.j_prime(u - w); }, 0, u,
                                 tol, breaks)
                     .value;
    }
    // I3 = int P^2 (log l - 1 + w/l) j' dw - int P^2 log w j' dw
    const double smooth = quad::integrate(
        [&](double w) { return P2j(w) * (std::log(l) - 1 + w / l); }, 0, u, tol, breaks).value;
    out.I3 = smooth - log_weighted(P2j, u, breaks, tol).value;
    return out;
}

std::string moments_csv(const std::vector<MomentReport>& rows, bool header) {
    std::string out;
    if (header) out += "kappa,quantity,numeric,asymptotic,diff,envelope\n";
    for (const auto& r : rows) {
        out += std::to_string(r.kappa) + "," + r.quantity + "," + fmt_num(r.numeric) + "," +
               fmt_num(r.asymptotic) + "," +
               (r.asymptotic ? fmt_num(r.difference) : std::string()) + "," +
               (r.asymptotic ? fmt_num(r.envelope) : std::string()) + "\n";
    }
    return out;
}

}  // namespace wsieve::moments
