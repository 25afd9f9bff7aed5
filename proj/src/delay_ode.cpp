#include "wsieve/delay_ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include <json.hpp>

#include "wsieve/errors.hpp"
#include "wsieve/special.hpp"

namespace wsieve::dde {

namespace {

using Real = long double;
constexpr Real kPiL = 3.141592653589793238462643383279502884L;

// Clenshaw evaluation of sum c_k T_k(x).
Real clenshaw(const std::vector<Real>& c, Real x) {
    Real b1 = 0, b2 = 0;
    for (std::size_t k = c.size(); k-- > 1;) {
        const Real t = 2 * x * b1 - b2 + c[k];
        b2 = b1;
        b1 = t;
    }
    return x * b1 - b2 + (c.empty() ? 0 : c[0]);
}

Real to_unit(Real w, Real a, Real b) { return (2 * w - a - b) / (b - a); }

// Chebyshev coefficients (f = sum c_k T_k) from values at Lobatto points x_j = cos(pi j / N).
std::vector<Real> lobatto_coefficients(const std::vector<Real>& values) {
    const std::size_t n = values.size() - 1;
    std::vector<Real> c(n + 1, 0);
    for (std::size_t k = 0; k <= n; ++k) {
        Real s = 0;
        for (std::size_t j = 0; j <= n; ++j) {
            Real term = values[j] * std::cos(kPiL * static_cast<Real>(j * k % (2 * n)) / n);
            if (j == 0 || j == n) term /= 2;
            s += term;
        }
        c[k] = 2 * s / n;
    }
    c[0] /= 2;
    c[n] /= 2;
    return c;
}

// Coefficients of the antiderivative in x, vanishing at x = -1.
std::vector<Real> antiderivative(const std::vector<Real>& c) {
    const std::size_t n = c.size();
    auto at = [&](std::size_t k) { return k < n ? c[k] : Real(0); };
    std::vector<Real> out(n + 1, 0);
    for (std::size_t k = 1; k <= n; ++k) {
        out[k] = (k == 1) ? at(0) - at(2) / 2 : (at(k - 1) - at(k + 1)) / (2 * static_cast<Real>(k));
    }
    Real at_minus_one = 0;
    for (std::size_t k = 1; k <= n; ++k) at_minus_one += (k % 2 ? -out[k] : out[k]);
    out[0] = -at_minus_one;
    return out;
}

}  // namespace

CKappa c_kappa(int kappa) {
    if (kappa < 1) throw Error(Errc::DomainError, "kappa must be >= 1");
    CKappa out;
    out.log_value = -special::kEulerGamma * kappa - special::log_gamma(kappa + 1.0);
    out.value = std::exp(out.log_value);
    out.underflow = out.value == 0 || out.value < std::numeric_limits<double>::min();
    if (out.underflow) out.value = 0;
    return out;
}

const JFunction::Piece& JFunction::piece_for(double w) const {
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), w,
                               [](double v, const Piece& p) { return v <= p.b; });
    if (it == pieces_.end()) return pieces_.back();
    return *it;
}

long double JFunction::h(double w) const {
    if (w <= 1) return 1;
    const Piece& p = piece_for(w);
    return clenshaw(p.h, to_unit(w, p.a, p.b));
}

long double JFunction::dh(double w) const {
    if (w <= 1) return 0;
    const Piece& p = piece_for(w);
    return clenshaw(p.dh, to_unit(w, p.a, p.b));
}

double JFunction::log_q(double w) const {
    if (w <= 0) return -std::numeric_limits<double>::infinity();
    if (w > w_max_ * (1 + 1e-15)) throw Error(Errc::OutOfRange, "w beyond w_max");
    return static_cast<double>(kappa_ * std::log(static_cast<Real>(w)) + std::log(h(w)));
}

double JFunction::q(double w) const {
    if (w <= 0) return 0;
    const double lq = log_q(w);
    if (lq > 709) throw Error(Errc::RangeOverflow, "q(w) exceeds double range; use log_q");
    return static_cast<double>(std::pow(static_cast<Real>(w), kappa_) * h(w));
}

double JFunction::q_prime(double w) const {
    if (w <= 0) return 0;
    if (w > w_max_ * (1 + 1e-15)) throw Error(Errc::OutOfRange, "w beyond w_max");
    const Real wl = w;
    const Real scale = std::pow(wl, kappa_ - 1);
    return static_cast<double>(scale * (kappa_ * h(w) + wl * dh(w)));
}

double JFunction::log_j(double w) const { return log_c_ + log_q(w); }

double JFunction::j(double w) const {
    if (w <= 0) return 0;
    return std::exp(log_j(w));
}

double JFunction::j_prime(double w) const {
    if (w <= 0) return 0;
    if (w > w_max_ * (1 + 1e-15)) throw Error(Errc::OutOfRange, "w beyond w_max");
    const Real wl = w;
    const Real log_scale = log_c_ + (kappa_ - 1) * std::log(wl);
    return static_cast<double>(std::exp(log_scale) * (kappa_ * h(w) + wl * dh(w)));
}

double JFunction::max_residual(int grid_points) const {
    double worst = 0;
    for (int i = 1; i <= grid_points; ++i) {
        const double w = w_max_ * i / grid_points;
        // Scaled by w^-kappa: (w q' - kappa q + kappa q(w-1)) / (kappa q)
        //   = (w h' + kappa ((w-1)/w)^kappa h(w-1)) / (kappa h)
        const Real wl = w;
        Real delayed = 0;
        if (w > 1) delayed = kappa_ * std::pow((wl - 1) / wl, kappa_) * h(w - 1);
        const Real num = wl * dh(w) + delayed;
        const Real den = kappa_ * h(w);
        worst = std::max(worst, static_cast<double>(std::fabs(num / den)));
    }
    return worst;
}

JFunction solve_j(int kappa, double w_max, const SolveOptions& options) {
    if (kappa < 1) throw Error(Errc::DomainError, "kappa must be >= 1");
    if (kappa > kMaxKappa) throw Error(Errc::RangeOverflow, "kappa above supported range");
    if (!(w_max >= 1) || w_max > kappa + 2)
        throw Error(Errc::DomainError, "need 1 <= w_max <= kappa + 2");
    if (options.degree < 4 || options.degree > 128) throw Error(Errc::DomainError, "bad degree");
    if (!(options.tol > 0)) throw Error(Errc::DomainError, "tol must be positive");

    JFunction J;
    J.kappa_ = kappa;
    J.w_max_ = w_max;
    J.tol_ = options.tol;
    J.degree_ = options.degree;
    J.log_c_ = c_kappa(kappa).log_value;
    J.pieces_.push_back({0.0, 1.0, {1.0L}, {0.0L}});

    const int n = options.degree;
    std::vector<Real> nodes(n + 1);
    for (int j = 0; j <= n; ++j) nodes[j] = std::cos(kPiL * j / n);

    // -h'(s) = kappa/s ((s-1)/s)^kappa h(s-1)
    auto integrand = [&](Real s) -> Real {
        const Real ratio = (s - 1) / s;
        if (ratio <= 0) return 0;
        return kappa / s * std::exp(kappa * std::log(ratio)) * J.h(static_cast<double>(s - 1));
    };

    constexpr double kMinWidth = 1.0 / 4096;
    const Real eps_floor = 64 * std::numeric_limits<Real>::epsilon();
    const int last = static_cast<int>(std::ceil(w_max - 1e-12));
    Real h_start = 1;
    for (int m = 1; m < last; ++m) {
        // Work through (m, m+1] left to right, bisecting a trial piece until its fit is good.
        std::vector<std::pair<double, double>> todo{{double(m), double(m + 1)}};
        while (!todo.empty()) {
            auto [a, b] = todo.back();
            todo.pop_back();
            std::vector<Real> g(n + 1);
            for (int j = 0; j <= n; ++j) {
                const Real s = (Real(a) + b) / 2 + (Real(b) - a) / 2 * nodes[j];
                g[j] = integrand(s);
            }
            const std::vector<Real> c = lobatto_coefficients(g);
            Real mag = 0;
            for (Real v : c) mag += std::fabs(v);
            const Real tail = std::fabs(c[n]) + std::fabs(c[n - 1]) + std::fabs(c[n - 2]);

            std::vector<Real> G = antiderivative(c);
            const Real half = (Real(b) - a) / 2;
            Real g_total = 0;
            for (Real v : G) g_total += v;  // value at x = 1
            const Real h_end = h_start - half * g_total;
            if (!(h_end > 0)) throw Error(Errc::ToleranceNotMet, "h lost positivity");

            // Residual bound |g_fit - g| w / (kappa h) and integral bound (b-a)|g_fit - g| / h.
            const Real limit = 0.1L * options.tol * h_end * std::min<Real>(kappa / Real(b), 1 / (Real(b) - a));
            const bool converged = tail <= limit || tail <= eps_floor * mag;
            if (!converged && b - a > kMinWidth) {
                const double mid = 0.5 * (a + b);
                todo.push_back({mid, b});
                todo.push_back({a, mid});
                continue;
            }
            if (!converged) throw Error(Errc::ToleranceNotMet, "piece fit failed at w=" + std::to_string(a));

            JFunction::Piece piece;
            piece.a = a;
            piece.b = b;
            piece.h.resize(G.size());
            for (std::size_t k = 0; k < G.size(); ++k) piece.h[k] = -half * G[k];
            piece.h[0] += h_start;
            piece.dh.resize(c.size());
            for (std::size_t k = 0; k < c.size(); ++k) piece.dh[k] = -c[k];
            J.pieces_.push_back(std::move(piece));
            h_start = h_end;
        }
    }

    const double residual = J.max_residual(1000);
    if (!(residual <= options.tol))
        throw Error(Errc::ToleranceNotMet, "DDE residual " + std::to_string(residual));
    return J;
}

double eval_j(const JFunction& J, double w, int order) {
    if (w <= 0) return 0;
    if (w > J.w_max() * (1 + 1e-15)) throw Error(Errc::OutOfRange, "w beyond w_max");
    if (order == 0) return J.j(w);
    if (order == 1) return J.j_prime(w);
    throw Error(Errc::DomainError, "order must be 0 or 1");
}

std::string JFunction::to_json() const {
    auto enc = [](const std::vector<long double>& v) {
        nlohmann::json arr = nlohmann::json::array();
        char buf[64];
        for (long double x : v) {
            std::snprintf(buf, sizeof buf, "%.21Lg", x);
            arr.push_back(buf);
        }
        return arr;
    };
    nlohmann::json pieces = nlohmann::json::array();
    for (const Piece& p : pieces_)
        pieces.push_back({{"a", p.a}, {"b", p.b}, {"h", enc(p.h)}, {"dh", enc(p.dh)}});
    return nlohmann::json{{"kappa", kappa_}, {"w_max", w_max_}, {"tol", tol_},
                          {"degree", degree_}, {"pieces", pieces}}
        .dump();
}

JFunction JFunction::from_json(const std::string& text) {
    JFunction J;
    try {
        const auto doc = nlohmann::json::parse(text);
        J.kappa_ = doc.at("kappa").get<int>();
        J.w_max_ = doc.at("w_max").get<double>();
        J.tol_ = doc.at("tol").get<double>();
        J.degree_ = doc.at("degree").get<int>();
        J.log_c_ = c_kappa(J.kappa_).log_value;
        auto dec = [](const nlohmann::json& arr) {
            std::vector<long double> v;
            for (const auto& s : arr) v.push_back(std::strtold(s.get<std::string>().c_str(), nullptr));
            return v;
        };
        for (const auto& p : doc.at("pieces"))
            J.pieces_.push_back({p.at("a").get<double>(), p.at("b").get<double>(), dec(p.at("h")),
                                 dec(p.at("dh"))});
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ParseError, e.what());
    }
    if (J.pieces_.empty()) throw Error(Errc::ParseError, "JFunction cache has no pieces");
    return J;
}

SaddleValue saddle_j_prime(const SaddleParams& params, double w) {
    const double k = params.kappa;
    if (!(params.u() > 0)) throw Error(Errc::DomainError, "u = kappa - 1/3 - d must be positive");
    if (w < 0 || w > std::pow(k, 0.6)) throw Error(Errc::OutOfValidity, "w outside [0, kappa^(3/5)]");
    const double norm = 1 / std::sqrt(special::kPi * k);
    SaddleValue out;
    out.value = norm * std::exp(-w * w / k) *
                (1 - 2 * params.d * w / k - (4.0 / 9.0) * w * w * w / (k * k));
    out.envelope = norm * (1 / k + std::pow(w, 6) / std::pow(k, 4));
    return out;
}

TailReport tail_check(const JFunction& J, double u, int points) {
    if (u > J.w_max()) throw Error(Errc::OutOfRange, "u beyond w_max");
    TailReport rep;
    rep.kappa = J.kappa();
    rep.u = u;
    rep.w_start = std::pow(static_cast<double>(J.kappa()), 0.6);
    rep.points = points;
    rep.max_violation = -std::numeric_limits<double>::infinity();
    if (rep.w_start >= u) {
        rep.max_violation = 0;
        return rep;
    }
    for (int i = 1; i <= points; ++i) {
        const double w = rep.w_start + (u - rep.w_start) * i / points;
        const double bound = std::exp(-w * w / J.kappa());
        const double diff = J.j(u - w) - bound;
        if (i == 1) rep.min_margin_near_start = -diff;
        if (diff > rep.max_violation) {
            rep.max_violation = diff;
            rep.worst_w = w;
        }
    }
    return rep;
}

}  // namespace wsieve::dde
