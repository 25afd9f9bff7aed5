#pragma once

#include <string>
#include <vector>

namespace wsieve::dde {

struct CKappa {
    double log_value = 0;  // -gamma*kappa - log Gamma(kappa+1)
    double value = 0;      // 0 when it underflows
    bool underflow = false;
};

/// c_kappa = exp(-gamma kappa) / Gamma(kappa + 1), evaluated in the log domain.
CKappa c_kappa(int kappa);

struct SolveOptions {
    double tol = 1e-10;  // relative
    int degree = 32;     // Chebyshev degree per piece
};

/// Normalized solution q = j_kappa / c_kappa of w q'(w) = kappa q(w) - kappa q(w-1),
/// with q(w) = w^kappa on (0, 1] and q = 0 for w <= 0.
///
/// Internally the slowly varying factor h(w) = w^-kappa q(w) is stored as
/// Chebyshev pieces. Each unit interval (m, m+1] is split adaptively, so the
/// integer knots are always piece boundaries. Evaluation is pure and safe to
/// call concurrently.
class JFunction {
public:
    struct Piece {
        double a = 0, b = 0;
        std::vector<long double> h;   // Chebyshev coefficients of h on [a, b]
        std::vector<long double> dh;  // Chebyshev coefficients of h'
    };

    int kappa() const noexcept { return kappa_; }
    double w_max() const noexcept { return w_max_; }
    double tol() const noexcept { return tol_; }
    int degree() const noexcept { return degree_; }
    const std::vector<Piece>& pieces() const noexcept { return pieces_; }
    double log_c() const noexcept { return log_c_; }

    /// q(w); RangeOverflow if it exceeds double range.
    double q(double w) const;
    /// q'(w).
    double q_prime(double w) const;
    /// log q(w); -infinity for w <= 0.
    double log_q(double w) const;
    /// h(w) = w^-kappa q(w) for 0 < w <= w_max.
    long double h(double w) const;

    /// j(w) = c_kappa q(w), evaluated through logs.
    double j(double w) const;
    /// j'(w) = c_kappa q'(w).
    double j_prime(double w) const;
    /// log j(w).
    double log_j(double w) const;

    /// Max relative DDE residual |w q' - kappa q + kappa q(w-1)| / (kappa q) on a grid.
    double max_residual(int grid_points = 1000) const;

    std::string to_json() const;
    static JFunction from_json(const std::string& text);

private:
    friend JFunction solve_j(int kappa, double w_max, const SolveOptions& options);
    const Piece& piece_for(double w) const;
    long double dh(double w) const;

    int kappa_ = 1;
    double w_max_ = 1;
    double tol_ = 1e-10;
    int degree_ = 32;
    double log_c_ = 0;
    std::vector<Piece> pieces_;
};

/// Method of steps on each unit interval. Requires 1 <= w_max <= kappa + 2 and
/// kappa <= kMaxKappa. Throws ToleranceNotMet when the residual check fails.
JFunction solve_j(int kappa, double w_max, const SolveOptions& options = {});

inline constexpr int kMaxKappa = 400;

/// order 0: j(w); order 1: j'(w). Zero for w <= 0; OutOfRange for w > w_max.
double eval_j(const JFunction& J, double w, int order);

struct SaddleParams {
    int kappa = 1;
    double d = -2.0 / 9.0;

    double u() const { return kappa - 1.0 / 3.0 - d; }
};

struct SaddleValue {
    double value = 0;     // main term of j'(u - w)
    double envelope = 0;  // (1/kappa + w^6/kappa^4) / sqrt(pi kappa)
};

/// Selberg's approximation to j'(u - w) for 0 <= w <= kappa^(3/5), u = kappa - 1/3 - d.
/// OutOfValidity outside that range.
SaddleValue saddle_j_prime(const SaddleParams& params, double w);

struct TailReport {
    int kappa = 0;
    double u = 0;
    double w_start = 0;  // kappa^(3/5)
    int points = 0;
    double max_violation = 0;  // max over grid of j(u-w) - exp(-w^2/kappa); <= 0 means no violation
    double worst_w = 0;
    double min_margin_near_start = 0;  // exp(-w^2/kappa) - j(u-w) at the first grid point
};

/// Checks j(u - w) <= exp(-w^2/kappa) on a grid over (kappa^(3/5), u].
TailReport tail_check(const JFunction& J, double u, int points = 2000);

}  // namespace wsieve::dde
