#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wsieve/delay_ode.hpp"

namespace wsieve::moments {

/// P(w) in the monomial basis, required positive on [0, u].
/// P*(w) is P(w) for w >= 0 and 0 otherwise.
class SievePolynomial {
public:
    /// Throws DomainError when P is not positive on [0, u].
    SievePolynomial(std::vector<double> coefficients, double u);

    static SievePolynomial constant_one(double u) { return SievePolynomial({1.0}, u); }

    const std::vector<double>& coefficients() const noexcept { return coeffs_; }
    double u() const noexcept { return u_; }
    double operator()(double w) const;
    double star(double w) const { return w >= 0 ? (*this)(w) : 0.0; }
    double sup() const noexcept { return sup_; }
    double inf() const noexcept { return inf_; }
    bool is_constant() const noexcept { return coeffs_.size() <= 1; }

private:
    std::vector<double> coeffs_;
    double u_;
    double sup_ = 0, inf_ = 0;
};

enum class Source { dde, saddle };

struct MomentReport {
    std::string quantity;
    int kappa = 0;
    double u = 0;
    double numeric = 0;
    std::optional<double> asymptotic;  // only when u = kappa - 1/9
    double difference = 0;             // numeric - asymptotic
    double envelope = 0;               // order of the error term
    double quad_error = 0;
};

inline constexpr double kMomentTolerance = 1e-10;

/// J1(i) = int_0^u w^i j'(u - w) dw from the DDE solution (needs J.w_max() >= u).
MomentReport moment_J1(const dde::JFunction& J, double u, int i, double tol = kMomentTolerance);
/// J2(0) = int_0^u log w j'(u - w) dw.
MomentReport moment_J2(const dde::JFunction& J, double u, double tol = kMomentTolerance);

/// Same integrals with j'(u - w) replaced by the saddle-point main term on
/// [0, min(u, kappa^(3/5))], with u = kappa - 1/3 - d.
MomentReport moment_J1(const dde::SaddleParams& sp, int i, double tol = kMomentTolerance);
MomentReport moment_J2(const dde::SaddleParams& sp, double tol = kMomentTolerance);

/// Convenience form that solves the DDE itself when source = dde.
MomentReport moment_J1(int kappa, double u, int i, Source source);
MomentReport moment_J2(int kappa, double u, Source source);

/// Asymptotic comparators at u = kappa - 1/9.
double asymptotic_J1_0(int kappa);
double asymptotic_J1_1(int kappa);
double asymptotic_J2_0(int kappa);

struct Ratios {
    int kappa = 0;
    double r1 = 0;  // J1(1)/J1(0)
    double r2 = 0;  // J2(0)/J1(0)
    double r1_asymptotic = 0;  // sqrt(kappa/pi) - 1/9
    double r2_asymptotic = 0;  // (1/2) log kappa + (1/2) Psi(1/2) - 2/(9 sqrt(pi kappa))
};

/// Ratios at u = kappa - 1/9 from a DDE solution covering u.
Ratios ratios(const dde::JFunction& J);
Ratios ratios(int kappa);

struct MainIntegrals {
    double I1 = 0, I2 = 0, I3 = 0;
};

/// int_w^l (1 - t/l) dt / t.
double inner_I3(double w, double l);

/// int_0^w (P(w) - P(w - t))^2 (1 - t/l) dt / t, exact polynomial integration.
double inner_I2(const SievePolynomial& P, double w, double l);

/// Main-term integrals I1, I2, I3. DomainError when u > l.
MainIntegrals main_integrals(const dde::JFunction& J, double u, double l, const SievePolynomial& P,
                             double tol = kMomentTolerance);

/// CSV rows "kappa,quantity,numeric,asymptotic,diff,envelope".
std::string moments_csv(const std::vector<MomentReport>& rows, bool header = true);

}  // namespace wsieve::moments
