#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wsieve/delay_ode.hpp"
#include "wsieve/moments.hpp"

namespace wsieve::bound {

/// Exponent bookkeeping: y = x^(1/alpha), z = x^(1/U), z' = x^(1/V), xi = z'^u.
struct SieveParameters {
    int kappa = 2;
    double u = 0;
    double l = 0;
    double U = 0;
    double V = 0;
    double alpha = 0;
    double delta = 0;
    double eps = 0;
    double b = 0;
    long r = 0;
};

struct ParamOptions {
    double delta = 0;
    double eps = 0;
    double alpha = 1000;
};

/// u = kappa - 1/9, l = 2 kappa, U = 1 + 2u/l + delta, V = lU,
/// b = r + 1 - kappa U - eps. InfeasibleB when b <= 0 or r <= 2 kappa - 10/9.
SieveParameters choose_params(int kappa, long r, const ParamOptions& options = {});

/// Same with explicit u and l (u <= l, l >= 1).
SieveParameters choose_params(int kappa, long r, double u, double l, const ParamOptions& options = {});

/// 1 + gamma/2 + log 4.
double linear_coefficient();

struct ExplicitTerms {
    double half_klogk = 0;  // (1/2) kappa log kappa
    double linear = 0;      // (1 + gamma/2 + log 4) kappa
    double sqrt_term = 0;   // (13/18) sqrt(kappa/pi)
    double slack = 0;       // slack * log kappa
    double total() const { return half_klogk + linear + sqrt_term + slack; }
};

ExplicitTerms explicit_terms(int kappa, double slack = 0);

/// Smallest integer above the displayed main terms plus slack*log(kappa), and above 2 kappa - 10/9.
long r_bound_explicit(int kappa, double slack = 0);

struct MarginPoint {
    long r = 0;
    double margin = 0;
};

struct NumericBound {
    int kappa = 0;
    double u = 0, l = 0;
    long r = 0;
    double I1 = 0, I2 = 0, I3 = 0;
    double r_continuous = 0;  // root of the linear margin
    std::vector<MarginPoint> curve;

    /// b(r) I1 - kappa I2 - kappa I3.
    double margin(long r_value, const ParamOptions& options = {}) const;
};

/// Smallest integer r with b(r) I1 - kappa I2 - kappa I3 > 0 (and r > 2 kappa - 10/9).
NumericBound r_bound_numeric(const dde::JFunction& J, double l, double u,
                             const moments::SievePolynomial& P, const ParamOptions& options = {},
                             int curve_halfwidth = 3);
/// Default choices u = kappa - 1/9, l = 2 kappa, P = 1.
NumericBound r_bound_numeric(int kappa, const ParamOptions& options = {});

/// With P = 1 the condition is b > kappa (log l - 1) - kappa r2 + (kappa/l) r1 at general u;
/// returns I1 times the difference of the two sides.
double reduced_margin(const dde::JFunction& J, double u, double l, long r,
                      const ParamOptions& options = {});

inline constexpr int kNumericKappaLimit = 120;

struct BoundRow {
    int kappa = 0;
    long r_explicit = 0;
    std::optional<long> r_numeric;
    std::string numeric_note;  // reason when r_numeric is absent
    ExplicitTerms terms;
    std::optional<double> margin_at_r;  // numeric margin at r_explicit
};

/// Rows in input order, computed on up to `threads` workers.
std::vector<BoundRow> table(const std::vector<int>& kappas, double slack = 0,
                            const ParamOptions& options = {}, unsigned threads = 0);

std::string table_csv(const std::vector<BoundRow>& rows);
std::string table_json(const std::vector<BoundRow>& rows);

struct LScanPoint {
    double l = 0;
    long r = 0;
    double r_continuous = 0;
};

/// Diagnostic: numeric r over a set of l values at u = kappa - 1/9.
std::vector<LScanPoint> l_scan(int kappa, const std::vector<double>& ls,
                               const ParamOptions& options = {});

}  // namespace wsieve::bound
