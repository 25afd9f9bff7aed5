#pragma once

namespace wsieve::special {

inline constexpr double kEulerGamma = 0.57721566490153286060651209;
inline constexpr double kPi = 3.14159265358979323846264338;

/// log|Gamma(x)|. PoleError at nonpositive integers.
double log_gamma(double x);

/// Psi(x) = Gamma'(x)/Gamma(x). PoleError at nonpositive integers.
double digamma(double x);

/// Gamma(s, x) = int_x^inf t^(s-1) e^(-t) dt for s > 0, x >= 0.
double upper_incomplete_gamma(double s, double x);

/// log Gamma(s, x); stays finite where Gamma(s, x) underflows.
double log_upper_incomplete_gamma(double s, double x);

}  // namespace wsieve::special
