#pragma once

#include <functional>
#include <span>

namespace wsieve::quad {

struct QuadResult {
    double value = 0;
    double abs_error = 0;
    int intervals = 0;
};

/// Globally adaptive 21-point Gauss-Kronrod on [a, b]. Interior breakpoints
/// start the subdivision so kinks of piecewise integrands sit on interval ends.
/// Throws QuadratureFailure when abs_tol is not reached within max_intervals.
QuadResult integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                     std::span<const double> breakpoints = {}, int max_intervals = 20000);

}  // namespace wsieve::quad
