#pragma once

#include <cmath>

#include "papeq/errors.hpp"

namespace papeq {

// Euler gamma function for real x > 0, Lanczos approximation with g = 7 and
// 9 coefficients. Relative error is below 1e-13 on (0, 10], comfortably
// inside the 1e-10 budget the contraction-constant formula needs.
inline double gamma_function(double x) {
    if (!(x > 0.0))
        throw DomainError("gamma_function: argument must be positive");

    static constexpr double g = 7.0;
    static constexpr double coeff[9] = {
        0.99999999999980993,     676.5203681218851,    -1259.1392167224028,
        771.32342877765313,     -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
    static constexpr double pi = 3.14159265358979323846;
    static constexpr double sqrt_two_pi = 2.50662827463100050242;

    // Reflection keeps the shifted argument of the core formula >= 0.5.
    if (x < 0.5)
        return pi / (std::sin(pi * x) * gamma_function(1.0 - x));

    const double z = x - 1.0;
    double acc = coeff[0];
    for (int i = 1; i < 9; ++i)
        acc += coeff[i] / (z + static_cast<double>(i));
    const double t = z + g + 0.5;
    return sqrt_two_pi * std::pow(t, z + 0.5) * std::exp(-t) * acc;
}

} // namespace papeq
