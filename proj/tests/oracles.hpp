#pragma once

// Test-only oracles, independent of the library implementation paths they
// check. Values frozen in the test files were produced by these routines.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracles {

// High-precision gamma via Spouge's series with a = 32, evaluated in long
// double. Independent of the Lanczos path in the library.
inline long double spouge_gamma(long double x) {
    constexpr int a = 32;
    if (x < 0.5L) {
        const long double pi = 3.14159265358979323846264338328L;
        return pi / (std::sin(pi * x) * spouge_gamma(1.0L - x));
    }
    const long double z = x - 1.0L;
    long double acc = std::sqrt(2.0L * 3.14159265358979323846264338328L);
    long double fact = 1.0L; // (k-1)!
    for (int k = 1; k < a; ++k) {
        if (k > 1) fact *= static_cast<long double>(k - 1);
        const long double ak = static_cast<long double>(a - k);
        const long double c = std::pow(ak, k - 0.5L) * std::exp(ak) / fact;
        acc += (k % 2 ? c : -c) / (z + k);
    }
    return acc * std::pow(z + a, z + 0.5L) * std::exp(-(z + a));
}

// Dense-sampling supremum of |l - omega| / dist(l, spectrum) along the two
// sector boundary rays, with golden-section refinement around the best hit.
inline double sector_bound_dense(const std::vector<std::complex<double>>& eigs, double theta,
                                 double omega, int samples = 2000000) {
    auto ratio = [&](double r, double sign) {
        const std::complex<double> l =
            omega + r * std::polar(1.0, sign * theta);
        double dist = 1e300;
        for (const auto& e : eigs) dist = std::min(dist, std::abs(l - e));
        return r / dist;
    };
    double best = 0.0;
    for (double sign : {1.0, -1.0}) {
        const double lo = 1e-6, hi = 1e6;
        const double step = std::log(hi / lo) / samples;
        double best_r = lo;
        for (int k = 0; k <= samples; ++k) {
            const double r = lo * std::exp(step * k);
            const double v = ratio(r, sign);
            if (v > best) {
                best = v;
                best_r = r;
            }
        }
        // golden-section polish around the best radius
        double a = best_r * std::exp(-2.0 * step), b = best_r * std::exp(2.0 * step);
        const double gr = 0.6180339887498949;
        double c = b - gr * (b - a), d = a + gr * (b - a);
        for (int it = 0; it < 200; ++it) {
            if (ratio(c, sign) > ratio(d, sign))
                b = d;
            else
                a = c;
            c = b - gr * (b - a);
            d = a + gr * (b - a);
        }
        best = std::max(best, ratio(0.5 * (a + b), sign));
    }
    return best;
}

// Brute-force trapezoid integral on a dense uniform grid (kink-safe because
// of the sheer point count); used as the quadrature cross-check.
inline double dense_mean(const std::function<double(double)>& f, double r, long points) {
    long double acc = 0.0L;
    const double h = 2.0 * r / points;
    for (long k = 0; k <= points; ++k) {
        const double w = (k == 0 || k == points) ? 0.5 : 1.0;
        acc += w * f(-r + k * h);
    }
    return static_cast<double>(acc * h / (2.0 * r));
}

} // namespace oracles
