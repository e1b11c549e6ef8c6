#pragma once

// Test-only oracles, independent of the library implementation paths they
// check.

#include <cmath>
#include <complex>
#include <random>

namespace oracle {

using Complex = std::complex<double>;

// central finite difference of a complex-valued function of a real parameter
template <typename F>
Complex central_diff(F&& f, double t, double h) {
    return (f(t + h) - f(t - h)) / (2.0 * h);
}

template <typename F>
Complex second_diff(F&& f, double t, double h) {
    return (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h);
}

// Exterior map of the ellipse with semi-axes (a, 1) by inverting the
// Joukowski-type relation  z = d1 w + d_{-1}/w,  d1 = (a+1)/2, d_{-1} =
// (a-1)/2: the quadratic root with |w| > 1.
inline Complex joukowski_exterior(double a, Complex z) {
    const Complex disc = std::sqrt(z * z - (a * a - 1.0));
    const Complex w1 = (z + disc) / (a + 1.0);
    const Complex w2 = (z - disc) / (a + 1.0);
    return std::abs(w1) >= std::abs(w2) ? w1 : w2;
}

inline std::mt19937 rng() { return std::mt19937{12345u}; }

}  // namespace oracle
