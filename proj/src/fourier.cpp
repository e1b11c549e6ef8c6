#include "extmap/fourier.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace extmap {

// Direct O(n^2) transforms; desk-scale n keeps this well under the solver
// cost, and the root-of-unity table keeps the twiddles at full accuracy.
std::vector<Complex> fourier_derivative(std::span<const Complex> values, double period) {
    const std::size_t n = values.size();
    if (n == 0) return {};
    if (!(period > 0.0)) throw std::invalid_argument("fourier_derivative: period must be positive");

    std::vector<Complex> roots(n);
    for (std::size_t m = 0; m < n; ++m)
        roots[m] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(m) / n);

    std::vector<Complex> coeff(n);
    for (std::size_t k = 0; k < n; ++k) {
        Complex acc(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j)
            acc += values[j] * std::conj(roots[(j * k) % n]);
        coeff[k] = acc / static_cast<double>(n);
    }

    // signed frequency per bin; Nyquist (even n) differentiates to zero
    std::vector<double> freq(n);
    for (std::size_t k = 0; k < n; ++k) {
        long m = static_cast<long>(k);
        if (k > (n - 1) / 2) m -= static_cast<long>(n);
        if (n % 2 == 0 && k == n / 2) m = 0;
        freq[k] = 2.0 * std::numbers::pi * static_cast<double>(m) / period;
    }

    std::vector<Complex> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        Complex acc(0.0, 0.0);
        for (std::size_t k = 0; k < n; ++k)
            acc += Complex(0.0, freq[k]) * coeff[k] * roots[(j * k) % n];
        out[j] = acc;
    }
    return out;
}

}  // namespace extmap
