#pragma once

#include <span>
#include <vector>

#include "extmap/curve.hpp"

namespace extmap {

/// Derivative of a periodic sequence sampled at n equispaced points over the
/// given period, by discrete Fourier (spectral) differentiation. For even n
/// the Nyquist mode is differentiated as the cosine branch (zero derivative
/// at the nodes).
std::vector<Complex> fourier_derivative(std::span<const Complex> values, double period);

}  // namespace extmap
