#ifndef SPIRALSPEC_FOURIER_HPP
#define SPIRALSPEC_FOURIER_HPP

#include "spiralspec/types.hpp"

namespace spiralspec {

/// Fourier differentiation matrix on N uniform samples of a 2*pi-periodic
/// function, order 1 or 2. Exact on trigonometric polynomials of degree
/// < N/2. Both parities are supported (N >= 7); odd N gives an alias-free
/// first derivative whose square is used as the second derivative.
Mat fourier_diff(int n, int order);

/// Trigonometric interpolation of periodic samples onto m uniform points
/// (resampling via the FFT coefficients; m need not equal the input size).
Vec fourier_resample(const Vec& samples, int m);

/// Spectral derivative of periodic samples (order 1).
Vec fourier_derivative(const Vec& samples);

}  // namespace spiralspec

#endif
