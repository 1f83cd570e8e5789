#include "spiralspec/fourier.hpp"

#include <stdexcept>

namespace spiralspec {

Mat fourier_diff(int n, int order) {
  if (n < 7) throw std::invalid_argument("fourier_diff: N must be >= 7");
  if (order != 1 && order != 2)
    throw std::invalid_argument("fourier_diff: order must be 1 or 2");
  const double h = 2.0 * pi / n;
  const bool even = (n % 2 == 0);
  Mat d(n, n);
  if (order == 1) {
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (j == k) {
          d(j, k) = 0.0;
        } else {
          const int m = j - k;
          const double sign = (m % 2 == 0) ? 1.0 : -1.0;
          d(j, k) = even ? 0.5 * sign / std::tan(0.5 * m * h)
                         : 0.5 * sign / std::sin(0.5 * m * h);
        }
      }
  } else if (even) {
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (j == k) {
          d(j, k) = -pi * pi / (3.0 * h * h) - 1.0 / 6.0;
        } else {
          const int m = j - k;
          const double sign = (m % 2 == 0) ? 1.0 : -1.0;
          const double s = std::sin(0.5 * m * h);
          d(j, k) = -sign / (2.0 * s * s);
        }
      }
  } else {
    // odd grids have an alias-free first derivative, so the square is the
    // exact second derivative on every representable mode
    const Mat d1 = fourier_diff(n, 1);
    d = d1 * d1;
  }
  return d;
}

namespace {

// Complex Fourier coefficients c_m, m = -floor(n/2) .. ceil(n/2)-1, by direct
// summation; sample counts here stay small (<= a few hundred), so O(n^2) is
// fine.
CVec dft_coeffs(const Vec& f) {
  const int n = int(f.size());
  CVec c(n);
  const int lo = -(n / 2);
  for (int m = lo; m < lo + n; ++m) {
    Complex acc(0, 0);
    for (int j = 0; j < n; ++j)
      acc += f[j] * std::exp(Complex(0, -2.0 * pi * m * j / n));
    c[m - lo] = acc / double(n);
  }
  return c;
}

}  // namespace

Vec fourier_resample(const Vec& samples, int m) {
  const int n = int(samples.size());
  if (n < 4 || m < 2) throw std::invalid_argument("fourier_resample: bad sizes");
  const CVec c = dft_coeffs(samples);
  const int lo = -(n / 2);
  Vec out(m);
  for (int j = 0; j < m; ++j) {
    const double x = 2.0 * pi * j / m;
    Complex acc(0, 0);
    for (int k = lo + (n % 2 == 0 ? 1 : 0); k < lo + n; ++k)
      acc += c[k - lo] * std::exp(Complex(0, k * x));
    if (n % 2 == 0)  // split the Nyquist mode symmetrically (cosine)
      acc += c[0] * std::cos(0.5 * n * x);
    out[j] = acc.real();
  }
  return out;
}

Vec fourier_derivative(const Vec& samples) {
  const int n = int(samples.size());
  const CVec c = dft_coeffs(samples);
  const int lo = -(n / 2);
  Vec out(n);
  for (int j = 0; j < n; ++j) {
    const double x = 2.0 * pi * j / n;
    Complex acc(0, 0);
    for (int k = lo + (n % 2 == 0 ? 1 : 0); k < lo + n; ++k)
      acc += Complex(0, k) * c[k - lo] * std::exp(Complex(0, k * x));
    out[j] = acc.real();  // for even n the Nyquist cosine derivative vanishes
  }
  return out;
}

}  // namespace spiralspec
