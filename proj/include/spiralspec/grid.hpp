#ifndef SPIRALSPEC_GRID_HPP
#define SPIRALSPEC_GRID_HPP

#include <cmath>
#include <stdexcept>

#include "spiralspec/types.hpp"

namespace spiralspec {

/// Uniform grid on [a, a+R] including both endpoints.
struct IntervalGrid {
  double length = 0.0;   // R
  double spacing = 0.0;  // h
  Vec points;

  static IntervalGrid make(double a, double length, double h) {
    if (length <= 0.0 || h <= 0.0) throw std::invalid_argument("grid: R, h must be positive");
    const double ratio = length / h;
    const auto n_cells = static_cast<long>(std::llround(ratio));
    if (std::abs(ratio - double(n_cells)) > 1e-9 * ratio)
      throw std::invalid_argument("grid: R must be an integer multiple of h");
    IntervalGrid g;
    g.length = length;
    g.spacing = h;
    g.points = linspace(a, a + length, int(n_cells) + 1);
    return g;
  }

  int size() const { return int(points.size()); }
};

/// Polar grid on the disk of radius R: a single node at the origin plus
/// N_theta * (N_r - 1) nodes at radii i*h_r, i = 1..N_r-1, angles 2*pi*j/N_theta.
/// Scalar unknowns per component: N_theta*(N_r-1) + 1; node 0 is the origin and
/// node 1 + (i-1)*N_theta + j sits at (i*h_r, 2*pi*j/N_theta).
struct PolarGrid {
  double radius = 0.0;
  double h_r = 0.05;
  int n_r = 0;      // N_r = R/h_r + 1 (rings 0..N_r-1, ring 0 = origin)
  int n_theta = 0;  // power of two

  static PolarGrid make(double radius, double h_r = 0.05, int n_theta = 64) {
    if (radius <= 0.0 || h_r <= 0.0) throw std::invalid_argument("polar grid: R, h_r positive");
    const double ratio = radius / h_r;
    const auto cells = static_cast<long>(std::llround(ratio));
    if (std::abs(ratio - double(cells)) > 1e-9 * std::max(1.0, ratio))
      throw std::invalid_argument("polar grid: R must be an integer multiple of h_r");
    if (n_theta < 4 || (n_theta & (n_theta - 1)) != 0)
      throw std::invalid_argument("polar grid: N_theta must be a power of two >= 4");
    PolarGrid g;
    g.radius = radius;
    g.h_r = h_r;
    g.n_r = int(cells) + 1;
    g.n_theta = n_theta;
    return g;
  }

  /// Unknowns per component.
  int nodes() const { return n_theta * (n_r - 1) + 1; }
  /// Flat index of (ring i >= 1, angle j).
  int index(int ring, int j) const { return 1 + (ring - 1) * n_theta + j; }
  /// Ring of a flat index (0 = origin).
  int ring_of(int idx) const { return idx == 0 ? 0 : 1 + (idx - 1) / n_theta; }
  double r_of(int idx) const { return ring_of(idx) * h_r; }
  double theta(int j) const { return 2.0 * pi * j / n_theta; }
};

}  // namespace spiralspec

#endif
