#include "spiralspec/convdiff.hpp"

#include <stdexcept>

#include "spiralspec/fd.hpp"

namespace spiralspec {

Vec cd_analytic_spectrum(double c, double R, int n_max) {
  if (n_max < 1) throw std::invalid_argument("cd_analytic_spectrum: n_max >= 1");
  Vec lam(n_max);
  for (int n = 1; n <= n_max; ++n)
    lam[n - 1] = -0.25 * c * c - double(n) * n * pi * pi / (R * R);
  return lam;
}

CdSpatialEigs cd_spatial_eigs(double c, Complex lambda) {
  CdSpatialEigs out;
  const Complex root = std::sqrt(0.25 * c * c + lambda);
  out.nu_minus1 = -0.5 * c - root;
  out.nu_0 = -0.5 * c + root;
  out.gap_lo = -out.nu_0.real();
  out.gap_hi = -out.nu_minus1.real();
  out.gap_empty = std::abs(out.nu_0.real() - out.nu_minus1.real()) <= 1e-10;
  return out;
}

std::vector<Complex> cd_fredholm_boundary(double c, double eta, const Vec& ell_range) {
  std::vector<Complex> curve;
  curve.reserve(ell_range.size());
  for (double ell : ell_range)
    curve.emplace_back(-ell * ell + eta * eta - c * eta, ell * (c - 2.0 * eta));
  return curve;
}

SpMat cd_assemble(const ConvDiffProblem& p) {
  if (p.c <= 0.0) throw std::invalid_argument("cd_assemble: c must be positive");
  const IntervalGrid grid = IntervalGrid::make(-0.5 * p.R, p.R, p.h);
  const auto bc = BoundarySpec::dirichlet();
  SpMat op = fd_derivative_1d(grid, 2, 2, bc);
  const double drift = p.c - 2.0 * p.eta;
  if (drift != 0.0) op += SpMat(drift * fd_derivative_1d(grid, 1, 2, bc));
  const double shift0 = p.eta * p.eta - p.c * p.eta;
  if (shift0 != 0.0) {
    SpMat eye(op.rows(), op.cols());
    eye.setIdentity();
    op += SpMat(shift0 * eye);
  }
  op.prune(Complex(0.0), 0.0);
  op.makeCompressed();
  return op;
}

}  // namespace spiralspec
