#ifndef SPIRALSPEC_CONVDIFF_HPP
#define SPIRALSPEC_CONVDIFF_HPP

#include <utility>

#include "spiralspec/grid.hpp"
#include "spiralspec/types.hpp"

namespace spiralspec {

/// The exactly solvable reference problem L_R u = u_xx + c u_x on
/// (-R/2, R/2) with Dirichlet ends, posed in the exponentially weighted
/// space with rate eta.
struct ConvDiffProblem {
  double c = 1.0;    // drift speed, c > 0
  double R = 100.0;  // interval length
  double h = 0.05;   // grid spacing (R/h integral)
  double eta = 0.0;  // weight

  /// Weights past c/2 re-expand the spectrum; flagged, not rejected.
  bool eta_flagged() const { return eta < 0.0 || eta > c; }
};

/// Spectrum of L_R: { -c^2/4 - n^2 pi^2 / R^2 : n = 1..n_max }.
Vec cd_analytic_spectrum(double c, double R, int n_max);

/// Spatial eigenvalues nu_{-1,0} = -c/2 -+ sqrt(c^2/4 + lambda) (principal
/// branch) and the spectral gap J0 = (-Re nu_0, -Re nu_{-1}).
struct CdSpatialEigs {
  Complex nu_minus1;
  Complex nu_0;
  double gap_lo = 0.0;  // -Re nu_0
  double gap_hi = 0.0;  // -Re nu_{-1}
  bool gap_empty = false;
};
CdSpatialEigs cd_spatial_eigs(double c, Complex lambda);

/// Weighted Fredholm boundary lambda(l) = -l^2 + i l (c - 2 eta) + eta^2 - c eta.
std::vector<Complex> cd_fredholm_boundary(double c, double eta, const Vec& ell_range);

/// Second-order finite-difference matrix of the conjugated operator in
/// expanded closed form, d_xx + (c - 2 eta) d_x + (eta^2 - c eta), with
/// Dirichlet elimination at both ends. Assembling the expanded form rather
/// than conjugating by e^{eta x} keeps every entry bounded at large R.
SpMat cd_assemble(const ConvDiffProblem& problem);

}  // namespace spiralspec

#endif
