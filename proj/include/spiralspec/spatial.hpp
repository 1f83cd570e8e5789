#ifndef SPIRALSPEC_SPATIAL_HPP
#define SPIRALSPEC_SPATIAL_HPP

#include <optional>
#include <string>
#include <vector>

#include "spiralspec/types.hpp"
#include "spiralspec/wavetrain.hpp"

namespace spiralspec {

/// Spatial-dynamics operator of the wave train,
///   A_wt(lambda) = [ -k d_phi, 1 ; -D^{-1}(omega d_phi + f_u - lambda), -k d_phi ],
/// as a dense 2nM x 2nM matrix on Fourier samples, shifted by eta*I when
/// eta != 0. Blocks are component-major, u before v.
CMat assemble_awt(const WaveTrain& wt, Complex lambda, double eta);

/// Bloch operator L_B(nu) = D (nu + k d_phi)^2 + omega d_phi + f_u(u_wt) on
/// nM samples; its eigenvalues lambda correspond to nu in spec(A_wt(lambda)).
CMat bloch_operator(const WaveTrain& wt, Complex nu);

/// Spatial eigenvalues nearest the imaginary axis, sorted by real part. The
/// labels nu_{-1}, nu_0 are identified by the sign split, which exists for
/// real lambda > 0 on admissible wave trains; elsewhere use track_labels.
struct SpatialSpectrum {
  Complex lambda;
  std::vector<Complex> nus;  // 2*n_keep retained, ascending real part
  int idx_minus1 = -1;       // rightmost with negative real part (if split)
  int idx_0 = -1;            // leftmost with positive real part (if split)
  int truncation = 0;        // modes retained
};
SpatialSpectrum spatial_spectrum(const WaveTrain& wt, Complex lambda, int n_keep = 20);

/// Spectral gap J0(lambda) = (-Re nu_0, -Re nu_{-1}) and the chosen weight.
struct WeightPlan {
  Complex lambda;
  double j0_lo = 0.0;
  double j0_hi = 0.0;
  bool empty = false;  // lambda on the absolute spectrum
  double eta = 0.0;
  bool eta_set = false;
  bool warned = false;  // fixed weight outside the (safety-shrunk) gap
};

WeightPlan spectral_gap(Complex lambda, Complex nu_minus1, Complex nu_0);

struct WeightPolicy {
  enum class Kind { Midpoint, Fixed } kind = Kind::Midpoint;
  double fixed_eta = 0.0;
  double safety = 0.9;  // validate membership in the safety-shrunk gap

  static WeightPolicy midpoint() { return {}; }
  static WeightPolicy fixed(double eta) { return {Kind::Fixed, eta, 0.9}; }
};
WeightPlan select_weight(const WeightPlan& gap, const WeightPolicy& policy);

/// Continuation of the labels nu_{-1}, nu_0 from the anchor (large real
/// lambda) along a lambda-polyline by nearest-neighbour matching with step
/// bisection; an unresolved collision (lambda on the absolute spectrum) is
/// reported with the offending segment.
struct LabeledPath {
  std::vector<Complex> lambdas;
  std::vector<Complex> nu_minus1;
  std::vector<Complex> nu_0;
  std::vector<SpatialSpectrum> spectra;  // per path point
  bool collision = false;
  int collision_segment = -1;
};
struct TrackOptions {
  double anchor = 1.0;       // real anchor lambda > 0
  double min_step = 1e-6;    // bisection floor (fraction of segment)
  int n_keep = 20;
};
LabeledPath track_labels(const WaveTrain& wt, const std::vector<Complex>& path,
                         const TrackOptions& opts = {});

struct SpectralCurve {
  enum class Kind { FredholmBoundary, AbsoluteSpectrum };
  Kind kind = Kind::FredholmBoundary;
  int branch = 0;
  std::vector<Complex> points;
  std::vector<double> param;  // gamma (Fredholm) or Im(nu1-nu2)/2 (absolute)
  bool truncated = false;
  std::string note;
};

/// Fredholm boundary branches: eigenvalues of L_B(-eta + i gamma) over the
/// gamma grid, keeping the branch_count rightmost and matching them across
/// gamma by continuity (with one level of refinement on jumps).
std::vector<SpectralCurve> fredholm_curves(const WaveTrain& wt, double eta,
                                           const Vec& gamma_grid, int branch_count);

/// A branch point of the absolute spectrum: double spatial eigenvalue with a
/// Jordan block, located by Newton on
///   { A_wt(lambda) u = nu u,  A_wt(lambda) w = nu w + u,  normalizations }.
struct BranchPoint {
  Complex lambda;
  Complex nu;
  CVec u, w;
  int samples = 0;  // phi-resolution used
};
BranchPoint find_branch_point(const WaveTrain& wt, Complex lambda_guess,
                              Complex nu_guess, int m = 64);

/// Scan lambda along the segment [from, to] for the first sign change of
/// Re nu_0 - Re nu_{-1} (a transversal crossing of the absolute spectrum),
/// then walk the double-root system down to the branch point.
std::optional<BranchPoint> find_branch_point_scan(const WaveTrain& wt, Complex from,
                                                  Complex to, int m = 64,
                                                  int scan_points = 60);

/// Arclength continuation of the absolute spectrum from a branch point, in
/// the parameter tau = Im(nu_1 - nu_2)/2 of the augmented two-root system
///   { L_B(nu_i) u_i = lambda u_i, Re nu_1 = Re nu_2, normalizations }.
/// A third real-part collision (triple junction) halts the trace.
SpectralCurve absolute_spectrum_trace(const WaveTrain& wt, const BranchPoint& seed,
                                      int steps, double step = 0.05);

/// Downsample a wave train onto m phi-points (trigonometric interpolation);
/// spatial-eigenvalue work is cheaper at reduced resolution.
WaveTrain resample_wavetrain(const WaveTrain& wt, int m);

/// Point-to-polyline distance in the lambda plane.
double curve_distance(Complex lambda, const SpectralCurve& curve);
double curves_distance(Complex lambda, const std::vector<SpectralCurve>& curves);

}  // namespace spiralspec

#endif
