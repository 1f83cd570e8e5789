#ifndef SPIRALSPEC_WAVETRAIN_HPP
#define SPIRALSPEC_WAVETRAIN_HPP

#include <vector>

#include "spiralspec/kinetics.hpp"
#include "spiralspec/types.hpp"

namespace spiralspec {

/// Periodic wave train u_wt(k x - omega t): n_components x M samples on a
/// uniform phi-grid over [0, 2pi). Satisfies k^2 D u'' + omega u' + f(u) = 0.
struct WaveTrain {
  ReactionModel model;
  double k = 0.0;
  double omega = 0.0;
  Mat profile;            // n x M
  double residual = 0.0;  // sup norm of the steady equation

  int samples() const { return int(profile.cols()); }
};

struct WaveTrainOptions {
  double tol = 1e-10;
  int max_iter = 50;
};

/// <d_phi reference, candidate - reference> with the spectral derivative and
/// trapezoid quadrature; pins the translation phase.
double phase_condition(const Mat& reference, const Mat& candidate);

/// Newton on F(u, omega) = k^2 D u_phiphi + omega u_phi + f(u) = 0 plus the
/// phase condition against the guess. Throws on divergence; collapse onto a
/// spatially constant state is reported as "equilibrium, not wave train".
WaveTrain solve_wavetrain(const ReactionModel& model, double k, const Mat& guess_profile,
                          double guess_omega, const WaveTrainOptions& opts = {});

/// Re-solve at fixed omega with k free (used to match a wave train to the
/// far-field frequency of a computed spiral).
WaveTrain solve_wavetrain_at_omega(const ReactionModel& model, double omega,
                                   const WaveTrain& seed, const WaveTrainOptions& opts = {});

/// Secant slope (omega_nl(k+dk) - omega_nl(k-dk)) / (2 dk) at the seed.
double group_velocity(const WaveTrain& seed, double dk,
                      const WaveTrainOptions& opts = {});

struct DispersionCurve {
  Vec ks;
  Vec omegas;
  double group_velocity = 0.0;  // at the seed wavenumber, dk/2 secant
  double cg_error = 0.0;        // |cg(dk) - cg(dk/2)| Richardson estimate
  bool fold_detected = false;
};

/// Pseudo-arclength continuation of the wave-train family in k over
/// [k_min, k_max]; folds in k truncate the curve and are flagged.
DispersionCurve dispersion_curve(const ReactionModel& model, double k_min, double k_max,
                                 const WaveTrain& seed, int max_steps = 200,
                                 double initial_step = 0.02);

/// Admissibility per the wave-train hypotheses: (i) nu = 0 simple for
/// A_wt(0) with eigenfunction (u', k u''), (ii) d nu_*/d lambda (0) < 0,
/// (iii) no other imaginary-axis spatial eigenvalues at lambda = 0,
/// (iv) none for the supplied real lambda > 0 probes.
struct AdmissibilityReport {
  bool admissible = false;
  double eigenfunction_alignment = 0.0;  // |<v, (u',ku'')>| after normalization
  double nu_zero_abs = 0.0;              // |nu| of the eigenvalue continuing 0
  double second_nu_abs = 0.0;            // distance of the next eigenvalue (simplicity)
  double dnu_dlambda = 0.0;              // finite difference at lambda = 0
  double min_abs_re_other = 0.0;         // clause (iii) margin
  double min_abs_re_probes = 0.0;        // clause (iv) margin
  std::vector<int> failed_clauses;       // 1..4
};

AdmissibilityReport check_admissibility(const WaveTrain& wt,
                                        const std::vector<double>& lambda_probes);

/// Residual of the steady equation on an m-point spectral grid (profile is
/// trigonometrically resampled when m differs from the stored sampling).
double wavetrain_residual(const WaveTrain& wt, int m = 0);

}  // namespace spiralspec

#endif
