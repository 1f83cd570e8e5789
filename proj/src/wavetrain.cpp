#include "spiralspec/wavetrain.hpp"

#include <Eigen/Dense>
#include <stdexcept>

#include "spiralspec/fourier.hpp"
#include "spiralspec/linalg.hpp"
#include "spiralspec/spatial.hpp"

namespace spiralspec {

namespace {

// flattened layout: component-major, x[c*M + j] = u_c(phi_j)

Vec flatten(const Mat& profile) {
  const int n = int(profile.rows()), m = int(profile.cols());
  Vec x(n * m);
  for (int c = 0; c < n; ++c) x.segment(c * m, m) = profile.row(c).transpose();
  return x;
}

Mat unflatten(const Vec& x, int n, int m) {
  Mat p(n, m);
  for (int c = 0; c < n; ++c) p.row(c) = x.segment(c * m, m).transpose();
  return p;
}

Vec pde_rhs(const ReactionModel& model, double k, double omega, const Mat& profile,
            const Mat& d1, const Mat& d2) {
  const int n = model.n_components, m = int(profile.cols());
  Mat upp = profile * d2.transpose();
  Mat up = profile * d1.transpose();
  Vec out(n * m);
  for (int j = 0; j < m; ++j) {
    const Vec fj = model.f(profile.col(j));
    for (int c = 0; c < n; ++c)
      out[c * m + j] =
          k * k * model.diffusion[c] * upp(c, j) + omega * up(c, j) + fj[c];
  }
  return out;
}

Mat pde_jacobian(const ReactionModel& model, double k, double omega, const Mat& profile,
                 const Mat& d1, const Mat& d2) {
  const int n = model.n_components, m = int(profile.cols());
  Mat j = Mat::Zero(n * m, n * m);
  for (int c = 0; c < n; ++c)
    j.block(c * m, c * m, m, m) =
        k * k * model.diffusion[c] * d2 + omega * d1;
  for (int p = 0; p < m; ++p) {
    const Mat fu = model.f_u(profile.col(p));
    for (int c = 0; c < n; ++c)
      for (int c2 = 0; c2 < n; ++c2) j(c * m + p, c2 * m + p) += fu(c, c2);
  }
  return j;
}

Vec phase_row(const Mat& reference, const Mat& d1) {
  const int m = int(reference.cols());
  const Mat ref_phi = reference * d1.transpose();
  return flatten(ref_phi) * (2.0 * pi / m);
}

bool profile_constant(const Mat& p) {
  for (int c = 0; c < p.rows(); ++c)
    if (p.row(c).maxCoeff() - p.row(c).minCoeff() > 1e-3) return false;
  return true;
}

// Newton on the bordered system with one scalar unknown (omega or k) free.
struct SolveResult {
  Mat profile;
  double scalar;
  double residual;
  int steps;
};

SolveResult newton_wavetrain(const ReactionModel& model, bool omega_free, double fixed,
                             const Mat& guess, double scalar_guess,
                             const WaveTrainOptions& opts) {
  const int n = model.n_components, m = int(guess.cols());
  const Mat d1 = fourier_diff(m, 1), d2 = fourier_diff(m, 2);
  const Mat ref = guess;
  const Vec prow = phase_row(ref, d1);

  Mat u = guess;
  double s = scalar_guess;
  int steps = 0;
  for (int iter = 0; iter <= opts.max_iter; ++iter) {
    const double k = omega_free ? fixed : s;
    const double omega = omega_free ? s : fixed;
    const Vec f = pde_rhs(model, k, omega, u, d1, d2);
    const double pc = phase_condition(ref, u);
    const double res = f.lpNorm<Eigen::Infinity>();
    if (res <= opts.tol && std::abs(pc) <= opts.tol) {
      if (profile_constant(u))
        throw std::runtime_error("wavetrain: converged to an equilibrium, not wave train");
      return {u, s, res, steps};
    }
    if (iter == opts.max_iter) break;

    Mat j(n * m + 1, n * m + 1);
    j.topLeftCorner(n * m, n * m) = pde_jacobian(model, k, omega, u, d1, d2);
    const Mat up = u * d1.transpose();
    const Mat upp = u * d2.transpose();
    Vec scol(n * m);
    for (int c = 0; c < n; ++c)
      for (int p = 0; p < m; ++p)
        scol[c * m + p] = omega_free
                              ? up(c, p)
                              : 2.0 * k * model.diffusion[c] * upp(c, p);
    j.topRightCorner(n * m, 1) = scol;
    j.bottomLeftCorner(1, n * m) = prow.transpose();
    j(n * m, n * m) = 0.0;

    Vec rhs(n * m + 1);
    rhs.head(n * m) = -f;
    rhs[n * m] = -pc;
    const Vec delta = j.partialPivLu().solve(rhs);

    const double merit0 = rhs.norm();
    double step = 1.0;
    for (int halve = 0; halve < 5; ++halve) {
      Mat u_try = u + step * unflatten(delta.head(n * m), n, m);
      const double s_try = s + step * delta[n * m];
      const double k_t = omega_free ? fixed : s_try;
      const double om_t = omega_free ? s_try : fixed;
      Vec f_try(n * m + 1);
      f_try.head(n * m) = pde_rhs(model, k_t, om_t, u_try, d1, d2);
      f_try[n * m] = phase_condition(ref, u_try);
      if (f_try.norm() < merit0 || halve == 4) {
        u = u_try;
        s = s_try;
        break;
      }
      step *= 0.5;
    }
    ++steps;
  }
  throw std::runtime_error("wavetrain: Newton did not converge after " +
                           std::to_string(opts.max_iter) + " iterations");
}

}  // namespace

double phase_condition(const Mat& reference, const Mat& candidate) {
  if (reference.rows() != candidate.rows() || reference.cols() != candidate.cols())
    throw std::invalid_argument("phase_condition: sampling mismatch");
  const int m = int(reference.cols());
  const Mat d1 = fourier_diff(m, 1);
  const Mat ref_phi = reference * d1.transpose();
  return (2.0 * pi / m) * (ref_phi.array() * (candidate - reference).array()).sum();
}

WaveTrain solve_wavetrain(const ReactionModel& model, double k, const Mat& guess_profile,
                          double guess_omega, const WaveTrainOptions& opts) {
  if (k == 0.0) throw std::invalid_argument("solve_wavetrain: k must be nonzero");
  if (guess_profile.rows() != model.n_components)
    throw std::invalid_argument("solve_wavetrain: guess has wrong component count");
  const auto sol = newton_wavetrain(model, /*omega_free=*/true, k, guess_profile,
                                    guess_omega, opts);
  WaveTrain wt;
  wt.model = model;
  wt.k = k;
  wt.omega = sol.scalar;
  wt.profile = sol.profile;
  wt.residual = sol.residual;
  return wt;
}

WaveTrain solve_wavetrain_at_omega(const ReactionModel& model, double omega,
                                   const WaveTrain& seed, const WaveTrainOptions& opts) {
  const auto sol =
      newton_wavetrain(model, /*omega_free=*/false, omega, seed.profile, seed.k, opts);
  WaveTrain wt;
  wt.model = model;
  wt.k = sol.scalar;
  wt.omega = omega;
  wt.profile = sol.profile;
  wt.residual = sol.residual;
  return wt;
}

double group_velocity(const WaveTrain& seed, double dk, const WaveTrainOptions& opts) {
  const auto hi = solve_wavetrain(seed.model, seed.k + dk, seed.profile, seed.omega, opts);
  const auto lo = solve_wavetrain(seed.model, seed.k - dk, seed.profile, seed.omega, opts);
  return (hi.omega - lo.omega) / (2.0 * dk);
}

DispersionCurve dispersion_curve(const ReactionModel& model, double k_min, double k_max,
                                 const WaveTrain& seed, int max_steps,
                                 double initial_step) {
  if (!(k_min < k_max)) throw std::invalid_argument("dispersion_curve: empty k range");
  const int n = model.n_components, m = seed.samples();
  const Mat d1 = fourier_diff(m, 1), d2 = fourier_diff(m, 2);

  DispersionCurve curve;
  std::vector<std::pair<double, double>> samples;
  samples.emplace_back(seed.k, seed.omega);

  // pseudo-arclength in X = (u, omega, k); one sweep per direction
  for (double dir : {+1.0, -1.0}) {
    Vec x(n * m + 2);
    x.head(n * m) = flatten(seed.profile);
    x[n * m] = seed.omega;
    x[n * m + 1] = seed.k;
    Vec tangent = Vec::Unit(n * m + 2, n * m + 1) * dir;
    double ds = initial_step;

    for (int step = 0; step < max_steps; ++step) {
      // tangent from the bordered Jacobian at the current point
      Mat big = Mat::Zero(n * m + 2, n * m + 2);
      {
        const Mat u = unflatten(x.head(n * m), n, m);
        const double omega = x[n * m], k = x[n * m + 1];
        big.topLeftCorner(n * m, n * m) = pde_jacobian(model, k, omega, u, d1, d2);
        const Mat up = u * d1.transpose(), upp = u * d2.transpose();
        for (int c = 0; c < n; ++c)
          for (int p = 0; p < m; ++p) {
            big(c * m + p, n * m) = up(c, p);
            big(c * m + p, n * m + 1) = 2.0 * k * model.diffusion[c] * upp(c, p);
          }
        big.row(n * m).head(n * m) = phase_row(u, d1).transpose();
        big.row(n * m + 1) = tangent.transpose();
      }
      Vec t_new = big.partialPivLu().solve(Vec::Unit(n * m + 2, n * m + 1));
      t_new.normalize();
      if (tangent.dot(t_new) < 0) t_new = -t_new;
      if (t_new[n * m + 1] * tangent[n * m + 1] < 0.0 && step > 0) {
        curve.fold_detected = true;
        break;
      }
      tangent = t_new;

      // predictor-corrector
      Vec x_pred = x + ds * tangent;
      Vec x_new = x_pred;
      bool ok = false;
      const Mat ref = unflatten(x.head(n * m), n, m);
      const Vec prow = phase_row(ref, d1);
      for (int it = 0; it < 12; ++it) {
        const Mat u = unflatten(x_new.head(n * m), n, m);
        const double omega = x_new[n * m], k = x_new[n * m + 1];
        Vec g(n * m + 2);
        g.head(n * m) = pde_rhs(model, k, omega, u, d1, d2);
        g[n * m] = phase_condition(ref, u);
        g[n * m + 1] = tangent.dot(x_new - x_pred);
        if (g.head(n * m).lpNorm<Eigen::Infinity>() < 1e-10 && std::abs(g[n * m]) < 1e-10) {
          ok = true;
          break;
        }
        Mat jj = Mat::Zero(n * m + 2, n * m + 2);
        jj.topLeftCorner(n * m, n * m) = pde_jacobian(model, k, omega, u, d1, d2);
        const Mat up = u * d1.transpose(), upp = u * d2.transpose();
        for (int c = 0; c < n; ++c)
          for (int p = 0; p < m; ++p) {
            jj(c * m + p, n * m) = up(c, p);
            jj(c * m + p, n * m + 1) = 2.0 * k * model.diffusion[c] * upp(c, p);
          }
        jj.row(n * m).head(n * m) = prow.transpose();
        jj.row(n * m + 1) = tangent.transpose();
        x_new -= jj.partialPivLu().solve(g);
      }
      if (!ok) {
        ds *= 0.5;
        if (ds < 1e-5) break;
        continue;
      }
      x = x_new;
      ds = std::min(ds * 1.3, 5.0 * initial_step);
      const double k_here = x[n * m + 1];
      samples.emplace_back(k_here, x[n * m]);
      if (k_here > k_max + 1e-12 || k_here < k_min - 1e-12) break;
    }
  }

  std::sort(samples.begin(), samples.end());
  curve.ks.resize(int(samples.size()));
  curve.omegas.resize(int(samples.size()));
  for (int i = 0; i < int(samples.size()); ++i) {
    curve.ks[i] = samples[i].first;
    curve.omegas[i] = samples[i].second;
  }
  const double dk = std::min(0.01, 0.05 * (k_max - k_min));
  const double cg1 = group_velocity(seed, dk);
  const double cg2 = group_velocity(seed, 0.5 * dk);
  curve.group_velocity = cg2;
  curve.cg_error = std::abs(cg1 - cg2) / 3.0;
  return curve;
}

AdmissibilityReport check_admissibility(const WaveTrain& wt_in,
                                        const std::vector<double>& lambda_probes) {
  AdmissibilityReport rep;
  // odd spectral grid keeps the spatial eigenvalue problem alias-free
  const WaveTrain wt = resample_wavetrain(
      wt_in, wt_in.samples() % 2 == 0 ? wt_in.samples() - 1 : wt_in.samples());
  const int n = wt.model.n_components, m = wt.samples();
  const Mat d1 = fourier_diff(m, 1), d2 = fourier_diff(m, 2);

  const CMat a0 = assemble_awt(wt, Complex(0, 0), 0.0);
  Eigen::ComplexEigenSolver<CMat> es(a0, true);
  const CVec nus = es.eigenvalues();
  int i_min = 0;
  for (int i = 1; i < nus.size(); ++i)
    if (std::abs(nus[i]) < std::abs(nus[i_min])) i_min = i;
  rep.nu_zero_abs = std::abs(nus[i_min]);
  double second = 1e300;
  for (int i = 0; i < nus.size(); ++i)
    if (i != i_min) second = std::min(second, std::abs(nus[i]));
  rep.second_nu_abs = second;

  // clause (i): eigenfunction alignment with (u', k u'')
  const Mat up = wt.profile * d1.transpose();
  const Mat upp = wt.profile * d2.transpose();
  CVec target(2 * n * m);
  for (int c = 0; c < n; ++c)
    for (int p = 0; p < m; ++p) {
      target[c * m + p] = up(c, p);
      target[n * m + c * m + p] = wt.k * upp(c, p);
    }
  if (target.norm() < 1e-12) {
    rep.eigenfunction_alignment = 0.0;
  } else {
    const CVec v = es.eigenvectors().col(i_min).normalized();
    rep.eigenfunction_alignment = std::abs(v.dot(target.normalized()));
  }
  const bool c1 = rep.nu_zero_abs < 1e-6 && rep.second_nu_abs > 1e-4 &&
                  rep.eigenfunction_alignment >= 1.0 - 1e-6;

  // clause (ii): d nu_*/d lambda at 0 by centered differences, following the
  // eigenvalue continuing from nu = 0
  const double dl = 1e-4;
  auto nu_near = [&](Complex lambda, Complex anchor) {
    const CVec s = dense_eigenvalues(assemble_awt(wt, lambda, 0.0));
    int best = 0;
    for (int i = 1; i < s.size(); ++i)
      if (std::abs(s[i] - anchor) < std::abs(s[best] - anchor)) best = i;
    return s[best];
  };
  const Complex nu_p = nu_near(Complex(dl, 0), nus[i_min]);
  const Complex nu_m = nu_near(Complex(-dl, 0), nus[i_min]);
  rep.dnu_dlambda = ((nu_p - nu_m) / (2.0 * dl)).real();
  const bool c2 = rep.dnu_dlambda < 0.0;

  // clause (iii): no other imaginary-axis eigenvalues at lambda = 0
  double min_re = 1e300;
  for (int i = 0; i < nus.size(); ++i)
    if (i != i_min) min_re = std::min(min_re, std::abs(nus[i].real()));
  rep.min_abs_re_other = min_re;
  const bool c3 = min_re > 1e-8;

  // clause (iv): hyperbolicity at the real positive probes
  double min_probe = 1e300;
  for (double lp : lambda_probes) {
    const CVec s = dense_eigenvalues(assemble_awt(wt, Complex(lp, 0), 0.0));
    for (int i = 0; i < s.size(); ++i) min_probe = std::min(min_probe, std::abs(s[i].real()));
  }
  rep.min_abs_re_probes = lambda_probes.empty() ? 1.0 : min_probe;
  const bool c4 = rep.min_abs_re_probes > 1e-8;

  if (!c1) rep.failed_clauses.push_back(1);
  if (!c2) rep.failed_clauses.push_back(2);
  if (!c3) rep.failed_clauses.push_back(3);
  if (!c4) rep.failed_clauses.push_back(4);
  rep.admissible = rep.failed_clauses.empty();
  return rep;
}

double wavetrain_residual(const WaveTrain& wt, int m) {
  Mat profile = wt.profile;
  if (m > 0 && m != wt.samples()) {
    Mat fine(profile.rows(), m);
    for (int c = 0; c < profile.rows(); ++c)
      fine.row(c) = fourier_resample(profile.row(c).transpose(), m).transpose();
    profile = fine;
  }
  const int mm = int(profile.cols());
  const Mat d1 = fourier_diff(mm, 1), d2 = fourier_diff(mm, 2);
  return pde_rhs(wt.model, wt.k, wt.omega, profile, d1, d2).lpNorm<Eigen::Infinity>();
}

}  // namespace spiralspec
