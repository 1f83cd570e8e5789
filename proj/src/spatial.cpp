#include "spiralspec/spatial.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <functional>
#include <cmath>
#include <stdexcept>

#include "spiralspec/fourier.hpp"
#include "spiralspec/linalg.hpp"

namespace spiralspec {

namespace {

// Even Fourier grids carry a Nyquist mode whose first derivative vanishes on
// the grid; in the first-order spatial problem that plants a near-duplicate
// of the mode-zero eigenvalues in the trusted central window. All spectral
// work therefore runs on odd grids, where D1 is alias-free and D1^2 is the
// exact second derivative.
int odd_samples(int m) { return m % 2 == 0 ? m - 1 : m; }

WaveTrain spectral_grid(const WaveTrain& wt) {
  return resample_wavetrain(wt, odd_samples(wt.samples()));
}

struct BlochWork {
  Mat d1;
  CMat d1sq;
  std::vector<Mat> fu;  // per phi-point Jacobian
};

BlochWork make_work(const WaveTrain& wt) {
  BlochWork w;
  const int m = wt.samples();
  w.d1 = fourier_diff(m, 1);
  w.d1sq = (w.d1 * w.d1).cast<Complex>();
  w.fu.reserve(m);
  for (int p = 0; p < m; ++p) w.fu.push_back(wt.model.f_u(wt.profile.col(p)));
  return w;
}

}  // namespace

CMat assemble_awt(const WaveTrain& wt, Complex lambda, double eta) {
  const int n = wt.model.n_components, m = wt.samples();
  const int nm = n * m;
  const Mat d1 = fourier_diff(m, 1);
  CMat a = CMat::Zero(2 * nm, 2 * nm);
  for (int c = 0; c < n; ++c) {
    const double dinv = 1.0 / wt.model.diffusion[c];
    for (int i = 0; i < m; ++i) {
      a(c * m + i, nm + c * m + i) = 1.0;  // identity coupling u' = ... + v
      for (int j = 0; j < m; ++j) {
        const Complex kd = -wt.k * d1(i, j);
        a(c * m + i, c * m + j) += kd;
        a(nm + c * m + i, nm + c * m + j) += kd;
        a(nm + c * m + i, c * m + j) -= dinv * wt.omega * d1(i, j);
      }
      a(nm + c * m + i, c * m + i) += dinv * lambda;
    }
  }
  for (int p = 0; p < m; ++p) {
    for (int c = 0; c < n; ++c) {
      const double dinv = 1.0 / wt.model.diffusion[c];
      for (int c2 = 0; c2 < n; ++c2) {
        const double fu = wt.model.f_u(wt.profile.col(p))(c, c2);
        if (fu != 0.0) a(nm + c * m + p, c2 * m + p) -= dinv * fu;
      }
    }
  }
  if (eta != 0.0) a.diagonal().array() += Complex(eta, 0.0);
  return a;
}

CMat bloch_operator(const WaveTrain& wt, Complex nu) {
  const int n = wt.model.n_components, m = wt.samples();
  const BlochWork w = make_work(wt);
  CMat lb = CMat::Zero(n * m, n * m);
  for (int c = 0; c < n; ++c) {
    const double d = wt.model.diffusion[c];
    CMat block = d * (nu * nu * CMat::Identity(m, m) +
                      2.0 * nu * wt.k * w.d1.cast<Complex>() +
                      wt.k * wt.k * w.d1sq) +
                 wt.omega * w.d1.cast<Complex>();
    lb.block(c * m, c * m, m, m) = block;
  }
  for (int p = 0; p < m; ++p)
    for (int c = 0; c < n; ++c)
      for (int c2 = 0; c2 < n; ++c2)
        lb(c * m + p, c2 * m + p) += w.fu[p](c, c2);
  return lb;
}

SpatialSpectrum spatial_spectrum(const WaveTrain& wt_in, Complex lambda, int n_keep) {
  const WaveTrain wt = spectral_grid(wt_in);
  SpatialSpectrum s;
  s.lambda = lambda;
  const CVec all = dense_eigenvalues(assemble_awt(wt, lambda, 0.0));
  std::vector<Complex> nus(all.data(), all.data() + all.size());
  std::sort(nus.begin(), nus.end(),
            [](Complex a, Complex b) { return std::abs(a.real()) < std::abs(b.real()); });
  const int keep = std::min<int>(2 * n_keep, int(nus.size()));
  nus.resize(keep);
  std::sort(nus.begin(), nus.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  s.nus = std::move(nus);
  s.truncation = keep;
  for (int i = 0; i < keep; ++i) {
    if (s.nus[i].real() < 0.0) s.idx_minus1 = i;
    if (s.idx_0 < 0 && s.nus[i].real() > 0.0) s.idx_0 = i;
  }
  return s;
}

WeightPlan spectral_gap(Complex lambda, Complex nu_minus1, Complex nu_0) {
  WeightPlan plan;
  plan.lambda = lambda;
  plan.j0_lo = -nu_0.real();
  plan.j0_hi = -nu_minus1.real();
  plan.empty = std::abs(nu_0.real() - nu_minus1.real()) <= 1e-10;
  return plan;
}

WeightPlan select_weight(const WeightPlan& gap, const WeightPolicy& policy) {
  WeightPlan plan = gap;
  const double center = 0.5 * (plan.j0_lo + plan.j0_hi);
  const double half = 0.5 * (plan.j0_hi - plan.j0_lo) * policy.safety;
  if (policy.kind == WeightPolicy::Kind::Midpoint) {
    if (plan.empty)
      throw std::runtime_error("select_weight: empty gap (lambda on the absolute spectrum)");
    plan.eta = center;
    plan.eta_set = true;
    return plan;
  }
  plan.eta = policy.fixed_eta;
  plan.eta_set = true;
  plan.warned = plan.empty || policy.fixed_eta < center - half || policy.fixed_eta > center + half;
  return plan;
}

namespace {

// One tracked eigenvalue: current value plus a derivative estimate so the
// next position can be predicted. Matching against the prediction (rather
// than the last position) keeps the tracker on its branch through tight
// avoided crossings.
struct TrackedNu {
  Complex nu;
  Complex dnu_dlam{0.0, 0.0};

  // match against the predicted position; ambiguous or inconsistent matches
  // return nullopt so the caller can bisect the step
  std::optional<Complex> match(const std::vector<Complex>& nus, Complex dlam) const {
    const Complex pred = nu + dnu_dlam * dlam;
    int best = -1;
    double d1 = 1e300, d2 = 1e300;
    for (int i = 0; i < int(nus.size()); ++i) {
      const double d = std::abs(nus[i] - pred);
      if (d < d1) {
        d2 = d1;
        d1 = d;
        best = i;
      } else if (d < d2) {
        d2 = d;
      }
    }
    if (best < 0) return std::nullopt;
    if (d1 > 0.5 * d2) return std::nullopt;
    const double budget = 0.08 + 2.0 * std::abs(dnu_dlam * dlam);
    if (d1 > budget) return std::nullopt;
    return nus[best];
  }

  void accept(Complex nu_new, Complex dlam) {
    if (std::abs(dlam) > 0.0) dnu_dlam = (nu_new - nu) / dlam;
    nu = nu_new;
  }
};

}  // namespace

LabeledPath track_labels(const WaveTrain& wt_in, const std::vector<Complex>& path,
                         const TrackOptions& opts) {
  const WaveTrain wt = spectral_grid(wt_in);
  LabeledPath out;
  if (path.empty()) return out;

  // anchor: sign split at large real lambda
  const Complex anchor(std::max(opts.anchor, 0.5), 0.0);
  SpatialSpectrum sa = spatial_spectrum(wt, anchor, opts.n_keep);
  if (sa.idx_minus1 < 0 || sa.idx_0 < 0)
    throw std::runtime_error("track_labels: no sign split at the anchor");
  TrackedNu nm1{sa.nus[sa.idx_minus1]};
  TrackedNu n0{sa.nus[sa.idx_0]};

  // walk anchor -> path[0] -> ... -> path.back() with bisection on ambiguity
  std::vector<Complex> nodes;
  nodes.push_back(anchor);
  nodes.insert(nodes.end(), path.begin(), path.end());

  for (int seg = 0; seg + 1 < int(nodes.size()); ++seg) {
    const Complex a = nodes[seg], b = nodes[seg + 1];
    double t = 0.0;
    while (t < 1.0 && std::abs(b - a) > 0.0) {
      double dt = 1.0 - t;
      bool advanced = false;
      while (dt >= opts.min_step) {
        const Complex dlam = dt * (b - a);
        const SpatialSpectrum sp = spatial_spectrum(wt, a + (t + dt) * (b - a), opts.n_keep);
        const auto m1 = nm1.match(sp.nus, dlam);
        const auto m0 = n0.match(sp.nus, dlam);
        if (m1 && m0 && std::abs(*m1 - *m0) > 1e-10) {
          nm1.accept(*m1, dlam);
          n0.accept(*m0, dlam);
          t += dt;
          advanced = true;
          break;
        }
        dt *= 0.5;
      }
      if (!advanced) {
        out.collision = true;
        out.collision_segment = seg;  // segment 0 is the anchor leg
        return out;
      }
    }
    out.lambdas.push_back(b);
    out.nu_minus1.push_back(nm1.nu);
    out.nu_0.push_back(n0.nu);
    out.spectra.push_back(spatial_spectrum(wt, b, opts.n_keep));
  }
  return out;
}

std::vector<SpectralCurve> fredholm_curves(const WaveTrain& wt_in, double eta,
                                           const Vec& gamma_grid, int branch_count) {
  if (gamma_grid.size() < 2) throw std::invalid_argument("fredholm_curves: need a gamma grid");
  const WaveTrain wt = spectral_grid(wt_in);
  auto rightmost = [&](double gamma) {
    const CVec all = dense_eigenvalues(bloch_operator(wt, Complex(-eta, gamma)));
    std::vector<Complex> v(all.data(), all.data() + all.size());
    std::sort(v.begin(), v.end(),
              [](Complex a, Complex b) { return a.real() > b.real(); });
    v.resize(std::min<int>(branch_count, int(v.size())));
    return v;
  };

  // refined gamma sequence: split intervals where any branch jumps
  const double jump_tol = 0.35;
  auto jump = [](const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double worst = 0.0;
    for (Complex p : a) {
      double best = 1e300;
      for (Complex q : b) best = std::min(best, std::abs(q - p));
      worst = std::max(worst, best);
    }
    return worst;
  };
  std::vector<double> gams;
  std::vector<std::vector<Complex>> vals;
  gams.push_back(gamma_grid.minCoeff());
  vals.push_back(rightmost(gams[0]));
  std::vector<double> input(gamma_grid.data(), gamma_grid.data() + gamma_grid.size());
  std::sort(input.begin(), input.end());
  for (size_t i = 1; i < input.size(); ++i) {
    std::function<void(double, const std::vector<Complex>&, double, int)> refine =
        [&](double g_lo, const std::vector<Complex>& v_lo, double g_hi, int depth) {
          const auto v_hi = rightmost(g_hi);
          if (depth < 3 && jump(v_lo, v_hi) > jump_tol) {
            const double mid = 0.5 * (g_lo + g_hi);
            const auto v_mid = rightmost(mid);
            refine(g_lo, v_lo, mid, depth + 1);
            refine(mid, v_mid, g_hi, depth + 1);
            return;
          }
          gams.push_back(g_hi);
          vals.push_back(v_hi);
        };
    refine(gams.back(), vals.back(), input[i], 0);
  }

  // stitch branches by continuity
  std::vector<SpectralCurve> curves(branch_count);
  for (int b = 0; b < branch_count; ++b) {
    curves[b].kind = SpectralCurve::Kind::FredholmBoundary;
    curves[b].branch = b;
  }
  std::vector<Complex> prev = vals[0];
  std::sort(prev.begin(), prev.end(),
            [](Complex a, Complex b) { return a.real() > b.real(); });
  for (int b = 0; b < branch_count && b < int(prev.size()); ++b) {
    curves[b].points.push_back(prev[b]);
    curves[b].param.push_back(gams[0]);
  }
  for (size_t i = 1; i < vals.size(); ++i) {
    std::vector<bool> used(vals[i].size(), false);
    std::vector<Complex> cur(prev.size());
    for (int b = 0; b < int(prev.size()); ++b) {
      int best = -1;
      double bd = 1e300;
      for (int j = 0; j < int(vals[i].size()); ++j) {
        if (used[j]) continue;
        const double d = std::abs(vals[i][j] - prev[b]);
        if (d < bd) {
          bd = d;
          best = j;
        }
      }
      if (best < 0) continue;
      used[best] = true;
      cur[b] = vals[i][best];
      curves[b].points.push_back(cur[b]);
      curves[b].param.push_back(gams[i]);
    }
    prev = cur;
  }
  return curves;
}

WaveTrain resample_wavetrain(const WaveTrain& wt, int m) {
  if (m == wt.samples()) return wt;
  WaveTrain out = wt;
  Mat p(wt.profile.rows(), m);
  for (int c = 0; c < wt.profile.rows(); ++c)
    p.row(c) = fourier_resample(wt.profile.row(c).transpose(), m).transpose();
  out.profile = p;
  return out;
}

// ---------------------------------------------------------------------------
// branch points and the absolute spectrum

BranchPoint find_branch_point(const WaveTrain& wt_in, Complex lambda_guess,
                              Complex nu_guess, int m) {
  const WaveTrain wt = resample_wavetrain(wt_in, odd_samples(m));
  const int dim = 2 * wt.model.n_components * wt.samples();

  // initial u: eigenvector of A_wt(lambda) nearest nu; w from a regularized solve
  CMat a = assemble_awt(wt, lambda_guess, 0.0);
  Eigen::ComplexEigenSolver<CMat> es(a, true);
  int best = 0;
  for (int i = 1; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()[i] - nu_guess) < std::abs(es.eigenvalues()[best] - nu_guess))
      best = i;
  CVec u = es.eigenvectors().col(best).normalized();
  Complex nu = es.eigenvalues()[best];
  Complex lambda = lambda_guess;
  CMat shifted_a = a - nu * CMat::Identity(dim, dim) +
                   Complex(0, 1e-3) * CMat::Identity(dim, dim);
  CVec w = shifted_a.partialPivLu().solve(u);
  const CVec c1 = u;

  // d A / d lambda is constant: +D^{-1} on the (v,u) block
  CMat dadl = CMat::Zero(dim, dim);
  {
    const int n = wt.model.n_components, mm = wt.samples();
    for (int c = 0; c < n; ++c)
      for (int p = 0; p < mm; ++p)
        dadl(n * mm + c * mm + p, c * mm + p) = 1.0 / wt.model.diffusion[c];
  }

  const int sz = 2 * dim + 2;
  for (int iter = 0; iter < 40; ++iter) {
    a = assemble_awt(wt, lambda, 0.0);
    CVec g(sz);
    g.head(dim) = a * u - nu * u;
    g.segment(dim, dim) = a * w - nu * w - u;
    g[2 * dim] = c1.dot(u) - 1.0;
    g[2 * dim + 1] = c1.dot(w);
    if (g.norm() < 1e-11 * std::max(1.0, std::abs(lambda))) {
      BranchPoint bp;
      bp.lambda = lambda;
      bp.nu = nu;
      bp.u = u;
      bp.w = w;
      bp.samples = wt.samples();
      return bp;
    }
    CMat j = CMat::Zero(sz, sz);
    j.topLeftCorner(dim, dim) = a - nu * CMat::Identity(dim, dim);
    j.block(dim, dim, dim, dim) = j.topLeftCorner(dim, dim);
    j.block(dim, 0, dim, dim) = -CMat::Identity(dim, dim);
    j.block(0, 2 * dim, dim, 1) = -u;
    j.block(dim, 2 * dim, dim, 1) = -w;
    j.block(0, 2 * dim + 1, dim, 1) = dadl * u;
    j.block(dim, 2 * dim + 1, dim, 1) = dadl * w;
    j.block(2 * dim, 0, 1, dim) = c1.adjoint();
    j.block(2 * dim + 1, dim, 1, dim) = c1.adjoint();
    const CVec delta = j.partialPivLu().solve(-g);
    u += delta.head(dim);
    w += delta.segment(dim, dim);
    nu += delta[2 * dim];
    lambda += delta[2 * dim + 1];
  }
  throw std::runtime_error("find_branch_point: Newton did not converge");
}

namespace {

// real-variable augmented two-root system for the absolute spectrum
struct AbsSystem {
  const WaveTrain& wt;
  CVec c1, c2;  // normalization anchors
  int nm;

  int dim() const { return 4 * nm + 6; }  // unknowns
  int neq() const { return 4 * nm + 5; }  // equations without the pin row

  static CVec to_cvec(const Vec& x, int off, int nm) {
    CVec u(nm);
    for (int i = 0; i < nm; ++i) u[i] = Complex(x[off + i], x[off + nm + i]);
    return u;
  }
  Complex nu1(const Vec& x) const { return {x[4 * nm], x[4 * nm + 1]}; }
  Complex nu2(const Vec& x) const { return {x[4 * nm + 2], x[4 * nm + 3]}; }
  Complex lam(const Vec& x) const { return {x[4 * nm + 4], x[4 * nm + 5]}; }

  Vec pack(const CVec& u1, const CVec& u2, Complex n1, Complex n2, Complex l) const {
    Vec x(dim());
    for (int i = 0; i < nm; ++i) {
      x[i] = u1[i].real();
      x[nm + i] = u1[i].imag();
      x[2 * nm + i] = u2[i].real();
      x[3 * nm + i] = u2[i].imag();
    }
    x[4 * nm] = n1.real();
    x[4 * nm + 1] = n1.imag();
    x[4 * nm + 2] = n2.real();
    x[4 * nm + 3] = n2.imag();
    x[4 * nm + 4] = l.real();
    x[4 * nm + 5] = l.imag();
    return x;
  }

  Vec residual(const Vec& x) const {
    const CVec u1 = to_cvec(x, 0, nm), u2 = to_cvec(x, 2 * nm, nm);
    const Complex n1 = nu1(x), n2 = nu2(x), l = lam(x);
    const CVec g1 = bloch_operator(wt, n1) * u1 - l * u1;
    const CVec g2 = bloch_operator(wt, n2) * u2 - l * u2;
    const Complex p1 = c1.dot(u1) - 1.0, p2 = c2.dot(u2) - 1.0;
    Vec g(neq());
    for (int i = 0; i < nm; ++i) {
      g[i] = g1[i].real();
      g[nm + i] = g1[i].imag();
      g[2 * nm + i] = g2[i].real();
      g[3 * nm + i] = g2[i].imag();
    }
    g[4 * nm] = n1.real() - n2.real();
    g[4 * nm + 1] = p1.real();
    g[4 * nm + 2] = p1.imag();
    g[4 * nm + 3] = p2.real();
    g[4 * nm + 4] = p2.imag();
    return g;
  }

  static void put_block(Mat& j, int r0, int c0, const CMat& m) {
    const int rows = int(m.rows()), cols = int(m.cols());
    j.block(r0, c0, rows, cols) = m.real();
    j.block(r0, c0 + cols, rows, cols) = -m.imag();
    j.block(r0 + rows, c0, rows, cols) = m.imag();
    j.block(r0 + rows, c0 + cols, rows, cols) = m.real();
  }
  static void put_cols(Mat& j, int r0, int c0, const CVec& b) {
    const int rows = int(b.size());
    for (int i = 0; i < rows; ++i) {
      j(r0 + i, c0) = b[i].real();
      j(r0 + rows + i, c0) = b[i].imag();
      j(r0 + i, c0 + 1) = -b[i].imag();
      j(r0 + rows + i, c0 + 1) = b[i].real();
    }
  }
  static void put_adjoint_row(Mat& j, int r0, int c0, const CVec& c) {
    const int cols = int(c.size());
    for (int i = 0; i < cols; ++i) {
      j(r0, c0 + i) = c[i].real();
      j(r0, c0 + cols + i) = c[i].imag();
      j(r0 + 1, c0 + i) = -c[i].imag();
      j(r0 + 1, c0 + cols + i) = c[i].real();
    }
  }

  // Jacobian without the pin row
  Mat jacobian(const Vec& x) const {
    const CVec u1 = to_cvec(x, 0, nm), u2 = to_cvec(x, 2 * nm, nm);
    const Complex n1 = nu1(x), n2 = nu2(x), l = lam(x);
    const int n = wt.model.n_components, m = wt.samples();
    const Mat d1 = fourier_diff(m, 1);
    Mat j = Mat::Zero(neq(), dim());

    CMat lb1 = bloch_operator(wt, n1) - l * CMat::Identity(nm, nm);
    CMat lb2 = bloch_operator(wt, n2) - l * CMat::Identity(nm, nm);
    put_block(j, 0, 0, lb1);
    put_block(j, 2 * nm, 2 * nm, lb2);

    auto dnu_col = [&](Complex nu, const CVec& u) {
      CVec out(nm);
      for (int c = 0; c < n; ++c) {
        const double d = wt.model.diffusion[c];
        CVec seg = u.segment(c * m, m);
        CVec der = 2.0 * d * (nu * seg + wt.k * (d1.cast<Complex>() * seg));
        out.segment(c * m, m) = der;
      }
      return out;
    };
    put_cols(j, 0, 4 * nm, dnu_col(n1, u1));
    put_cols(j, 2 * nm, 4 * nm + 2, dnu_col(n2, u2));
    put_cols(j, 0, 4 * nm + 4, CVec(-u1));
    put_cols(j, 2 * nm, 4 * nm + 4, CVec(-u2));

    j(4 * nm, 4 * nm) = 1.0;       // Re nu1
    j(4 * nm, 4 * nm + 2) = -1.0;  // -Re nu2
    put_adjoint_row(j, 4 * nm + 1, 0, c1);
    put_adjoint_row(j, 4 * nm + 3, 2 * nm, c2);
    return j;
  }
};

// Newton with one extra scalar pin row appended
bool abs_newton(const AbsSystem& sys, Vec& x, const Vec& pin_row, double pin_rhs,
                int max_iter = 15, double tol = 1e-10) {
  for (int it = 0; it < max_iter; ++it) {
    Vec g(sys.dim());
    g.head(sys.neq()) = sys.residual(x);
    g[sys.neq()] = pin_row.dot(x) - pin_rhs;
    if (g.head(sys.neq()).lpNorm<Eigen::Infinity>() < tol && std::abs(g[sys.neq()]) < tol)
      return true;
    Mat j(sys.dim(), sys.dim());
    j.topRows(sys.neq()) = sys.jacobian(x);
    j.row(sys.neq()) = pin_row.transpose();
    x -= j.partialPivLu().solve(g);
  }
  Vec g = sys.residual(x);
  return g.lpNorm<Eigen::Infinity>() < tol;
}

}  // namespace

std::optional<BranchPoint> find_branch_point_scan(const WaveTrain& wt_in, Complex from,
                                                  Complex to, int m, int scan_points) {
  const WaveTrain wt = resample_wavetrain(wt_in, odd_samples(m));
  std::vector<Complex> path;
  for (int i = 0; i < scan_points; ++i)
    path.push_back(from + (to - from) * (double(i) / (scan_points - 1)));
  TrackOptions topt;
  topt.n_keep = 12;
  LabeledPath lp = track_labels(wt, path, topt);
  const int npts = int(lp.lambdas.size());
  if (npts < 2) return std::nullopt;

  int cross = -1;
  for (int i = 0; i + 1 < npts; ++i) {
    const double w0 = lp.nu_0[i].real() - lp.nu_minus1[i].real();
    const double w1 = lp.nu_0[i + 1].real() - lp.nu_minus1[i + 1].real();
    if (w0 > 0.0 && w1 <= 0.0) {
      cross = i;
      break;
    }
  }
  if (cross < 0) return std::nullopt;

  // bisect the crossing of Re nu_0 = Re nu_{-1}
  Complex lo = lp.lambdas[cross], hi = lp.lambdas[cross + 1];
  Complex nm1 = lp.nu_minus1[cross], n0 = lp.nu_0[cross];
  for (int it = 0; it < 50 && std::abs(hi - lo) > 1e-9; ++it) {
    const Complex mid = 0.5 * (lo + hi);
    LabeledPath seg = track_labels(wt, {lo, mid}, topt);
    if (seg.collision || seg.lambdas.size() < 2) break;
    const double w = seg.nu_0[1].real() - seg.nu_minus1[1].real();
    if (w > 0.0) {
      lo = mid;
      nm1 = seg.nu_minus1[1];
      n0 = seg.nu_0[1];
    } else {
      hi = mid;
    }
  }

  // walk tau = Im(nu1 - nu2)/2 down toward the branch point, then polish
  AbsSystem sys{wt, CVec(), CVec(), wt.model.n_components * wt.samples()};
  Complex nu_a = nm1, nu_b = n0;
  if (nu_a.imag() < nu_b.imag()) std::swap(nu_a, nu_b);
  Complex lam = 0.5 * (lo + hi);
  auto eigvec_near = [&](Complex nu, Complex target) {
    Eigen::ComplexEigenSolver<CMat> es(bloch_operator(wt, nu), true);
    int best = 0;
    for (int i = 1; i < es.eigenvalues().size(); ++i)
      if (std::abs(es.eigenvalues()[i] - target) < std::abs(es.eigenvalues()[best] - target))
        best = i;
    return std::pair<Complex, CVec>(es.eigenvalues()[best],
                                    es.eigenvectors().col(best).normalized());
  };
  auto [l1, u1] = eigvec_near(nu_a, lam);
  auto [l2, u2] = eigvec_near(nu_b, lam);
  sys.c1 = u1;
  sys.c2 = u2;
  u1 /= sys.c1.dot(u1);
  u2 /= sys.c2.dot(u2);
  Vec x = sys.pack(u1, u2, nu_a, nu_b, lam);

  double tau = 0.5 * (nu_a.imag() - nu_b.imag());
  Vec pin = Vec::Zero(sys.dim());
  pin[4 * sys.nm + 1] = 1.0;
  pin[4 * sys.nm + 3] = -1.0;  // Im nu1 - Im nu2
  if (!abs_newton(sys, x, pin, 2.0 * tau)) return std::nullopt;
  const double tau_floor = std::max(1e-3, 0.02 * std::abs(tau));
  while (std::abs(tau) > tau_floor) {
    tau *= 0.65;
    Vec x_try = x;
    if (!abs_newton(sys, x_try, pin, 2.0 * tau)) {
      tau /= 0.65;
      break;
    }
    x = x_try;
  }
  const Complex nu_mid = 0.5 * (sys.nu1(x) + sys.nu2(x));
  try {
    return find_branch_point(wt, sys.lam(x), nu_mid, m);
  } catch (const std::runtime_error&) {
    return std::nullopt;
  }
}

SpectralCurve absolute_spectrum_trace(const WaveTrain& wt_in, const BranchPoint& seed,
                                      int steps, double step) {
  const WaveTrain wt = resample_wavetrain(wt_in, odd_samples(seed.samples));
  const int nm = wt.model.n_components * wt.samples();
  AbsSystem sys{wt, CVec(), CVec(), nm};

  SpectralCurve curve;
  curve.kind = SpectralCurve::Kind::AbsoluteSpectrum;
  curve.points.push_back(seed.lambda);
  curve.param.push_back(0.0);

  // local curvature of lambda(nu) at the double root seeds the first point
  auto bloch_eig_near = [&](Complex nu, Complex target) {
    Eigen::ComplexEigenSolver<CMat> es(bloch_operator(wt, nu), true);
    int best = 0;
    for (int i = 1; i < es.eigenvalues().size(); ++i)
      if (std::abs(es.eigenvalues()[i] - target) < std::abs(es.eigenvalues()[best] - target))
        best = i;
    return std::pair<Complex, CVec>(es.eigenvalues()[best],
                                    es.eigenvectors().col(best).normalized());
  };
  const double eps = 1e-3;
  const Complex la_p = bloch_eig_near(seed.nu + eps, seed.lambda).first;
  const Complex la_m = bloch_eig_near(seed.nu - eps, seed.lambda).first;
  const Complex acurv = (la_p + la_m - 2.0 * seed.lambda) / (eps * eps);

  double tau = std::max(0.2 * step, 5e-3);
  Complex lam = seed.lambda - acurv * tau * tau;
  auto [l1, u1] = bloch_eig_near(seed.nu + Complex(0, tau), lam);
  auto [l2, u2] = bloch_eig_near(seed.nu - Complex(0, tau), lam);
  sys.c1 = u1;
  sys.c2 = u2;
  u1 /= sys.c1.dot(u1);
  u2 /= sys.c2.dot(u2);
  Vec x = sys.pack(u1, u2, seed.nu + Complex(0, tau), seed.nu - Complex(0, tau), lam);
  Vec pin = Vec::Zero(sys.dim());
  pin[4 * nm + 1] = 1.0;
  pin[4 * nm + 3] = -1.0;
  if (!abs_newton(sys, x, pin, 2.0 * tau)) {
    curve.truncated = true;
    curve.note = "first continuation point failed";
    return curve;
  }
  curve.points.push_back(sys.lam(x));
  curve.param.push_back(tau);

  // pseudo-arclength in increasing tau
  Vec tangent = Vec::Zero(sys.dim());
  tangent[4 * nm + 1] = 1.0;
  tangent[4 * nm + 3] = -1.0;
  tangent.normalize();
  double ds = step;
  int accepted = 0;
  while (accepted < steps) {
    Mat j(sys.dim(), sys.dim());
    j.topRows(sys.neq()) = sys.jacobian(x);
    j.row(sys.neq()) = tangent.transpose();
    Vec t_new = j.partialPivLu().solve(Vec::Unit(sys.dim(), sys.neq()));
    t_new.normalize();
    if (tangent.dot(t_new) < 0.0) t_new = -t_new;
    tangent = t_new;

    Vec x_pred = x + ds * tangent;
    Vec x_new = x_pred;
    bool ok = abs_newton(sys, x_new, tangent, tangent.dot(x_pred), 12);
    // renormalize the eigenvector anchors now and then to keep the border
    // well conditioned
    if (!ok) {
      ds *= 0.5;
      if (ds < 1e-4 * step) {
        curve.truncated = true;
        curve.note = "step underflow";
        break;
      }
      continue;
    }
    x = x_new;
    ds = std::min(ds * 1.25, 4.0 * step);
    const double tau_here = 0.5 * (sys.nu1(x).imag() - sys.nu2(x).imag());
    curve.points.push_back(sys.lam(x));
    curve.param.push_back(tau_here);
    ++accepted;
    if (std::abs(tau_here) < 1e-4) break;  // closed at another branch point

    if (accepted % 5 == 0) {
      // triple junction: a third eigenvalue's real part joins the pair
      const CVec nus = dense_eigenvalues(assemble_awt(wt, sys.lam(x), 0.0));
      const Complex n1 = sys.nu1(x), n2 = sys.nu2(x);
      for (int i = 0; i < nus.size(); ++i) {
        if (std::abs(nus[i] - n1) < 1e-4 || std::abs(nus[i] - n2) < 1e-4) continue;
        if (std::abs(nus[i].real() - n1.real()) < 1e-3) {
          curve.truncated = true;
          curve.note = "triple junction";
          break;
        }
      }
      if (curve.truncated) break;
    }
  }
  return curve;
}

double curve_distance(Complex lambda, const SpectralCurve& curve) {
  double best = std::numeric_limits<double>::infinity();
  const auto& pts = curve.points;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    const Complex a = pts[i], b = pts[i + 1];
    const Complex ab = b - a;
    const double len2 = std::norm(ab);
    double t = len2 == 0.0 ? 0.0
                           : std::clamp(((lambda - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
    best = std::min(best, std::abs(lambda - (a + t * ab)));
  }
  if (pts.size() == 1) best = std::abs(lambda - pts[0]);
  return best;
}

double curves_distance(Complex lambda, const std::vector<SpectralCurve>& curves) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : curves) best = std::min(best, curve_distance(lambda, c));
  return best;
}

}  // namespace spiralspec
