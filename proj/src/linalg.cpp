#include "spiralspec/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace spiralspec {

// ---------------------------------------------------------------------------
// LU

struct LuFactor::Impl {
  std::unique_ptr<Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>>> clu;
  std::unique_ptr<Eigen::SparseLU<SpMatR, Eigen::COLAMDOrdering<int>>> rlu;
};

LuFactor::LuFactor(const SpMat& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("lu_factor: matrix not square");
  n_ = int(a.rows());
  auto impl = std::make_shared<Impl>();
  if (is_real(a)) {
    impl->rlu = std::make_unique<Eigen::SparseLU<SpMatR, Eigen::COLAMDOrdering<int>>>();
    SpMatR ar = real_part(a);
    impl->rlu->compute(ar);
    if (impl->rlu->info() != Eigen::Success) {
      singular_ = true;
      message_ = impl->rlu->lastErrorMessage();
      impl->rlu.reset();
    }
  } else {
    impl->clu = std::make_unique<Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>>>();
    impl->clu->compute(a);
    if (impl->clu->info() != Eigen::Success) {
      singular_ = true;
      message_ = impl->clu->lastErrorMessage();
      impl->clu.reset();
    }
  }
  impl_ = impl;
}

CVec LuFactor::solve(const CVec& b) const {
  if (singular_) throw std::runtime_error("lu solve on singular factorization: " + message_);
  if (impl_->clu) return impl_->clu->solve(b);
  Vec xr = impl_->rlu->solve(Vec(b.real()));
  Vec xi = impl_->rlu->solve(Vec(b.imag()));
  return xr + Complex(0, 1) * xi;
}

CVec LuFactor::solve_adjoint(const CVec& b) const {
  if (singular_) throw std::runtime_error("lu solve on singular factorization: " + message_);
  if (impl_->clu) return impl_->clu->adjoint().solve(b);
  Vec xr = impl_->rlu->transpose().solve(Vec(b.real()));
  Vec xi = impl_->rlu->transpose().solve(Vec(b.imag()));
  return xr + Complex(0, 1) * xi;
}

LuFactor lu_factor(const SpMat& a) { return LuFactor(a); }

// ---------------------------------------------------------------------------
// Krylov-Schur shift-invert

namespace {

CVec random_start(int n, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  CVec v(n);
  for (int i = 0; i < n; ++i) {
    const double re = 2.0 * (double(rng() >> 11) * 0x1p-53) - 1.0;
    const double im = 2.0 * (double(rng() >> 11) * 0x1p-53) - 1.0;
    v[i] = Complex(re, im);
  }
  v.normalize();
  return v;
}

// Unitary 2x2 that swaps the adjacent diagonal entries of an upper-triangular
// Schur form: with f = T(p,p+1), g = T(p+1,p+1) - T(p,p), the rotation maps
// the eigenvector [f; g] of the trailing entry onto e1.
struct Rot2 {
  double c = 1.0;
  Complex s{0.0, 0.0};
  bool trivial = true;
};

Rot2 swap_rotation(Complex f, Complex g) {
  Rot2 rot;
  const double norm = std::sqrt(std::norm(f) + std::norm(g));
  if (norm == 0.0) return rot;  // equal eigenvalues, nothing to do
  rot.trivial = false;
  if (std::abs(f) == 0.0) {
    rot.c = 0.0;
    rot.s = g / std::abs(g);
    return rot;
  }
  rot.c = std::abs(f) / norm;
  rot.s = rot.c * std::conj(g) / std::conj(f);
  return rot;
}

// T <- G T G^H and Q <- Q G^H acting on rows/cols p, p+1
void apply_swap(CMat& t, CMat& q, int p) {
  const int m = int(t.rows());
  const Rot2 rot = swap_rotation(t(p, p + 1), t(p + 1, p + 1) - t(p, p));
  if (rot.trivial) {
    std::swap(t(p, p), t(p + 1, p + 1));
    return;
  }
  for (int j = 0; j < m; ++j) {  // rows
    const Complex a = t(p, j), b = t(p + 1, j);
    t(p, j) = rot.c * a + rot.s * b;
    t(p + 1, j) = -std::conj(rot.s) * a + rot.c * b;
  }
  for (int i = 0; i < m; ++i) {  // columns (G^H on the right)
    const Complex a = t(i, p), b = t(i, p + 1);
    t(i, p) = a * rot.c + b * std::conj(rot.s);
    t(i, p + 1) = -a * rot.s + b * rot.c;
  }
  for (int i = 0; i < int(q.rows()); ++i) {
    const Complex a = q(i, p), b = q(i, p + 1);
    q(i, p) = a * rot.c + b * std::conj(rot.s);
    q(i, p + 1) = -a * rot.s + b * rot.c;
  }
  t(p + 1, p) = Complex(0, 0);
}

}  // namespace

EigenResult eigs_shift_invert(const SpMat& a, int k, Complex shift, const EigsOptions& opts) {
  const int n = int(a.rows());
  if (k < 1 || k >= n - 1) throw std::invalid_argument("eigs_shift_invert: bad k");
  int m = opts.ncv > 0 ? opts.ncv : std::max(2 * k + 1, 60);
  m = std::min(m, n - 1);
  m = std::max(m, k + 2);

  const SpMat b = shifted(a, shift);
  const LuFactor lu(b);
  if (lu.singular())
    throw std::runtime_error("eigs_shift_invert: factorization of A - shift failed (" +
                             lu.message() + "); perturb the shift");
  const double anorm = norm1(a);
  const double bnorm = norm1(b);
  const double abs_tol = std::max(opts.tol * anorm, 1e-300);

  CMat v(n, m + 1);
  CMat s = CMat::Zero(m, m);
  CVec g = CVec::Zero(m);
  v.col(0) = random_start(n, opts.seed);
  int active = 0;  // leading block size carried over from the last restart

  EigenResult result;
  int iterations = 0;

  CMat t, q;
  std::vector<int> order(m);

  for (int restart = 0; restart <= opts.max_restarts; ++restart) {
    // expansion: fold the old coupling row in, then run Arnoldi to order m
    if (active > 0) s.row(active).head(active) = g.head(active).adjoint();
    for (int j = active; j < m; ++j) {
      CVec w = lu.solve(v.col(j));
      ++iterations;
      for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i <= j; ++i) {
          const Complex c = v.col(i).dot(w);
          s(i, j) += c;
          w -= c * v.col(i);
        }
      }
      const double beta = w.norm();
      if (beta < 1e-14) {
        v.col(j + 1) = random_start(n, opts.seed + 7919 * (j + 1));
        for (int i = 0; i <= j; ++i)
          v.col(j + 1) -= v.col(i).dot(v.col(j + 1)) * v.col(i);
        v.col(j + 1).normalize();
        if (j < m - 1) s(j + 1, j) = 0.0;
        if (j == m - 1) g.setZero();
        continue;
      }
      v.col(j + 1) = w / beta;
      if (j < m - 1) {
        s(j + 1, j) = beta;
      } else {
        g.setZero();
        g[m - 1] = beta;
      }
    }

    // ordered Schur form of the Rayleigh quotient, largest |theta| first
    Eigen::ComplexSchur<CMat> schur(s, true);
    t = schur.matrixT();
    q = schur.matrixU();
    for (int pos = 0; pos < m; ++pos) {
      int best = pos;
      for (int j = pos + 1; j < m; ++j)
        if (std::abs(t(j, j)) > std::abs(t(best, best))) best = j;
      for (int j = best; j > pos; --j) apply_swap(t, q, j - 1);
    }
    CVec coupling = q.adjoint() * g;  // residual row after the basis rotation

    // convergence of the leading k Ritz pairs
    auto ritz_residual = [&](int i) {
      // eigenvector y of T for t(i,i); coupling^H (Q y) drives the residual
      CVec y = CVec::Zero(m);
      y[i] = 1.0;
      for (int r = i - 1; r >= 0; --r) {
        Complex acc(0, 0);
        for (int c2 = r + 1; c2 <= i; ++c2) acc += t(r, c2) * y[c2];
        Complex d = t(r, r) - t(i, i);
        const double floor_d = 1e-14 * std::abs(t(i, i)) + 1e-300;
        if (std::abs(d) < floor_d) d = floor_d;
        y[r] = -acc / d;
      }
      y.normalize();
      const Complex theta = t(i, i);
      const double res_op = std::abs(coupling.dot(y));
      return std::pair<double, CVec>(res_op * bnorm / std::max(std::abs(theta), 1e-300), y);
    };

    int nconv = 0;
    for (int i = 0; i < k; ++i) {
      if (std::abs(t(i, i)) == 0.0) break;
      if (ritz_residual(i).first <= abs_tol)
        ++nconv;
      else
        break;
    }

    const bool done = nconv >= k || restart == opts.max_restarts;
    if (done) {
      std::vector<std::pair<Complex, CVec>> pairs;
      for (int i = 0; i < std::min(m, k + 4); ++i) {
        auto [res, y] = ritz_residual(i);
        if (res > abs_tol) continue;
        const Complex theta = t(i, i);
        if (std::abs(theta) == 0.0) continue;
        pairs.emplace_back(shift + 1.0 / theta, v.leftCols(m) * (q * y));
        if (int(pairs.size()) == k) break;
      }
      std::sort(pairs.begin(), pairs.end(), [&](const auto& l, const auto& r) {
        return std::abs(l.first - shift) < std::abs(r.first - shift);
      });
      result.converged = int(pairs.size()) >= k;
      if (!result.converged)
        result.warning = "eigs_shift_invert: only " + std::to_string(pairs.size()) + " of " +
                         std::to_string(k) + " pairs converged after " +
                         std::to_string(restart) + " restarts";
      result.restarts = restart;
      result.iterations = iterations;
      const int nv = int(pairs.size());
      if (opts.want_vectors) result.eigenvectors.resize(n, nv);
      for (int i = 0; i < nv; ++i) {
        CVec x = pairs[i].second.normalized();
        const Complex lam = pairs[i].first;
        result.eigenvalues.push_back(lam);
        result.residuals.push_back((a * x - lam * x).norm());
        if (opts.want_vectors) result.eigenvectors.col(i) = x;
      }
      return result;
    }

    // Krylov-Schur truncation: keep a buffer past the wanted block
    int kp = k + std::min(std::max(nconv, 1), (m - k) / 2);
    kp = std::min(kp, m - 2);
    v.leftCols(kp) = (v.leftCols(m) * q.leftCols(kp)).eval();
    v.col(kp) = v.col(m);
    s.setZero();
    s.topLeftCorner(kp, kp) = t.topLeftCorner(kp, kp);
    g.head(kp) = coupling.head(kp);
    active = kp;
  }
  return result;  // unreachable
}

// ---------------------------------------------------------------------------
// smallest singular value

ConditionReport min_singular_value(const SpMat& a, Complex lambda, double tol) {
  ConditionReport rep;
  rep.lambda = lambda;
  rep.method = "lanczos-normal-equations";
  const SpMat b = shifted(a, lambda);
  const LuFactor lu(b);
  if (lu.singular()) {
    rep.sigma_min = 0.0;
    rep.log10_kappa = std::numeric_limits<double>::infinity();
    rep.method = "lu-singular";
    return rep;
  }
  const int n = int(b.rows());
  // Hermitian Lanczos on C = B^{-1} B^{-H} = V diag(sigma^{-2}) V^H; the top
  // eigenpair gives sigma_min and its right singular vector.
  auto apply = [&](const CVec& x) { return lu.solve(lu.solve_adjoint(x)); };

  const int mmax = std::min(n, 40);
  CVec start = random_start(n, 99991);
  double theta = 0.0;
  CVec top = start;
  for (int sweep = 0; sweep < 10; ++sweep) {
    CMat basis(n, mmax);
    Vec alpha = Vec::Zero(mmax), beta = Vec::Zero(mmax);
    basis.col(0) = top.normalized();
    int mm = mmax;
    double last_beta = 0.0;
    for (int j = 0; j < mmax; ++j) {
      CVec w = apply(basis.col(j));
      alpha[j] = std::real(basis.col(j).dot(w));
      for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i <= j; ++i) w -= basis.col(i).dot(w) * basis.col(i);
      const double nb = w.norm();
      if (j + 1 < mmax) {
        if (nb < 1e-300) {
          mm = j + 1;
          last_beta = 0.0;
          break;
        }
        beta[j] = nb;
        basis.col(j + 1) = w / nb;
      } else {
        last_beta = nb;
      }
    }
    Mat tri = Mat::Zero(mm, mm);
    for (int i = 0; i < mm; ++i) {
      tri(i, i) = alpha[i];
      if (i + 1 < mm) tri(i, i + 1) = tri(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(tri);
    const int last = mm - 1;
    theta = es.eigenvalues()[last];
    Vec y = es.eigenvectors().col(last);
    top = basis.leftCols(mm) * y;
    const double res = std::abs(last_beta * y[mm - 1]);
    if (res <= tol * std::abs(theta)) break;
  }
  top.normalize();
  const double quotient = (b * top).norm();
  rep.sigma_min = std::min(quotient, theta > 0.0 ? 1.0 / std::sqrt(theta) : quotient);
  rep.log10_kappa = 0.0;
  return rep;
}

// ---------------------------------------------------------------------------
// 1-norm condition estimate

namespace {

double onenormest_inverse(const LuFactor& lu, int n) {
  CVec x = CVec::Constant(n, Complex(1.0 / n, 0.0));
  CVec vsol = lu.solve(x);
  double est = vsol.lpNorm<1>();
  int prev_j = -1;
  for (int iter = 0; iter < 5; ++iter) {
    CVec xi(n);
    for (int i = 0; i < n; ++i) {
      const double av = std::abs(vsol[i]);
      xi[i] = av == 0.0 ? Complex(1, 0) : vsol[i] / av;
    }
    const CVec z = lu.solve_adjoint(xi);
    int j = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(z[i]) > std::abs(z[j])) j = i;
    if (iter > 0 && j == prev_j) break;
    prev_j = j;
    x.setZero();
    x[j] = 1.0;
    vsol = lu.solve(x);
    const double next = vsol.lpNorm<1>();
    if (next <= est && iter > 0) break;
    est = std::max(est, next);
  }
  // Higham's alternating probe guards against unlucky starting vectors
  CVec alt(n);
  for (int i = 0; i < n; ++i)
    alt[i] = Complex((i % 2 == 0 ? 1.0 : -1.0) * (1.0 + double(i) / std::max(1, n - 1)), 0.0);
  est = std::max(est, 2.0 * lu.solve(alt).lpNorm<1>() / (3.0 * n));
  return est;
}

}  // namespace

ConditionReport condest_1norm(const SpMat& a, Complex lambda) {
  ConditionReport rep;
  rep.lambda = lambda;
  rep.method = "hager-higham-1norm";
  const SpMat b = shifted(a, lambda);
  const LuFactor lu(b);
  if (lu.singular()) {
    rep.log10_kappa = std::numeric_limits<double>::infinity();
    rep.method = "lu-singular";
    return rep;
  }
  const double inv_norm = onenormest_inverse(lu, int(b.rows()));
  rep.log10_kappa = std::log10(std::max(norm1(b) * inv_norm, 1.0));
  rep.sigma_min = 0.0;
  return rep;
}

CVec dense_eigenvalues(const CMat& a) {
  Eigen::ComplexEigenSolver<CMat> es(a, false);
  return es.eigenvalues();
}

}  // namespace spiralspec
