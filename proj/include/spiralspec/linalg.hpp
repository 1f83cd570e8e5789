#ifndef SPIRALSPEC_LINALG_HPP
#define SPIRALSPEC_LINALG_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "spiralspec/types.hpp"

namespace spiralspec {

/// Sparse LU with partial pivoting (COLAMD-ordered). Real matrices are
/// detected and factored in real arithmetic; complex right-hand sides then
/// cost two real backsolves. Immutable after construction; concurrent solves
/// are safe.
class LuFactor {
 public:
  explicit LuFactor(const SpMat& a);

  bool singular() const { return singular_; }
  const std::string& message() const { return message_; }
  int dimension() const { return n_; }

  CVec solve(const CVec& b) const;
  CVec solve_adjoint(const CVec& b) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  bool singular_ = false;
  std::string message_;
  int n_ = 0;
};

/// lu_factor(A): PA = LU; throws nothing, singularities are reported on the
/// handle (with the offending pivot column in the message).
LuFactor lu_factor(const SpMat& a);

struct EigenResult {
  std::vector<Complex> eigenvalues;  // sorted by ascending |lambda - shift|
  CMat eigenvectors;                 // column i pairs with eigenvalues[i]
  std::vector<double> residuals;     // ||A v - lambda v|| / ||v|| per pair
  int iterations = 0;
  int restarts = 0;
  bool converged = true;  // false: only the converged subset is returned
  std::string warning;
};

struct EigsOptions {
  double tol = 1e-10;    // residual bound is tol * ||A||_1
  int ncv = 0;           // subspace dimension; 0 = max(2k+1, 60)
  int max_restarts = 400;
  unsigned long long seed = 12345;
  bool want_vectors = true;
};

/// k eigenvalues of A nearest `shift` via Krylov-Schur iteration on
/// (A - shift)^{-1}. Each returned pair carries a residual from a fresh
/// matrix-vector product. A singular shift throws std::runtime_error with a
/// hint to perturb the shift.
EigenResult eigs_shift_invert(const SpMat& a, int k, Complex shift = 0.0,
                              const EigsOptions& opts = {});

struct ConditionReport {
  Complex lambda{0.0, 0.0};
  double sigma_min = 0.0;
  double log10_kappa = 0.0;
  std::string method;
};

/// Smallest singular value of A - lambda I by Lanczos iteration on
/// (A-lambda)^{-1}(A-lambda)^{-H}, both solves reusing one LU. An exactly
/// singular shift reports sigma_min = 0.
ConditionReport min_singular_value(const SpMat& a, Complex lambda, double tol = 1e-8);

/// Hager-Higham style 1-norm condition estimate of A - lambda I, reported as
/// log10(kappa_1). Singular shifts return +infinity.
ConditionReport condest_1norm(const SpMat& a, Complex lambda);

/// Dense eigenvalues of a complex matrix (convenience wrapper).
CVec dense_eigenvalues(const CMat& a);

}  // namespace spiralspec

#endif
