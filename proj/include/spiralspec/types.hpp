#ifndef SPIRALSPEC_TYPES_HPP
#define SPIRALSPEC_TYPES_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <vector>

namespace spiralspec {

using Complex = std::complex<double>;

using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

/// Complex sparse operator; all assembled operators use complex storage so
/// that lambda-shifts and weighted variants need no re-assembly.
using SpMat = Eigen::SparseMatrix<Complex>;
using SpMatR = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<Complex>;
using TripletR = Eigen::Triplet<double>;

constexpr double pi = 3.14159265358979323846;

inline Vec linspace(double a, double b, int n) {
  return Vec::LinSpaced(n, a, b);
}

inline SpMat to_complex(const SpMatR& a) {
  SpMat c = a.cast<Complex>();
  c.makeCompressed();
  return c;
}

inline SpMatR real_part(const SpMat& a) {
  std::vector<TripletR> trips;
  trips.reserve(a.nonZeros());
  for (int k = 0; k < a.outerSize(); ++k)
    for (SpMat::InnerIterator it(a, k); it; ++it)
      if (it.value().real() != 0.0)
        trips.emplace_back(it.row(), it.col(), it.value().real());
  SpMatR r(a.rows(), a.cols());
  r.setFromTriplets(trips.begin(), trips.end());
  return r;
}

/// True when every stored entry has zero imaginary part.
inline bool is_real(const SpMat& a) {
  for (int k = 0; k < a.outerSize(); ++k)
    for (SpMat::InnerIterator it(a, k); it; ++it)
      if (it.value().imag() != 0.0) return false;
  return true;
}

/// Exact 1-norm (maximum absolute column sum).
inline double norm1(const SpMat& a) {
  double best = 0.0;
  for (int k = 0; k < a.outerSize(); ++k) {
    double s = 0.0;
    for (SpMat::InnerIterator it(a, k); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

/// A - shift*I for square sparse A.
inline SpMat shifted(const SpMat& a, Complex shift) {
  SpMat s(a.rows(), a.cols());
  s.setIdentity();
  s = (a - shift * s).eval();
  s.prune(Complex(0.0), 0.0);
  s.makeCompressed();
  return s;
}

}  // namespace spiralspec

#endif
