#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/SVD>
#include <random>

#include "spiralspec/convdiff.hpp"
#include "spiralspec/fd.hpp"
#include "spiralspec/linalg.hpp"

using namespace spiralspec;

namespace {

SpMat sparse_random(int n, double density, unsigned seed, bool complex_entries) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<Triplet> trips;
  for (int i = 0; i < n; ++i) {
    trips.emplace_back(i, i, Complex(2.0 + uni(rng), complex_entries ? uni(rng) : 0.0));
    for (int j = 0; j < n; ++j)
      if (i != j && std::abs(uni(rng)) < density)
        trips.emplace_back(i, j, Complex(uni(rng), complex_entries ? uni(rng) : 0.0));
  }
  SpMat a(n, n);
  a.setFromTriplets(trips.begin(), trips.end());
  a.makeCompressed();
  return a;
}

SpMat diag_matrix(const std::vector<Complex>& d) {
  SpMat a(int(d.size()), int(d.size()));
  for (int i = 0; i < int(d.size()); ++i) a.insert(i, i) = d[i];
  a.makeCompressed();
  return a;
}

}  // namespace

TEST_CASE("lu solves against identity and a 1d laplacian") {
  SpMat eye(5, 5);
  eye.setIdentity();
  const LuFactor lu(eye);
  CVec b(5);
  b << 1.0, 2.0, Complex(0, 1), -1.0, 0.5;
  CHECK((lu.solve(b) - b).norm() == doctest::Approx(0.0));

  const auto grid = IntervalGrid::make(0.0, 1.0, 0.01);
  const SpMat d2 = fd_derivative_1d(grid, 2, 2, BoundarySpec::dirichlet());
  const LuFactor lu2(d2);
  std::mt19937_64 rng(7);
  CVec rhs(d2.rows());
  for (int i = 0; i < rhs.size(); ++i)
    rhs[i] = Complex(double(rng() % 997) / 997.0 - 0.5, double(rng() % 991) / 991.0 - 0.5);
  const CVec x = lu2.solve(rhs);
  CHECK((d2 * x - rhs).norm() <= 1e-10 * rhs.norm());
  const CVec y = lu2.solve_adjoint(rhs);
  CHECK((d2.adjoint() * y - rhs).norm() <= 1e-10 * rhs.norm());
}

TEST_CASE("singular matrix reported, not thrown") {
  SpMat a(4, 4);
  a.insert(0, 0) = 1.0;
  a.insert(1, 1) = 2.0;
  a.insert(3, 3) = 1.0;  // row/col 2 empty
  a.makeCompressed();
  const LuFactor lu(a);
  CHECK(lu.singular());
  CHECK(!lu.message().empty());
}

TEST_CASE("shift-invert on a diagonal matrix finds the smallest entries") {
  std::vector<Complex> d(100);
  for (int i = 0; i < 100; ++i) d[i] = double(i + 1);
  const auto res = eigs_shift_invert(diag_matrix(d), 3, 0.0);
  REQUIRE(res.eigenvalues.size() == 3);
  CHECK(std::abs(res.eigenvalues[0] - 1.0) < 1e-9);
  CHECK(std::abs(res.eigenvalues[1] - 2.0) < 1e-9);
  CHECK(std::abs(res.eigenvalues[2] - 3.0) < 1e-9);
  for (double r : res.residuals) CHECK(r < 1e-8);
}

TEST_CASE("shift targeting picks eigenvalues near the shift") {
  std::vector<Complex> d(60);
  for (int i = 0; i < 60; ++i) d[i] = Complex(i, 0.3 * i);
  const auto res = eigs_shift_invert(diag_matrix(d), 4, Complex(20.2, 6.0));
  REQUIRE(res.eigenvalues.size() == 4);
  CHECK(std::abs(res.eigenvalues[0] - Complex(20, 6)) < 1e-8);
}

TEST_CASE("leading eigenvalue of dirichlet d_xx + d_x matches closed form") {
  // -c^2/4 - pi^2/R^2 with c = 1, R = 20
  ConvDiffProblem p{1.0, 20.0, 0.01, 0.0};
  const SpMat op = cd_assemble(p);
  const auto res = eigs_shift_invert(op, 1, 0.0);
  const double expected = -0.25 - pi * pi / 400.0;
  CHECK(std::abs(res.eigenvalues[0] - expected) < 2e-4);
}

TEST_CASE("every returned eigenpair re-verifies its residual") {
  const SpMat a = sparse_random(200, 0.03, 11, true);
  const auto res = eigs_shift_invert(a, 6, Complex(0.1, 0.2));
  REQUIRE(res.eigenvalues.size() == 6);
  for (int i = 0; i < 6; ++i) {
    const CVec v = res.eigenvectors.col(i);
    const double r = (a * v - res.eigenvalues[i] * v).norm();
    CHECK(r <= 1.05 * std::max(res.residuals[i], 1e-14));
    CHECK(r <= 1e-10 * norm1(a) * 10);
  }
  // sorted ascending by |lambda - shift|
  for (int i = 1; i < 6; ++i)
    CHECK(std::abs(res.eigenvalues[i - 1] - Complex(0.1, 0.2)) <=
          std::abs(res.eigenvalues[i] - Complex(0.1, 0.2)) + 1e-12);
}

TEST_CASE("singular shift throws with advice") {
  std::vector<Complex> d = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0};
  CHECK_THROWS_WITH_AS(eigs_shift_invert(diag_matrix(d), 2, 3.0),
                       doctest::Contains("perturb the shift"), std::runtime_error);
}

TEST_CASE("min singular value: unitary permutation and diagonal cases") {
  SpMat perm(5, 5);
  for (int i = 0; i < 5; ++i) perm.insert(i, (i + 2) % 5) = 1.0;
  perm.makeCompressed();
  CHECK(min_singular_value(perm, 0.0).sigma_min == doctest::Approx(1.0).epsilon(1e-8));

  const auto rep = min_singular_value(diag_matrix({1.0, 2.0, 3.0}), 0.0);
  CHECK(rep.sigma_min == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("min singular value matches dense svd on random sparse matrices") {
  for (unsigned seed : {3u, 4u, 5u}) {
    const SpMat a = sparse_random(50, 0.08, seed, true);
    const Complex lambda(0.37, -0.21);
    const auto rep = min_singular_value(a, lambda, 1e-10);
    const CMat dense = CMat(shifted(a, lambda));
    Eigen::JacobiSVD<CMat> svd(dense);
    const double exact = svd.singularValues().tail(1)[0];
    CHECK(rep.sigma_min == doctest::Approx(exact).epsilon(1e-8));
  }
}

TEST_CASE("min singular value lower-bounds random probe quotients") {
  const SpMat a = sparse_random(80, 0.05, 21, true);
  const auto rep = min_singular_value(a, Complex(0.1, 0.1));
  const SpMat b = shifted(a, Complex(0.1, 0.1));
  std::mt19937_64 rng(77);
  for (int t = 0; t < 20; ++t) {
    CVec v(80);
    for (int i = 0; i < 80; ++i)
      v[i] = Complex(double(rng() % 1009) / 1009.0 - 0.5, double(rng() % 1013) / 1013.0 - 0.5);
    CHECK(rep.sigma_min <= (b * v).norm() / v.norm() * (1.0 + 1e-6));
  }
}

TEST_CASE("exactly singular shift reports sigma_min = 0") {
  SpMat a(4, 4);
  a.insert(0, 0) = 1.0;
  a.insert(1, 1) = 1.0;
  a.insert(2, 2) = 1.0;  // structural zero row/col 3
  a.makeCompressed();
  const auto rep = min_singular_value(a, 0.0);
  CHECK(rep.sigma_min == 0.0);
}

TEST_CASE("condest: identity and known diagonal") {
  SpMat eye(6, 6);
  eye.setIdentity();
  CHECK(condest_1norm(eye, 0.0).log10_kappa == doctest::Approx(0.0).epsilon(1e-12));

  const auto rep = condest_1norm(diag_matrix({1.0, 1e6}), 0.0);
  CHECK(rep.log10_kappa == doctest::Approx(6.0).epsilon(1e-10));
}

TEST_CASE("condest vs exact kappa_1 on random instances") {
  for (unsigned seed : {31u, 32u, 33u, 34u}) {
    const SpMat a = sparse_random(100, 0.05, seed, true);
    const double est = std::pow(10.0, condest_1norm(a, 0.0).log10_kappa);
    const CMat inv = CMat(a).inverse();
    double inv_norm1 = 0.0;
    for (int j = 0; j < 100; ++j)
      inv_norm1 = std::max(inv_norm1, inv.col(j).lpNorm<1>());
    const double exact = norm1(a) * inv_norm1;
    CHECK(est <= exact * (1.0 + 1e-10));  // never overestimates
    CHECK(est >= exact / 3.0);            // and stays within a factor 3 here
  }
}
