#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "spiralspec/fd.hpp"
#include "spiralspec/fourier.hpp"
#include "spiralspec/kinetics.hpp"
#include "spiralspec/linalg.hpp"
#include "spiralspec/polar.hpp"

using namespace spiralspec;

namespace {

CVec apply_op(const SpMat& a, const Vec& x) { return a * x.cast<Complex>(); }

Mat synthetic_state(const PolarGrid& g) {
  Mat state(2, g.nodes());
  for (int idx = 0; idx < g.nodes(); ++idx) {
    const double r = g.r_of(idx);
    const double th = idx == 0 ? 0.0 : g.theta((idx - 1) % g.n_theta);
    state(0, idx) = 0.5 + 0.4 * std::cos(th - 2.0 * r) * std::tanh(r);
    state(1, idx) = 0.3 + 0.2 * std::sin(th - 2.0 * r) * std::tanh(r);
  }
  return state;
}

}  // namespace

TEST_CASE("second derivative exact on x^2") {
  const auto grid = IntervalGrid::make(0.0, 1.0, 0.02);
  const SpMat d2 = fd_derivative_1d(grid, 2, 2, BoundarySpec::dirichlet());
  Vec x2(grid.size() - 2);
  for (int i = 0; i < x2.size(); ++i) {
    const double x = grid.points[i + 1];
    x2[i] = x * x;
  }
  const CVec y = apply_op(d2, x2);
  for (int i = 1; i + 1 < y.size(); ++i)  // rows not touching the ends
    CHECK(std::abs(y[i] - 2.0) < 1e-10);
}

TEST_CASE("fourth-order first derivative exact on x^4") {
  const auto grid = IntervalGrid::make(0.0, 1.0, 0.05);
  const SpMat d1 = fd_derivative_1d(grid, 1, 4, BoundarySpec::dirichlet());
  Vec f(grid.size() - 2);
  for (int i = 0; i < f.size(); ++i) {
    const double x = grid.points[i + 1];
    f[i] = x * x * x * x;
  }
  const CVec y = apply_op(d1, f);
  for (int i = 2; i + 2 < y.size(); ++i) {
    const double x = grid.points[i + 1];
    CHECK(std::abs(y[i] - 4.0 * x * x * x) < 1e-10);
  }
}

TEST_CASE("dirichlet d_xx eigenvalues approach -n^2 pi^2 / R^2") {
  const double R = 10.0;
  const auto grid = IntervalGrid::make(-0.5 * R, R, 0.01);
  const SpMat d2 = fd_derivative_1d(grid, 2, 2, BoundarySpec::dirichlet());
  const auto res = eigs_shift_invert(d2, 5, 0.0);
  const double h = grid.spacing;
  for (int n = 1; n <= 5; ++n) {
    const double analytic = -n * n * pi * pi / (R * R);
    const double theta = n * pi * h / R;
    const double discrete = -2.0 / (h * h) * (1.0 - std::cos(theta));
    CHECK(std::abs(res.eigenvalues[n - 1] - discrete) < 1e-9);  // solver exact
    CHECK(std::abs(res.eigenvalues[n - 1] - analytic) <
          0.1 * theta * theta * theta * theta / (h * h));  // within the h^2 error
  }
}

TEST_CASE("unsupported accuracy rejected") {
  const auto grid = IntervalGrid::make(0.0, 1.0, 0.1);
  CHECK_THROWS_AS(fd_derivative_1d(grid, 3, 2, BoundarySpec::dirichlet()),
                  std::invalid_argument);
  CHECK_THROWS_AS(fd_derivative_1d(grid, 1, 6, BoundarySpec::dirichlet()),
                  std::invalid_argument);
}

TEST_CASE("fourier differentiation exactness") {
  const int n = 128;
  const Mat d1 = fourier_diff(n, 1);
  const Mat d2 = fourier_diff(n, 2);
  Vec s(n), c3(n), ones = Vec::Ones(n);
  for (int j = 0; j < n; ++j) {
    const double phi = 2.0 * pi * j / n;
    s[j] = std::sin(phi);
    c3[j] = std::cos(3.0 * phi);
  }
  Vec ds = d1 * s;
  Vec dc3 = d2 * c3;
  for (int j = 0; j < n; ++j) {
    const double phi = 2.0 * pi * j / n;
    CHECK(std::abs(ds[j] - std::cos(phi)) < 1e-12);
    CHECK(std::abs(dc3[j] + 9.0 * std::cos(3.0 * phi)) < 1e-10);
  }
  CHECK((d1 * ones).lpNorm<Eigen::Infinity>() < 1e-11);
  CHECK_THROWS_AS(fourier_diff(5, 1), std::invalid_argument);
}

TEST_CASE("polar laplacian annihilates constants (neumann)") {
  const auto g = PolarGrid::make(2.0, 0.1, 16);
  const SpMat lap = polar_laplacian(g);
  const CVec y = apply_op(lap, Vec::Ones(g.nodes()));
  CHECK(y.lpNorm<Eigen::Infinity>() < 1e-8);
}

TEST_CASE("polar laplacian of r^2 is 4 at interior nodes") {
  const auto g = PolarGrid::make(2.0, 0.05, 16);
  const SpMat lap = polar_laplacian(g);
  Vec f(g.nodes());
  for (int i = 0; i < g.nodes(); ++i) f[i] = g.r_of(i) * g.r_of(i);
  const CVec y = apply_op(lap, f);
  for (int i = 0; i < g.nodes(); ++i)
    if (g.ring_of(i) <= g.n_r - 3)  // interior: boundary rows carry the BC
      CHECK(std::abs(y[i] - 4.0) < 1e-6);
}

TEST_CASE("polar laplacian annihilates the harmonic r^2 cos(2 phi)") {
  const auto g = PolarGrid::make(2.0, 0.05, 32);
  const SpMat lap = polar_laplacian(g);
  Vec f(g.nodes());
  f[0] = 0.0;
  for (int ring = 1; ring <= g.n_r - 1; ++ring)
    for (int j = 0; j < g.n_theta; ++j) {
      const double r = ring * g.h_r;
      f[g.index(ring, j)] = r * r * std::cos(2.0 * g.theta(j));
    }
  const CVec y = apply_op(lap, f);
  for (int i = 0; i < g.nodes(); ++i)
    if (g.ring_of(i) <= g.n_r - 3) CHECK(std::abs(y[i]) < 1e-5);
}

TEST_CASE("system operator: eta = 0 equals unweighted pieces entrywise") {
  const auto g = PolarGrid::make(1.5, 0.1, 8);
  const ReactionModel m = barkley_model({});
  const Mat state = synthetic_state(g);
  const SpMat l0 = assemble_system_operator(m, g, state, 0.8, 0.0);

  // manual: D lap + omega dphi + f_u blocks
  const SpMat lap = polar_laplacian(g);
  const SpMat dphi = polar_angular_d1(g);
  const int nn = g.nodes();
  CVec probe = CVec::Zero(2 * nn);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 2 * nn; ++i) probe[i] = Complex(double(rng() % 1000) / 1000.0, 0.0);
  CVec lhs = l0 * probe;
  CVec rhs = CVec::Zero(2 * nn);
  rhs.head(nn) = m.diffusion[0] * (lap * probe.head(nn)) + 0.8 * (dphi * probe.head(nn));
  rhs.tail(nn) = m.diffusion[1] * (lap * probe.tail(nn)) + 0.8 * (dphi * probe.tail(nn));
  for (int p = 0; p < nn; ++p) {
    const Mat j = m.f_u(state.col(p));
    rhs[p] += j(0, 0) * probe[p] + j(0, 1) * probe[nn + p];
    rhs[nn + p] += j(1, 0) * probe[p] + j(1, 1) * probe[nn + p];
  }
  CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("system operator: omega term drops on phi-constant fields") {
  const auto g = PolarGrid::make(1.5, 0.1, 8);
  const ReactionModel m = barkley_model({});
  Mat state = Mat::Zero(2, g.nodes());
  const SpMat with = assemble_system_operator(m, g, state, 0.9, 0.0);
  const SpMat without = assemble_system_operator(m, g, state, 0.0, 0.0);
  Vec f(2 * g.nodes());
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < g.nodes(); ++i)
      f[c * g.nodes() + i] = std::cos(g.r_of(i) + c);  // radial only
  CHECK(((with - without) * f.cast<Complex>()).lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("weighted operator is the exact diagonal conjugation (small R)") {
  const auto g = PolarGrid::make(2.0, 0.1, 16);
  const ReactionModel m = barkley_model({});
  const Mat state = synthetic_state(g);
  const double omega = 0.7;
  for (double eta : {-0.8, 0.3}) {
    const SpMat lw = assemble_system_operator(m, g, state, omega, eta);
    const SpMat l0 = assemble_system_operator(m, g, state, omega, 0.0);
    // S L0 S^{-1} with S = diag(e^{eta r}) formed explicitly at this scale
    SpMat s(2 * g.nodes(), 2 * g.nodes()), sinv(2 * g.nodes(), 2 * g.nodes());
    std::vector<Triplet> ts, tsi;
    for (int c = 0; c < 2; ++c)
      for (int i = 0; i < g.nodes(); ++i) {
        const double w = std::exp(eta * g.r_of(i));
        ts.emplace_back(c * g.nodes() + i, c * g.nodes() + i, w);
        tsi.emplace_back(c * g.nodes() + i, c * g.nodes() + i, 1.0 / w);
      }
    s.setFromTriplets(ts.begin(), ts.end());
    sinv.setFromTriplets(tsi.begin(), tsi.end());
    const SpMat conj = SpMat(s * l0 * sinv);
    CHECK(norm1(SpMat(lw - conj)) < 1e-9 * norm1(lw));
  }
}

TEST_CASE("weighted and unweighted spectra agree through conjugation") {
  const auto g = PolarGrid::make(2.0, 0.1, 16);
  const ReactionModel m = barkley_model({});
  const Mat state = synthetic_state(g);
  const SpMat lw = assemble_system_operator(m, g, state, 0.7, -1.0);
  const SpMat l0 = assemble_system_operator(m, g, state, 0.7, 0.0);
  const auto ew = eigs_shift_invert(lw, 12, 0.0);
  const auto e0 = eigs_shift_invert(l0, 12, 0.0);
  for (int i = 0; i < 10; ++i) {
    double best = 1e9;
    for (int j = 0; j < 12; ++j) best = std::min(best, std::abs(ew.eigenvalues[i] - e0.eigenvalues[j]));
    CHECK(best < 1e-6);
  }
}

TEST_CASE("NaN base state rejected") {
  const auto g = PolarGrid::make(1.0, 0.1, 8);
  Mat state = Mat::Zero(2, g.nodes());
  state(0, 3) = std::nan("");
  CHECK_THROWS_AS(assemble_system_operator(barkley_model({}), g, state, 1.0, 0.0),
                  std::invalid_argument);
}
