#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "spiralspec/convdiff.hpp"
#include "spiralspec/linalg.hpp"
#include "spiralspec/spatial.hpp"

using namespace spiralspec;

namespace {

constexpr double kC0 = 0.2, kC2 = 1.0, kK = 0.4;

Mat exact_profile(int m, double k) {
  const double amp = std::sqrt(1.0 - k * k);
  Mat p(2, m);
  for (int j = 0; j < m; ++j) {
    const double phi = 2.0 * pi * j / m;
    p(0, j) = amp * std::cos(phi);
    p(1, j) = amp * std::sin(phi);
  }
  return p;
}

WaveTrain lo_wavetrain(int m = 48) {
  WaveTrain wt;
  wt.model = lambda_omega_model(kC0, kC2);
  wt.k = kK;
  wt.omega = -kC0 - kC2 * (1.0 - kK * kK);
  wt.profile = exact_profile(m, kK);
  return wt;
}

// constant-coefficient degenerate wave train (f_u = 0): per Fourier mode the
// dispersion is lambda = D (nu + i k m)^2 + i omega m
WaveTrain degenerate_wavetrain(int m = 32) {
  WaveTrain wt;
  ReactionModel model;
  model.n_components = 1;
  model.diffusion = Vec::Ones(1);
  model.f = [](const Vec&) { return Vec::Zero(1); };
  model.f_u = [](const Vec&) { return Mat::Zero(1, 1); };
  model.name = "zero";
  wt.model = model;
  wt.k = 1.0;
  wt.omega = 1.3;
  wt.profile = Mat::Zero(1, m);
  return wt;
}

}  // namespace

TEST_CASE("eta shift moves the spectrum exactly") {
  const auto wt = lo_wavetrain(32);
  const CMat a = assemble_awt(wt, Complex(0.3, 0.1), 0.0);
  const CMat as = assemble_awt(wt, Complex(0.3, 0.1), 0.7);
  CVec ea = dense_eigenvalues(a), es = dense_eigenvalues(as);
  std::sort(ea.data(), ea.data() + ea.size(), [](Complex x, Complex y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  std::sort(es.data(), es.data() + es.size(), [](Complex x, Complex y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  for (int i = 0; i < ea.size(); ++i) CHECK(std::abs(es[i] - ea[i] - 0.7) < 1e-8);
}

TEST_CASE("lambda = 0 has the translation eigenvalue nu = 0") {
  const auto wt = lo_wavetrain(48);
  const auto s = spatial_spectrum(wt, 0.0);
  double best = 1e9;
  for (auto nu : s.nus) best = std::min(best, std::abs(nu));
  CHECK(best < 1e-8);
}

TEST_CASE("degenerate constant-coefficient spectrum matches the per-mode quadratic") {
  const auto wt = degenerate_wavetrain(32);
  const Complex lambda(0.4, 0.2);
  const auto s = spatial_spectrum(wt, lambda, 16);
  // closed form: nu = -i k m +- sqrt(lambda - i omega m)
  std::vector<Complex> exact;
  for (int mode = -16; mode <= 16; ++mode) {
    const Complex root = std::sqrt(lambda - Complex(0, wt.omega * mode));
    exact.push_back(-Complex(0, wt.k * mode) + root);
    exact.push_back(-Complex(0, wt.k * mode) - root);
  }
  for (auto nu : s.nus) {
    double best = 1e9;
    for (auto e : exact) best = std::min(best, std::abs(nu - e));
    CHECK(best < 1e-8);
  }
}

TEST_CASE("real positive lambda: strict sign split") {
  const auto wt = lo_wavetrain(48);
  const auto s = spatial_spectrum(wt, 1.0);
  REQUIRE(s.idx_minus1 >= 0);
  REQUIRE(s.idx_0 >= 0);
  CHECK(s.nus[s.idx_minus1].real() < 0.0);
  CHECK(s.nus[s.idx_0].real() > 0.0);
  CHECK(s.idx_0 == s.idx_minus1 + 1);
}

TEST_CASE("conjugation symmetry of the spatial spectrum") {
  const auto wt = lo_wavetrain(48);
  const Complex lambda(0.25, 0.6);
  const auto s = spatial_spectrum(wt, lambda, 10);
  const auto sc = spatial_spectrum(wt, std::conj(lambda), 10);
  for (auto nu : s.nus) {
    double best = 1e9;
    for (auto nuc : sc.nus) best = std::min(best, std::abs(std::conj(nuc) - nu));
    CHECK(best < 1e-8);
  }
}

TEST_CASE("spectral gap and weights: convdiff cross-check at c = 0") {
  // drift-free constant state: gap equals the cd_spatial_eigs gap
  const auto wt = degenerate_wavetrain(32);
  for (double lam : {0.3, 1.0, 2.5}) {
    const auto s = spatial_spectrum(wt, lam, 12);
    REQUIRE(s.idx_minus1 >= 0);
    REQUIRE(s.idx_0 >= 0);
    const auto plan = spectral_gap(lam, s.nus[s.idx_minus1], s.nus[s.idx_0]);
    const auto cd = cd_spatial_eigs(0.0, lam);
    CHECK(plan.j0_lo == doctest::Approx(cd.gap_lo).epsilon(1e-8));
    CHECK(plan.j0_hi == doctest::Approx(cd.gap_hi).epsilon(1e-8));
  }
}

TEST_CASE("select_weight policies") {
  const auto plan = spectral_gap(0.0, Complex(-0.7, 0.2), Complex(0.7, -0.1));
  const auto mid = select_weight(plan, WeightPolicy::midpoint());
  CHECK(mid.eta == doctest::Approx(0.0));

  // convdiff c=1, lambda=-0.15: midpoint is c/2 by Vieta
  const auto cd = cd_spatial_eigs(1.0, -0.15);
  const auto plan2 = spectral_gap(-0.15, cd.nu_minus1, cd.nu_0);
  CHECK(select_weight(plan2, WeightPolicy::midpoint()).eta == doctest::Approx(0.5));

  const auto fixed_in = select_weight(plan2, WeightPolicy::fixed(0.5));
  CHECK_FALSE(fixed_in.warned);
  const auto fixed_out = select_weight(plan2, WeightPolicy::fixed(3.0));
  CHECK(fixed_out.warned);

  auto empty = spectral_gap(-1.0, Complex(-0.3, 1.0), Complex(-0.3, -1.0));
  CHECK(empty.empty);
  CHECK_THROWS_AS(select_weight(empty, WeightPolicy::midpoint()), std::runtime_error);
}

TEST_CASE("labels constant along a constant path, restored around a loop") {
  const auto wt = lo_wavetrain(48);
  const Complex base(0.8, 0.1);
  const auto constant = track_labels(wt, {base, base, base});
  REQUIRE_FALSE(constant.collision);
  CHECK(std::abs(constant.nu_minus1.front() - constant.nu_minus1.back()) < 1e-9);

  // small loop in the right half plane encircles no branch points
  std::vector<Complex> loop;
  for (int i = 0; i <= 24; ++i) {
    const double th = 2.0 * pi * i / 24;
    loop.emplace_back(1.0 + 0.1 * std::cos(th), 0.1 * std::sin(th));
  }
  const auto looped = track_labels(wt, loop);
  REQUIRE_FALSE(looped.collision);
  CHECK(std::abs(looped.nu_minus1.front() - looped.nu_minus1.back()) < 1e-7);
  CHECK(std::abs(looped.nu_0.front() - looped.nu_0.back()) < 1e-7);
}

TEST_CASE("bloch elimination consistency with A_wt") {
  const auto wt = lo_wavetrain(32);
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> uni(-0.6, 0.6);
  for (int trial = 0; trial < 10; ++trial) {
    const Complex nu(uni(rng), uni(rng));
    const CVec lams = dense_eigenvalues(bloch_operator(wt, nu));
    // pick an interior eigenvalue and verify nu appears in spec(A_wt(lambda))
    int pick = 0;
    for (int i = 1; i < lams.size(); ++i)
      if (std::abs(lams[i]) < std::abs(lams[pick])) pick = i;
    const CVec nus = dense_eigenvalues(assemble_awt(wt, lams[pick], 0.0));
    double best = 1e9;
    for (int i = 0; i < nus.size(); ++i) best = std::min(best, std::abs(nus[i] - nu));
    CHECK(best < 1e-8);
  }
}

TEST_CASE("fredholm curves: translation mode and scalar reduction") {
  // gamma = 0, eta = 0 passes through lambda = 0
  const auto wt = lo_wavetrain(48);
  const auto curves = fredholm_curves(wt, 0.0, linspace(-0.2, 0.2, 9), 4);
  double best = 1e9;
  for (const auto& c : curves) best = std::min(best, curve_distance(0.0, c));
  CHECK(best < 1e-7);

  // scalar constant-coefficient reduction reproduces the weighted parabola
  WaveTrain scalar = degenerate_wavetrain(32);
  ReactionModel m = scalar.model;
  m.f_u = [](const Vec&) { return Mat::Constant(1, 1, -0.3); };
  scalar.model = m;
  const double eta = 0.2;
  const auto sc = fredholm_curves(scalar, eta, linspace(-0.5, 0.5, 11), 1);
  REQUIRE(sc.size() >= 1);
  for (size_t i = 0; i < sc[0].points.size(); ++i) {
    const double gamma = sc[0].param[i];
    // lambda = (ig - eta)^2 - 0.3 for the m = 0 branch (c = 0 here)
    const Complex expect = Complex(eta * eta - gamma * gamma - 0.3, -2.0 * eta * gamma);
    CHECK(std::abs(sc[0].points[i] - expect) < 1e-7);
  }
}

TEST_CASE("bloch family symmetry: gamma -> gamma + k shifts lambda by -i omega") {
  const auto wt = resample_wavetrain(lo_wavetrain(48), 47);
  const Complex shift(0.0, -wt.omega);
  for (double gamma : {0.0, 0.07, -0.13}) {
    const CVec a = dense_eigenvalues(bloch_operator(wt, Complex(0.0, gamma)));
    const CVec b = dense_eigenvalues(bloch_operator(wt, Complex(0.0, gamma + kK)));
    // compare the rightmost eigenvalues as sets after the shift
    std::vector<Complex> av(a.data(), a.data() + a.size());
    std::sort(av.begin(), av.end(), [](Complex x, Complex y) { return x.real() > y.real(); });
    for (int i = 0; i < 8; ++i) {
      double best = 1e9;
      for (int j = 0; j < b.size(); ++j)
        best = std::min(best, std::abs(b[j] - (av[i] + shift)));
      CHECK(best < 1e-6);
    }
  }
}

TEST_CASE("absolute spectrum of the scalar heat problem is the real ray") {
  // scalar model with constant f_u = a: spatial eigenvalues at mode 0 are
  // +-sqrt(lambda - a), so the absolute spectrum is the ray (-inf, a] with
  // the branch point at lambda = a
  auto wt = degenerate_wavetrain(32);
  const auto bp = find_branch_point(wt, Complex(0.02, 0.0), Complex(0.01, 0.0), 32);
  CHECK(std::abs(bp.lambda) < 1e-8);

  const auto curve = absolute_spectrum_trace(wt, bp, 40, 0.1);
  CHECK(curve.points.size() >= 10);
  for (auto lam : curve.points) {
    CHECK(std::abs(lam.imag()) < 1e-7);
    CHECK(lam.real() < 1e-8);
  }

  // shifted kinetics move the branch point to lambda = a
  WaveTrain wts = degenerate_wavetrain(32);
  ReactionModel m = wts.model;
  m.f_u = [](const Vec&) { return Mat::Constant(1, 1, -0.3); };
  wts.model = m;
  const auto bp2 = find_branch_point(wts, Complex(-0.25, 0.02), Complex(0.01, 0.01), 32);
  CHECK(std::abs(bp2.lambda - Complex(-0.3, 0.0)) < 1e-7);
}

TEST_CASE("branch point scan on the lambda-omega wave train") {
  const auto wt = lo_wavetrain(48);
  // the lambda-omega absolute spectrum is near-horizontal here: scan a
  // vertical segment that crosses it transversally
  const auto bp = find_branch_point_scan(wt, Complex(-2.5, 0.5), Complex(-2.5, -0.5), 48, 40);
  REQUIRE(bp.has_value());
  // at the branch point the two labeled eigenvalues truly collide
  const auto s = spatial_spectrum(wt, bp->lambda, 10);
  int count_close = 0;
  for (auto nu : s.nus)
    if (std::abs(nu - bp->nu) < 1e-4) ++count_close;
  CHECK(count_close >= 2);

  auto curve = absolute_spectrum_trace(wt, *bp, 30, 0.05);
  CHECK(curve.points.size() >= 5);
  // the curve stays off the unstable half plane for this stable wave train
  for (auto lam : curve.points) CHECK(lam.real() < 1e-6);
}
