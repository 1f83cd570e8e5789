#include "spiralspec/polar.hpp"

#include <cmath>
#include <stdexcept>

#include "spiralspec/fourier.hpp"

namespace spiralspec {

namespace {

// fourth-order centered weights at offsets -2..2
constexpr double d2w4[5] = {-1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12};
constexpr double d1w4[5] = {1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12};

}  // namespace

SpMat polar_laplacian(const PolarGrid& grid, double robin_eta) {
  const int m = grid.n_r - 1;  // outermost ring index
  if (m < 5) throw std::invalid_argument("polar_laplacian: need at least 5 rings");
  const int nt = grid.n_theta;
  const double h = grid.h_r;
  const int n = grid.nodes();

  std::vector<Triplet> trips;
  trips.reserve(size_t(n) * (nt + 6));
  auto add = [&](int row, int col, double v) {
    if (v != 0.0) trips.emplace_back(row, col, v);
  };

  // column for (ring, angle j), mapping ring -1 across the pole and ring 0 to
  // the origin node
  auto col_at = [&](int ring, int j) {
    if (ring == 0) return 0;
    if (ring < 0) return grid.index(-ring, (j + nt / 2) % nt);
    return grid.index(ring, ((j % nt) + nt) % nt);
  };

  // origin: Cartesian five-point stencil on the four nearest angular
  // neighbours; d_r = 0 there by symmetry of the stencil
  {
    const double s = 1.0 / (h * h);
    add(0, 0, -4.0 * s);
    for (int q = 0; q < 4; ++q) add(0, col_at(1, q * (nt / 4)), s);
  }

  const Mat dtt = fourier_diff(nt, 2);

  for (int ring = 1; ring <= m; ++ring) {
    const double r = ring * h;
    for (int j = 0; j < nt; ++j) {
      const int row = grid.index(ring, j);
      if (ring <= m - 2) {
        for (int q = -2; q <= 2; ++q) {
          const double w = d2w4[q + 2] / (h * h) + d1w4[q + 2] / (r * h);
          add(row, col_at(ring + q, j), w);
        }
      } else if (ring == m - 1) {
        add(row, col_at(ring - 1, j), 1.0 / (h * h) - 0.5 / (r * h));
        add(row, row, -2.0 / (h * h));
        add(row, col_at(ring + 1, j), 1.0 / (h * h) + 0.5 / (r * h));
      } else {
        // outer ring: ghost g = u_{m-1} + 2 h eta u_m from d_r u = eta u
        add(row, col_at(ring - 1, j), 2.0 / (h * h));
        add(row, row, -2.0 / (h * h) + 2.0 * robin_eta / h + robin_eta / r);
      }
      for (int k = 0; k < nt; ++k)
        add(row, grid.index(ring, k), dtt(j, k) / (r * r));
    }
  }

  SpMat a(n, n);
  a.setFromTriplets(trips.begin(), trips.end());
  a.prune(Complex(0.0), 0.0);
  a.makeCompressed();

  if (robin_eta == 0.0) {
    Complex row_sum(0, 0);
    for (int k = 0; k < a.outerSize(); ++k)
      for (SpMat::InnerIterator it(a, k); it; ++it)
        if (it.row() == 0) row_sum += it.value();
    if (std::abs(row_sum) > 1e-10 / (h * h))
      throw std::runtime_error("polar_laplacian: origin row sum nonzero");
  }
  return a;
}

SpMat polar_angular_d1(const PolarGrid& grid) {
  const int nt = grid.n_theta;
  const Mat dt = fourier_diff(nt, 1);
  std::vector<Triplet> trips;
  trips.reserve(size_t(grid.nodes()) * nt);
  for (int ring = 1; ring <= grid.n_r - 1; ++ring)
    for (int j = 0; j < nt; ++j)
      for (int k = 0; k < nt; ++k)
        if (dt(j, k) != 0.0)
          trips.emplace_back(grid.index(ring, j), grid.index(ring, k), dt(j, k));
  SpMat a(grid.nodes(), grid.nodes());
  a.setFromTriplets(trips.begin(), trips.end());
  a.makeCompressed();
  return a;
}

SpMat conjugate_radial_weight(const SpMat& op, const PolarGrid& grid, double eta,
                              int n_components) {
  if (eta == 0.0) return op;
  const int nodes = grid.nodes();
  if (op.rows() != n_components * nodes)
    throw std::invalid_argument("conjugate_radial_weight: dimension mismatch");
  SpMat out = op;
  for (int k = 0; k < out.outerSize(); ++k)
    for (SpMat::InnerIterator it(out, k); it; ++it) {
      const int ri = grid.ring_of(int(it.row()) % nodes);
      const int rj = grid.ring_of(int(it.col()) % nodes);
      if (ri != rj) it.valueRef() *= std::exp(eta * grid.h_r * (ri - rj));
    }
  return out;
}

SpMat assemble_system_operator(const ReactionModel& model, const PolarGrid& grid,
                               const Mat& base_state, double omega, double eta,
                               double bc_a, double bc_b) {
  const int n = model.n_components;
  const int nodes = grid.nodes();
  if (base_state.rows() != n || base_state.cols() != nodes)
    throw std::invalid_argument("assemble_system_operator: base_state shape mismatch");
  if (!base_state.allFinite())
    throw std::invalid_argument("assemble_system_operator: NaN in base_state");
  if (bc_b == 0.0)
    throw std::invalid_argument("assemble_system_operator: pure Dirichlet not supported");

  const SpMat lap = polar_laplacian(grid, -bc_a / bc_b);
  const SpMat dphi = polar_angular_d1(grid);

  std::vector<Triplet> trips;
  trips.reserve(size_t(n) * (lap.nonZeros() + dphi.nonZeros()) + size_t(n) * n * nodes);
  for (int c = 0; c < n; ++c) {
    const double d = model.diffusion[c];
    for (int k = 0; k < lap.outerSize(); ++k)
      for (SpMat::InnerIterator it(lap, k); it; ++it)
        trips.emplace_back(c * nodes + it.row(), c * nodes + it.col(), d * it.value());
    for (int k = 0; k < dphi.outerSize(); ++k)
      for (SpMat::InnerIterator it(dphi, k); it; ++it)
        trips.emplace_back(c * nodes + it.row(), c * nodes + it.col(), omega * it.value());
  }
  for (int p = 0; p < nodes; ++p) {
    const Mat j = model.f_u(base_state.col(p));
    for (int c = 0; c < n; ++c)
      for (int c2 = 0; c2 < n; ++c2)
        if (j(c, c2) != 0.0) trips.emplace_back(c * nodes + p, c2 * nodes + p, j(c, c2));
  }
  SpMat op(n * nodes, n * nodes);
  op.setFromTriplets(trips.begin(), trips.end());
  op.prune(Complex(0.0), 0.0);
  op.makeCompressed();
  return conjugate_radial_weight(op, grid, eta, n);
}

}  // namespace spiralspec
