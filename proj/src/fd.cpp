#include "spiralspec/fd.hpp"

#include <stdexcept>

namespace spiralspec {

namespace {

struct Stencil {
  int offset;  // leftmost offset relative to the row node
  std::vector<double> w;
};

Stencil centered(int order, int accuracy, double h) {
  if (order == 1 && accuracy == 2) return {-1, {-0.5 / h, 0.0, 0.5 / h}};
  if (order == 2 && accuracy == 2) {
    const double s = 1.0 / (h * h);
    return {-1, {s, -2.0 * s, s}};
  }
  if (order == 1 && accuracy == 4) {
    const double s = 1.0 / h;
    return {-2, {s / 12.0, -2.0 * s / 3.0, 0.0, 2.0 * s / 3.0, -s / 12.0}};
  }
  if (order == 2 && accuracy == 4) {
    const double s = 1.0 / (h * h);
    return {-2, {-s / 12.0, 4.0 * s / 3.0, -5.0 * s / 2.0, 4.0 * s / 3.0, -s / 12.0}};
  }
  throw std::invalid_argument("fd_derivative_1d: unsupported order/accuracy combination");
}

}  // namespace

SpMat fd_derivative_1d(const IntervalGrid& grid, int order, int accuracy,
                       const BoundarySpec& bc) {
  const int n_nodes = grid.size();
  const double h = grid.spacing;
  if (accuracy == 4 && n_nodes < 7)
    throw std::invalid_argument("fd_derivative_1d: need at least 7 points for accuracy 4");
  const Stencil wide = centered(order, accuracy, h);
  const Stencil narrow = centered(order, 2, h);

  std::vector<Triplet> trips;

  if (bc.kind == BoundarySpec::Kind::DirichletEliminated) {
    // unknowns are nodes 1..n_nodes-2; boundary values are zero
    const int n = n_nodes - 2;
    for (int row = 0; row < n; ++row) {
      const int node = row + 1;
      const int reach = -wide.offset;
      const bool fits = node - reach >= 0 && node + reach <= n_nodes - 1;
      const Stencil& st = fits ? wide : narrow;
      for (int q = 0; q < int(st.w.size()); ++q) {
        const int col_node = node + st.offset + q;
        if (col_node <= 0 || col_node >= n_nodes - 1) continue;  // eliminated
        if (st.w[q] != 0.0) trips.emplace_back(row, col_node - 1, st.w[q]);
      }
    }
    SpMat a(n, n);
    a.setFromTriplets(trips.begin(), trips.end());
    a.makeCompressed();
    return a;
  }

  // Robin ghosts: all nodes are unknowns. Ghost values from the second-order
  // one-sided closure of du/dn = eta*u:
  //   left:  g = u_1 + 2 h eta u_0,   right: g = u_{n-2} + 2 h eta u_{n-1}.
  const int n = n_nodes;
  const double eta = bc.robin_eta;
  auto add = [&](int row, int col, double v) {
    if (v != 0.0) trips.emplace_back(row, col, v);
  };
  for (int row = 0; row < n; ++row) {
    const int reach = -wide.offset;
    const bool fits = row - reach >= 0 && row + reach <= n - 1;
    if (row == 0 || row == n - 1) {
      const int inner = (row == 0) ? 1 : n - 2;
      if (order == 1) {
        // derivative at the boundary equals the Robin value itself
        add(row, row, (row == 0 ? -eta : eta));
      } else {
        const double s = 1.0 / (h * h);
        add(row, inner, 2.0 * s);
        add(row, row, -2.0 * s + 2.0 * h * eta * s);
      }
      continue;
    }
    const Stencil& st = fits ? wide : narrow;
    for (int q = 0; q < int(st.w.size()); ++q) {
      const int col = row + st.offset + q;
      add(row, col, st.w[q]);
    }
  }
  SpMat a(n, n);
  a.setFromTriplets(trips.begin(), trips.end());
  a.makeCompressed();
  return a;
}

}  // namespace spiralspec
