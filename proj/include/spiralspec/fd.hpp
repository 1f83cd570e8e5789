#ifndef SPIRALSPEC_FD_HPP
#define SPIRALSPEC_FD_HPP

#include "spiralspec/grid.hpp"
#include "spiralspec/types.hpp"

namespace spiralspec {

/// Boundary closure for 1D difference operators.
///   DirichletEliminated: operator acts on interior nodes only; boundary
///     values are zero and their stencil entries drop out.
///   RobinGhost: operator acts on all nodes; the outward-normal condition
///     du/dn = eta * u is enforced at both ends through second-order ghost
///     points.
struct BoundarySpec {
  enum class Kind { DirichletEliminated, RobinGhost } kind = Kind::DirichletEliminated;
  double robin_eta = 0.0;

  static BoundarySpec dirichlet() { return {}; }
  static BoundarySpec robin(double eta) { return {Kind::RobinGhost, eta}; }
  static BoundarySpec neumann() { return robin(0.0); }
};

/// Sparse d/dx or d^2/dx^2 on a uniform grid. Interior rows use centered
/// stencils of the requested accuracy (2 or 4); rows where the wide stencil
/// does not fit drop to second order.
SpMat fd_derivative_1d(const IntervalGrid& grid, int order, int accuracy,
                       const BoundarySpec& bc);

}  // namespace spiralspec

#endif
