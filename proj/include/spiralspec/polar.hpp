#ifndef SPIRALSPEC_POLAR_HPP
#define SPIRALSPEC_POLAR_HPP

#include "spiralspec/grid.hpp"
#include "spiralspec/kinetics.hpp"
#include "spiralspec/types.hpp"

namespace spiralspec {

/// Scalar polar Laplacian d_rr + (1/r) d_r + (1/r^2) d_phiphi on the disk
/// grid, with the boundary condition d_r u = robin_eta * u at r = R folded in
/// through a second-order ghost point (robin_eta = 0 gives Neumann).
///
/// Interior radial rows are fourth-order centered; the last two rings drop to
/// second order. Rings 1 and 2 reach across the pole using u(-r, phi) =
/// u(r, phi + pi) and the origin value. The single origin row is the Cartesian
/// five-point stencil on the four nearest angular neighbours; its row sum is
/// checked to vanish for the Neumann case.
SpMat polar_laplacian(const PolarGrid& grid, double robin_eta = 0.0);

/// Angular derivative d_phi: Fourier differentiation blocks per ring, zero at
/// the origin node.
SpMat polar_angular_d1(const PolarGrid& grid);

/// Entrywise conjugation by the radial weight e^{eta r}: entry (i,j) picks up
/// the bounded local factor e^{eta h (ring_i - ring_j)}. Applied to an
/// operator L this realizes S L S^{-1} with S = diag(e^{eta r}) exactly, while
/// never forming the global (overflow-prone) factors.
SpMat conjugate_radial_weight(const SpMat& op, const PolarGrid& grid, double eta,
                              int n_components);

/// The weighted linearization
///   L_R^eta = D Lap + omega d_phi + f_u(base_state)  conjugated by e^{eta r},
/// acting componentwise on fields stored component-major (index c*nodes + p).
/// base_state is n_components x nodes. The base boundary condition is
/// bc_a u + bc_b d_r u = 0 at r = R (default Neumann); the weighted operator
/// then carries the conjugated condition, which for Neumann is d_r w = eta w.
/// eta = 0 reproduces L_R entrywise.
SpMat assemble_system_operator(const ReactionModel& model, const PolarGrid& grid,
                               const Mat& base_state, double omega, double eta,
                               double bc_a = 0.0, double bc_b = 1.0);

}  // namespace spiralspec

#endif
