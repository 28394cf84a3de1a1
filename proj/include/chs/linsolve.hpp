#pragma once

// Matrix-free SPD solvers on cell and face fields.
//
// Two backends share one contract. Krylov runs plain conjugate gradient on the
// stencil operators. Spectral diagonalizes the constant-coefficient problems
// exactly: the Neumann cell Laplacian by a DCT-II in each direction, and the
// face Laplacian by DST-I across the no-penetration direction times DCT-II
// along the free-slip direction.

#include "chs/grid.hpp"
#include "chs/settings.hpp"

#include <functional>

namespace chs {

template <class Field>
struct CgResult {
    Field solution;
    int iterations = 0;
    double relative_residual = 0.0;
};

using CellOperator = std::function<CellField(const CellField&)>;
using FaceOperator = std::function<MacVector(const MacVector&)>;

/// Preconditioned CG for an operator symmetric positive (semi)definite in the
/// cell inner product. With project_mean_zero the iterates are kept mean-zero,
/// which handles a constant nullspace; the rhs must then be mean-zero
/// (IncompatibleRhs otherwise). An empty preconditioner means identity.
/// Throws MaxIterExceeded when the tolerance is not met or on breakdown.
CgResult<CellField> cg_solve(const CellOperator& apply, const CellField& rhs,
                             const SolverSettings& settings, bool project_mean_zero,
                             const CellOperator& preconditioner = {});

/// CG in the face inner product. The rhs's boundary normal faces are treated as
/// zero and stay zero in the solution.
CgResult<MacVector> cg_solve_face(const FaceOperator& apply, const MacVector& rhs,
                                  const SolverSettings& settings);

/// Mean-zero psi with -lap psi = phi under Neumann conditions. Result is
/// Neumann-filled.
CellField inv_neg_laplacian(const CellField& phi, const SolverSettings& settings);

/// u with (-lap + I) u = rhs under no-penetration/free-slip conditions. The
/// result carries both velocity fills.
MacVector solve_face_helmholtz(const MacVector& rhs, const SolverSettings& settings);

/// (-lap + I) v with the velocity fills applied to a copy of v first.
MacVector apply_face_helmholtz(const MacVector& v);

/// -lap phi with the Neumann fill applied to a copy of phi first.
CellField apply_neg_laplacian(const CellField& phi);

/// Eigenvalue (4/h^2) sin^2(k pi / (2n)) of the 1-D second difference with
/// reflected ghosts (k = 0..n-1) or zero boundary values (k = 1..n-1).
double laplacian_eigenvalue_1d(int k, int n, double h);

/// Applies a symbol that is diagonal in the Neumann cosine basis:
/// phi -> sum_k symbol(lambda_k) <phi, c_k> c_k with lambda_k = lambda_kx + lambda_ky
/// the eigenvalue of -lap. Interior in, Neumann-filled out.
CellField apply_cell_symbol(const CellField& phi, const std::function<double(double)>& symbol);

}  // namespace chs
