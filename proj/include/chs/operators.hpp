#pragma once

// Discrete calculus on the MAC grid. Operators that read ghost values
// document the fill they expect; none of them fills for the caller.

#include "chs/grid.hpp"
#include "chs/settings.hpp"

#include <limits>

namespace chs {

/// Face gradient (D_x phi, D_y phi) on every face. phi must be Neumann-filled,
/// so boundary-face values come out exactly 0.
MacVector grad(const CellField& phi);

/// Cell divergence d_x f^x + d_y f^y. Only interior cells of the result are set.
CellField div(const MacVector& v);

/// Face average (A_x phi, A_y phi). phi must be Neumann-filled.
MacVector avg_to_faces(const CellField& phi);

/// Five-point Laplacian div(grad phi). phi must be Neumann-filled.
CellField laplacian_cell(const CellField& phi);

/// Component-wise five-point Laplacian on faces. v must carry both the
/// no-penetration and free-slip fills. Boundary normal faces of the result are
/// 0, which keeps div(lap v) == lap(div v) exact.
MacVector laplacian_face(const MacVector& v);

/// Pointwise product on faces (used for A_h phi * u and A_h phi * grad mu).
MacVector multiply(const MacVector& a, const MacVector& b);

/// (phi, psi) = h^2 sum over interior cells.
double inner_cell(const CellField& a, const CellField& b);

/// [f, g]_x + [f, g]_y: boundary faces carry weight 1/2, ghosts are excluded.
double inner_face(const MacVector& f, const MacVector& g);

inline constexpr double kInfNorm = std::numeric_limits<double>::infinity();

/// ||phi||_p for p >= 1 (p = kInfNorm gives the max norm). Throws
/// std::invalid_argument for p < 1.
double norm(const CellField& phi, double p = 2.0);

/// ||f||_2 = sqrt((f, f)) on faces.
double norm(const MacVector& f);

/// ||grad_h phi||_p with the half-weighted face brackets. phi Neumann-filled.
double grad_norm(const CellField& phi, double p = 2.0);

/// sqrt(||phi||_2^2 + ||grad_h phi||_2^2). phi Neumann-filled.
double h1_norm(const CellField& phi);

/// ||grad_h v||_2^2 for a velocity field, i.e. (v, -lap v) written as a sum of
/// squared differences. v must carry both velocity fills.
double velocity_grad_norm_sq(const MacVector& v);

double max_abs(const CellField& phi);
double max_value(const CellField& phi);
double min_value(const CellField& phi);

/// (phi, 1) / |Omega|.
double mean(const CellField& phi);

/// Returns phi - mean(phi) on the interior (ghosts untouched).
CellField subtract_mean(CellField phi);

/// ||phi||_{-1,h} = sqrt((phi, (-lap)^{-1} phi)). Throws std::invalid_argument
/// unless |mean(phi)| <= 1e-12 ||phi||_2.
double hm1_norm(const CellField& phi, const SolverSettings& settings = {});

}  // namespace chs
