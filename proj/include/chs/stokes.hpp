#pragma once

#include "chs/grid.hpp"
#include "chs/settings.hpp"

namespace chs {

struct Projection {
    MacVector field;      // f + grad p, discretely divergence-free
    CellField potential;  // p, mean-zero, Neumann-filled
};

/// Discrete Helmholtz projection: p solves -lap p = div f (Neumann, mean zero)
/// and the result is f + grad p. Normal boundary components of f are taken as
/// zero.
Projection helmholtz_project(const MacVector& f, const SolverSettings& settings);

struct StokesSolution {
    MacVector u;  // no-penetration and free-slip filled
    CellField p;  // mean-zero, Neumann-filled
};

/// Solves -lap u + u + grad p = -force, div u = 0 with free-slip walls, as
/// (-lap + I) u = -P(force) and p the projection potential of force.
StokesSolution stokes_solve(const MacVector& force, const SolverSettings& settings);

/// The mobility operator of one time step,
///   L(mu) = s div(A phi_n u_mu) - s lap mu,  u_mu the Stokes velocity for
///   force gamma A phi_n grad mu.
/// It is symmetric positive definite on mean-zero cell fields. The face average
/// of phi_n is computed once at construction.
class MobilityOperator {
public:
    MobilityOperator(const CellField& phi_n, double gamma, double dt, SolverSettings settings);

    struct Result {
        CellField value;  // L(mu), interior only
        StokesSolution flow;
    };

    /// mu need not be mean-zero: L only sees its gradient. mu is Neumann-filled
    /// internally.
    Result apply_full(const CellField& mu) const;
    CellField apply(const CellField& mu) const { return apply_full(mu).value; }

    /// gamma * A phi_n * grad mu, the Stokes forcing for a given mu.
    MacVector forcing(const CellField& mu) const;

    const MacVector& face_phi() const noexcept { return face_phi_; }
    double gamma() const noexcept { return gamma_; }
    double dt() const noexcept { return dt_; }

private:
    MacVector face_phi_;
    double gamma_;
    double dt_;
    SolverSettings settings_;
};

/// One-shot form of MobilityOperator::apply.
CellField apply_Lh(const CellField& mu, const CellField& phi_n, double gamma, double dt,
                   const SolverSettings& settings);

}  // namespace chs
