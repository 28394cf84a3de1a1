#pragma once

// One step of the convex-splitting Cahn-Hilliard-Stokes scheme:
//
//   phi' - phi_n = dt lap mu - dt div(A phi_n u)
//   mu           = ln(1 + phi') - ln(1 - phi') - theta0 phi_n - eps^2 lap phi'
//   (-lap + I) u + grad p + gamma A phi_n grad mu = 0,   div u = 0
//
// mu, u and p are eliminated, leaving a nonlinear equation in phi' alone,
//   r(phi') = phi' - phi_n + L(mu(phi')) = 0,
// with L the mobility operator from stokes.hpp. It is solved by damped
// Newton-Krylov started from phi_n. Every Newton trial point is kept strictly
// inside (-1, 1).

#include "chs/diagnostics.hpp"
#include "chs/settings.hpp"
#include "chs/state.hpp"
#include "chs/stokes.hpp"

namespace chs {

/// mu = ln(1 + phi_new) - ln(1 - phi_new) - theta0 phi_old - eps^2 lap phi_new.
/// Throws DomainViolation if any |phi_new| >= 1. Result is Neumann-filled.
CellField chemical_potential(const CellField& phi_new, const CellField& phi_old,
                             const PhysParams& params);

struct ResidualEval {
    CellField r;   // phi - phi_n - dt lap mu + dt div(A phi_n u)
    CellField mu;  // Neumann-filled
    MacVector u;
    CellField p;
};

struct Direction {
    CellField dphi;  // mean-zero, Neumann-filled
    int cg_iterations = 0;
};

/// Solver for one time step with fixed phi_n. Constructing it caches the face
/// average of phi_n; it can be reused for several residual/Jacobian calls.
class StepProblem {
public:
    StepProblem(const CellField& phi_n, const PhysParams& params, double dt,
                const SolverSettings& settings);

    ResidualEval residual(const CellField& phi) const;

    /// Newton direction: solves J dphi = -r with J = I + L (D(phi) - eps^2 lap),
    /// D(phi) = 1/(1 + phi) + 1/(1 - phi), to settings.cg_rel_tol.
    Direction direction(const CellField& phi, const CellField& r) const;

    /// J v, exposed for verification.
    CellField jacobian_apply(const CellField& phi, const CellField& v) const;

    const CellField& phi_n() const noexcept { return phi_n_; }
    const MobilityOperator& mobility() const noexcept { return mobility_; }

private:
    // K v = D(phi) v - eps^2 lap v; J is self-adjoint in the K inner product.
    CellField curvature_apply(const CellField& d, const CellField& v) const;

    CellField phi_n_;
    PhysParams params_;
    double dt_;
    SolverSettings settings_;
    MobilityOperator mobility_;
};

ResidualEval step_residual(const CellField& phi, const CellField& phi_n, const PhysParams& params,
                           double dt, const SolverSettings& settings);

Direction newton_direction(const CellField& phi, const CellField& r, const CellField& phi_n,
                           const PhysParams& params, double dt, const SolverSettings& settings);

/// Largest alpha in {1, 1/2, 1/4, ...} with ||phi + alpha dphi||_inf <= 1 - delta.
/// Throws StepTooSmall below 2^-30.
double safeguard(const CellField& phi, const CellField& dphi, const SolverSettings& settings);

struct StepResult {
    StepState state;
    StepDiagnostics diagnostics;
};

/// Advances phi_n (at time t) by dt. The Newton iteration starts from
/// `initial_guess` when given, else from phi_n. Throws NewtonDiverged,
/// StepTooSmall, DomainViolation, or solver errors.
StepResult chs_step(const CellField& phi_n, const PhysParams& params, double dt, double t,
                    const SolverSettings& settings, const CellField* initial_guess = nullptr);

}  // namespace chs
