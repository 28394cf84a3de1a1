#include "chs/stokes.hpp"

#include "chs/linsolve.hpp"
#include "chs/operators.hpp"

namespace chs {

Projection helmholtz_project(const MacVector& f, const SolverSettings& settings) {
    MacVector field = fill_no_penetration(f);
    CellField rhs = div(field);
    // div of a no-penetration field telescopes to zero mass; strip the rounding.
    rhs = subtract_mean(rhs);
    CellField p = inv_neg_laplacian(rhs, settings);
    field += grad(p);
    fill_velocity_inplace(field);
    return {std::move(field), std::move(p)};
}

StokesSolution stokes_solve(const MacVector& force, const SolverSettings& settings) {
    Projection proj = helmholtz_project(force, settings);
    proj.field *= -1.0;
    MacVector u = solve_face_helmholtz(proj.field, settings);
    return {std::move(u), std::move(proj.potential)};
}

MobilityOperator::MobilityOperator(const CellField& phi_n, double gamma, double dt,
                                   SolverSettings settings)
    : face_phi_(avg_to_faces(fill_neumann_ghost(phi_n))),
      gamma_(gamma),
      dt_(dt),
      settings_(settings) {}

MacVector MobilityOperator::forcing(const CellField& mu) const {
    MacVector f = multiply(face_phi_, grad(fill_neumann_ghost(mu)));
    f *= gamma_;
    return f;
}

MobilityOperator::Result MobilityOperator::apply_full(const CellField& mu) const {
    const CellField mu_filled = fill_neumann_ghost(mu);
    StokesSolution flow = stokes_solve(forcing(mu_filled), settings_);

    CellField value = div(multiply(face_phi_, flow.u));
    value -= laplacian_cell(mu_filled);
    value *= dt_;
    return {std::move(value), std::move(flow)};
}

CellField apply_Lh(const CellField& mu, const CellField& phi_n, double gamma, double dt,
                   const SolverSettings& settings) {
    return MobilityOperator(phi_n, gamma, dt, settings).apply(mu);
}

}  // namespace chs
