#include "chs/diagnostics.hpp"

#include "chs/errors.hpp"
#include "chs/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace chs {

double xlogx(double x) {
    if (x > 0.0) return x * std::log(x);
    if (x == 0.0) return 0.0;
    std::ostringstream msg;
    msg << "xlogx: negative argument " << x;
    throw DomainViolation(msg.str());
}

double flory_huggins_density(double phi, double theta0) {
    if (!(std::abs(phi) <= 1.0)) {
        std::ostringstream msg;
        msg << "flory_huggins_density: |phi| > 1 (phi = " << phi << ")";
        throw DomainViolation(msg.str());
    }
    return xlogx(1.0 + phi) + xlogx(1.0 - phi) - 0.5 * theta0 * phi * phi;
}

namespace {

// h^2 sum over cells of the bulk density.
long double bulk_sum(const CellField& phi, double theta0) {
    const int n = phi.n();
    long double sum = 0.0L;
    for (int j = 1; j <= n; ++j)
        for (int i = 1; i <= n; ++i) sum += flory_huggins_density(phi(i, j), theta0);
    const double h = phi.grid().h();
    return sum * h * h;
}

}  // namespace

double discrete_energy(const CellField& phi, const PhysParams& params) {
    const long double bulk = bulk_sum(phi, params.theta0);
    const double g = grad_norm(fill_neumann_ghost(phi));
    const long double eps2 = static_cast<long double>(params.epsilon) * params.epsilon;
    return static_cast<double>(bulk + 0.5L * eps2 * g * g);
}

double convex_energy(const CellField& phi, const PhysParams& params) {
    return discrete_energy(phi, PhysParams{params.epsilon, 0.0, params.gamma});
}

double dissipation_residual(const CellField& prev_phi, const StepState& next,
                            const PhysParams& params, double dt) {
    const int n = prev_phi.n();
    const double h = prev_phi.grid().h();
    const long double eps2 = static_cast<long double>(params.epsilon) * params.epsilon;

    // Bulk energy difference, cell by cell.
    long double bulk = 0.0L;
    for (int j = 1; j <= n; ++j) {
        for (int i = 1; i <= n; ++i) {
            bulk += static_cast<long double>(flory_huggins_density(next.phi(i, j), params.theta0)) -
                    flory_huggins_density(prev_phi(i, j), params.theta0);
        }
    }
    bulk *= static_cast<long double>(h) * h;

    // Gradient energy difference as (g1 - g0, g1 + g0), plus ||g1 - g0||^2 / 2.
    const MacVector g1 = grad(fill_neumann_ghost(next.phi));
    const MacVector g0 = grad(fill_neumann_ghost(prev_phi));
    const MacVector gd = g1 - g0;
    const MacVector gs = g1 + g0;
    const long double grad_change = 0.5L * eps2 * inner_face(gd, gs);
    const long double grad_step = 0.5L * eps2 * inner_face(gd, gd);

    const double gm = grad_norm(fill_neumann_ghost(next.mu));
    const long double chem = static_cast<long double>(dt) * gm * gm;

    MacVector u = next.u;
    fill_velocity_inplace(u);
    const long double flow = static_cast<long double>(dt) / params.gamma *
                             (static_cast<long double>(inner_face(u, u)) + velocity_grad_norm_sq(u));

    return static_cast<double>(bulk + grad_change + grad_step + chem + flow);
}

double dissipation_residual(const StepState& prev, const StepState& next,
                            const PhysParams& params, double dt) {
    return dissipation_residual(prev.phi, next, params, dt);
}

double dissipation_tolerance(double energy) { return 1e-8 * std::max(1.0, std::abs(energy)); }

StepDiagnostics observe(const StepState& state, const PhysParams& params) {
    StepDiagnostics d;
    d.t = state.t;
    d.energy = discrete_energy(state.phi, params);
    d.mass = mean(state.phi);
    d.max_phi = max_value(state.phi);
    d.min_phi = min_value(state.phi);
    d.separation = std::min(1.0 - d.max_phi, 1.0 + d.min_phi);
    return d;
}

double mass_drift(std::span<const StepState> states) {
    if (states.empty()) return 0.0;
    const double m0 = mean(states.front().phi);
    double drift = 0.0;
    for (const StepState& s : states) drift = std::max(drift, std::abs(mean(s.phi) - m0));
    return drift;
}

double mass_drift(std::span<const StepDiagnostics> rows) {
    if (rows.empty()) return 0.0;
    const double m0 = rows.front().mass;
    double drift = 0.0;
    for (const StepDiagnostics& r : rows) drift = std::max(drift, std::abs(r.mass - m0));
    return drift;
}

}  // namespace chs
