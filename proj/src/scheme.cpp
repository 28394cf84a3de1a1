#include "chs/scheme.hpp"

#include "chs/errors.hpp"
#include "chs/linsolve.hpp"
#include "chs/operators.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace chs {

void PhysParams::validate() const {
    auto ok = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!ok(epsilon)) throw std::invalid_argument("PhysParams: epsilon must be positive");
    if (!ok(theta0)) throw std::invalid_argument("PhysParams: theta0 must be positive");
    if (!ok(gamma)) throw std::invalid_argument("PhysParams: gamma must be positive");
}

long TimeParams::step_count() const {
    if (t_final <= 0.0) return 0;
    const double ratio = t_final / dt;
    const double nearest = std::round(ratio);
    if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio)) return static_cast<long>(nearest);
    return static_cast<long>(std::ceil(ratio));
}

void TimeParams::validate() const {
    if (!(std::isfinite(dt) && dt > 0.0)) throw std::invalid_argument("TimeParams: dt must be > 0");
    if (!(std::isfinite(t_final) && t_final >= 0.0)) {
        throw std::invalid_argument("TimeParams: t_final must be >= 0");
    }
}

StepState StepState::at_rest(CellField phi, double t) {
    const GridSpec g = phi.grid();
    fill_neumann_ghost_inplace(phi);
    return StepState{std::move(phi), CellField(g), MacVector(g), CellField(g), t};
}

namespace {

void require_admissible(const CellField& phi, const char* where) {
    const int n = phi.n();
    for (int j = 1; j <= n; ++j) {
        for (int i = 1; i <= n; ++i) {
            const double v = phi(i, j);
            if (!(std::abs(v) < 1.0)) {
                std::ostringstream msg;
                msg << where << ": |phi| >= 1 at cell (" << i << ", " << j << "), phi = " << v;
                throw DomainViolation(msg.str());
            }
        }
    }
}

// Inner Stokes solves run 100x tighter than the outer Krylov tolerance so the
// Jacobian stays symmetric to working precision.
SolverSettings inner_settings(const SolverSettings& s) {
    SolverSettings inner = s;
    inner.cg_rel_tol = 0.01 * s.cg_rel_tol;
    return inner;
}

double norm_inf(const CellField& f) { return max_abs(f); }

}  // namespace

CellField chemical_potential(const CellField& phi_new, const CellField& phi_old,
                             const PhysParams& params) {
    require_admissible(phi_new, "chemical_potential");
    const CellField filled = fill_neumann_ghost(phi_new);
    CellField mu = laplacian_cell(filled);
    const double eps2 = params.epsilon * params.epsilon;
    const int n = phi_new.n();
    for (int j = 1; j <= n; ++j) {
        for (int i = 1; i <= n; ++i) {
            const double v = filled(i, j);
            mu(i, j) = std::log1p(v) - std::log1p(-v) - params.theta0 * phi_old(i, j) -
                       eps2 * mu(i, j);
        }
    }
    fill_neumann_ghost_inplace(mu);
    return mu;
}

StepProblem::StepProblem(const CellField& phi_n, const PhysParams& params, double dt,
                         const SolverSettings& settings)
    : phi_n_(fill_neumann_ghost(phi_n)),
      params_(params),
      dt_(dt),
      settings_(settings),
      mobility_(phi_n_, params.gamma, dt, inner_settings(settings)) {}

ResidualEval StepProblem::residual(const CellField& phi) const {
    CellField mu = chemical_potential(phi, phi_n_, params_);
    MobilityOperator::Result lm = mobility_.apply_full(mu);
    CellField r = phi;
    r -= phi_n_;
    r += lm.value;
    return {std::move(r), std::move(mu), std::move(lm.flow.u), std::move(lm.flow.p)};
}

CellField StepProblem::curvature_apply(const CellField& d, const CellField& v) const {
    const CellField vf = fill_neumann_ghost(v);
    CellField out = laplacian_cell(vf);
    out *= -params_.epsilon * params_.epsilon;
    const int n = v.n();
    for (int j = 1; j <= n; ++j)
        for (int i = 1; i <= n; ++i) out(i, j) += d(i, j) * vf(i, j);
    return out;
}

namespace {

CellField log_curvature(const CellField& phi) {
    CellField d(phi.grid());
    const int n = phi.n();
    for (int j = 1; j <= n; ++j) {
        for (int i = 1; i <= n; ++i) {
            const double v = phi(i, j);
            d(i, j) = 1.0 / (1.0 + v) + 1.0 / (1.0 - v);
        }
    }
    return d;
}

}  // namespace

CellField StepProblem::jacobian_apply(const CellField& phi, const CellField& v) const {
    require_admissible(phi, "jacobian_apply");
    const CellField d = log_curvature(phi);
    CellField out = v;
    out += mobility_.apply(curvature_apply(d, v));
    return out;
}

Direction StepProblem::direction(const CellField& phi, const CellField& r) const {
    require_admissible(phi, "newton_direction");
    const CellField d = log_curvature(phi);

    // J = I + L K is self-adjoint in the K inner product, so CG runs on the
    // symmetric positive definite form (K + K L K) dphi = -K r.
    auto apply = [&](const CellField& x) {
        CellField kx = curvature_apply(d, x);
        CellField out = curvature_apply(d, mobility_.apply(kx));
        out += kx;
        return out;
    };
    CellField rhs = curvature_apply(d, r);
    rhs *= -1.0;

    CellOperator precond;
    if (settings_.backend == SolverBackend::Spectral) {
        // Same operator with D frozen at its mean and the flow term dropped.
        const double d_mean = mean(d);
        const double eps2 = params_.epsilon * params_.epsilon;
        const double dt = dt_;
        precond = [d_mean, eps2, dt](const CellField& x) {
            return apply_cell_symbol(x, [=](double lam) {
                const double k = d_mean + eps2 * lam;
                return 1.0 / (k + k * k * dt * lam);
            });
        };
    }
    CgResult<CellField> res = cg_solve(apply, rhs, settings_, false, precond);
    CellField dphi = subtract_mean(std::move(res.solution));
    fill_neumann_ghost_inplace(dphi);
    return {std::move(dphi), res.iterations};
}

ResidualEval step_residual(const CellField& phi, const CellField& phi_n, const PhysParams& params,
                           double dt, const SolverSettings& settings) {
    return StepProblem(phi_n, params, dt, settings).residual(phi);
}

Direction newton_direction(const CellField& phi, const CellField& r, const CellField& phi_n,
                           const PhysParams& params, double dt, const SolverSettings& settings) {
    return StepProblem(phi_n, params, dt, settings).direction(phi, r);
}

double safeguard(const CellField& phi, const CellField& dphi, const SolverSettings& settings) {
    const double bound = 1.0 - settings.safeguard_delta;
    const int n = phi.n();
    constexpr double kMinStep = 0x1p-30;
    for (double alpha = 1.0; alpha >= kMinStep; alpha *= 0.5) {
        bool inside = true;
        for (int j = 1; j <= n && inside; ++j) {
            for (int i = 1; i <= n; ++i) {
                if (!(std::abs(phi(i, j) + alpha * dphi(i, j)) <= bound)) {
                    inside = false;
                    break;
                }
            }
        }
        if (inside) return alpha;
    }
    throw StepTooSmall("safeguard: step length fell below 2^-30");
}

StepResult chs_step(const CellField& phi_n, const PhysParams& params, double dt, double t,
                    const SolverSettings& settings, const CellField* initial_guess) {
    require_admissible(phi_n, "chs_step");
    const StepProblem problem(phi_n, params, dt, settings);

    CellField phi = initial_guess != nullptr ? fill_neumann_ghost(*initial_guess) : problem.phi_n();
    if (initial_guess != nullptr) require_admissible(phi, "chs_step initial guess");

    ResidualEval eval = problem.residual(phi);
    double res_inf = norm_inf(eval.r);
    StepDiagnostics diag;
    diag.residual_history.push_back(res_inf);

    int iter = 0;
    while (res_inf > settings.newton_tol) {
        if (iter >= settings.newton_max_iter) {
            std::ostringstream msg;
            msg << "chs_step: Newton did not converge in " << iter << " iterations, ||r||_inf = "
                << res_inf;
            throw NewtonDiverged(msg.str(), iter, res_inf);
        }
        ++iter;
        const Direction dir = problem.direction(phi, eval.r);
        diag.total_cg_iters += dir.cg_iterations;

        // Backtrack on ||r||_2 from the largest admissible step.
        const double res_l2 = norm(eval.r);
        double alpha = safeguard(phi, dir.dphi, settings);
        for (;;) {
            CellField trial = phi;
            trial.axpy(alpha, dir.dphi);
            ResidualEval trial_eval = problem.residual(trial);
            if (norm(trial_eval.r) <= (1.0 - 1e-4 * alpha) * res_l2) {
                phi = std::move(trial);
                eval = std::move(trial_eval);
                break;
            }
            alpha *= 0.5;
            if (alpha < 0x1p-30) {
                std::ostringstream msg;
                msg << "chs_step: line search failed at Newton iteration " << iter
                    << ", ||r||_inf = " << res_inf;
                throw NewtonDiverged(msg.str(), iter, res_inf);
            }
        }
        res_inf = norm_inf(eval.r);
        diag.residual_history.push_back(res_inf);
    }

    StepResult out{StepState{std::move(phi), std::move(eval.mu), std::move(eval.u),
                             std::move(eval.p), t + dt},
                   {}};
    const std::vector<double> history = std::move(diag.residual_history);
    const int cg_iters = diag.total_cg_iters;
    out.diagnostics = observe(out.state, params);
    out.diagnostics.dissipation_residual = dissipation_residual(problem.phi_n(), out.state, params, dt);
    out.diagnostics.newton_iters = iter;
    out.diagnostics.total_cg_iters = cg_iters;
    out.diagnostics.residual_history = history;
    return out;
}

}  // namespace chs
