#include "chs/linsolve.hpp"

#include "chs/errors.hpp"
#include "chs/operators.hpp"
#include "fast_transforms.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace chs {

namespace {

double dot(const CellField& a, const CellField& b) { return inner_cell(a, b); }
double dot(const MacVector& a, const MacVector& b) { return inner_face(a, b); }

// Preconditioned CG shared by the cell and face entry points. `project` maps a
// field onto the admissible subspace (identity or mean removal).
template <class Field, class Apply, class Precond, class Project>
CgResult<Field> pcg(const Apply& apply, const Field& rhs_in, const SolverSettings& settings,
                    const Precond& precondition, const Project& project, const char* name) {
    Field rhs = project(rhs_in);
    const double rhs_norm = std::sqrt(std::max(0.0, dot(rhs, rhs)));
    CgResult<Field> out{Field(rhs.grid()), 0, 0.0};
    if (rhs_norm == 0.0) return out;

    const double tol = settings.cg_rel_tol * rhs_norm;
    const int max_iter = settings.max_iter_for(rhs.grid().n());

    Field& x = out.solution;
    Field r = rhs;
    Field z = project(precondition(r));
    Field p = z;
    double rz = dot(r, z);
    double res = rhs_norm;

    for (int it = 0; it < max_iter; ++it) {
        if (res <= tol) {
            out.iterations = it;
            out.relative_residual = res / rhs_norm;
            return out;
        }
        Field ap = project(apply(p));
        const double curvature = dot(p, ap);
        if (!(curvature > 0.0)) {
            std::ostringstream msg;
            msg << name << ": breakdown (p.Ap = " << curvature << ") at iteration " << it
                << ", relative residual " << res / rhs_norm;
            throw MaxIterExceeded(msg.str(), it, res / rhs_norm);
        }
        const double alpha = rz / curvature;
        x.axpy(alpha, p);
        r.axpy(-alpha, ap);
        res = std::sqrt(std::max(0.0, dot(r, r)));
        z = project(precondition(r));
        const double rz_next = dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        p *= beta;
        p += z;
        // Re-project to stop drift of the nullspace component.
        x = project(x);
        p = project(p);
    }
    if (res <= tol) {
        out.iterations = max_iter;
        out.relative_residual = res / rhs_norm;
        return out;
    }
    std::ostringstream msg;
    msg << name << ": no convergence in " << max_iter << " iterations, relative residual "
        << res / rhs_norm;
    throw MaxIterExceeded(msg.str(), max_iter, res / rhs_norm);
}

CellField interior_mean_free(const CellField& f) { return subtract_mean(f); }

}  // namespace

CgResult<CellField> cg_solve(const CellOperator& apply, const CellField& rhs,
                             const SolverSettings& settings, bool project_mean_zero,
                             const CellOperator& preconditioner) {
    if (project_mean_zero) {
        const double m = mean(rhs);
        const double rn = norm(rhs);
        if (std::abs(m) > 1e-10 * rn) {
            std::ostringstream msg;
            msg << "cg_solve: rhs mean " << m << " is incompatible with a mean-zero solve";
            throw IncompatibleRhs(msg.str());
        }
    }
    auto identity = [](const CellField& f) { return f; };
    auto project = [project_mean_zero](const CellField& f) {
        return project_mean_zero ? interior_mean_free(f) : f;
    };
    if (preconditioner) {
        return pcg<CellField>(apply, rhs, settings, preconditioner, project, "cg_solve");
    }
    return pcg<CellField>(apply, rhs, settings, identity, project, "cg_solve");
}

CgResult<MacVector> cg_solve_face(const FaceOperator& apply, const MacVector& rhs,
                                  const SolverSettings& settings) {
    auto identity = [](const MacVector& f) { return f; };
    auto project = [](const MacVector& f) { return fill_no_penetration(f); };
    CgResult<MacVector> out = pcg<MacVector>(apply, rhs, settings, identity, project,
                                             "cg_solve_face");
    fill_velocity_inplace(out.solution);
    return out;
}

CellField apply_neg_laplacian(const CellField& phi) {
    CellField lap = laplacian_cell(fill_neumann_ghost(phi));
    lap *= -1.0;
    return lap;
}

MacVector apply_face_helmholtz(const MacVector& v) {
    MacVector filled = v;
    fill_velocity_inplace(filled);
    MacVector out = filled;
    out -= laplacian_face(filled);
    fill_no_penetration_inplace(out);
    return out;
}

double laplacian_eigenvalue_1d(int k, int n, double h) {
    const double s = std::sin(std::numbers::pi * k / (2.0 * n));
    return 4.0 * s * s / (h * h);
}

CellField apply_cell_symbol(const CellField& phi, const std::function<double(double)>& symbol) {
    const int n = phi.n();
    const double h = phi.grid().h();
    const auto& tr = detail::transforms_for(n);
    detail::FftwBuffer buf(static_cast<std::size_t>(n) * n);
    for (int j = 1; j <= n; ++j)
        for (int i = 1; i <= n; ++i) buf[(j - 1) * n + (i - 1)] = phi(i, j);
    tr.cell_forward(buf.data());
    std::vector<double> lam(n);
    for (int k = 0; k < n; ++k) lam[k] = laplacian_eigenvalue_1d(k, n, h);
    const double scale = 1.0 / tr.normalization();
    for (int ky = 0; ky < n; ++ky)
        for (int kx = 0; kx < n; ++kx) buf[ky * n + kx] *= symbol(lam[kx] + lam[ky]) * scale;
    tr.cell_inverse(buf.data());
    CellField out(phi.grid());
    for (int j = 1; j <= n; ++j)
        for (int i = 1; i <= n; ++i) out(i, j) = buf[(j - 1) * n + (i - 1)];
    fill_neumann_ghost_inplace(out);
    return out;
}

namespace {

CellField spectral_inv_neg_laplacian(const CellField& phi) {
    return apply_cell_symbol(phi, [](double lam) { return lam > 0.0 ? 1.0 / lam : 0.0; });
}

MacVector spectral_face_helmholtz(const MacVector& rhs) {
    const int n = rhs.n();
    const int m = n - 1;
    const double h = rhs.grid().h();
    const auto& tr = detail::transforms_for(n);
    std::vector<double> lam(n);
    for (int k = 0; k < n; ++k) lam[k] = laplacian_eigenvalue_1d(k, n, h);
    const double scale = 1.0 / tr.normalization();
    MacVector u(rhs.grid());
    detail::FftwBuffer buf(static_cast<std::size_t>(n) * m);

    // x-component: unknowns at a = 1..n-1 (sine index k = a), j = 1..n (cosine index).
    for (int j = 1; j <= n; ++j)
        for (int a = 1; a < n; ++a) buf[(j - 1) * m + (a - 1)] = rhs.x(a, j);
    tr.facex_forward(buf.data());
    for (int ky = 0; ky < n; ++ky)
        for (int kx = 1; kx < n; ++kx) buf[ky * m + (kx - 1)] *= scale / (1.0 + lam[kx] + lam[ky]);
    tr.facex_inverse(buf.data());
    for (int j = 1; j <= n; ++j)
        for (int a = 1; a < n; ++a) u.x(a, j) = buf[(j - 1) * m + (a - 1)];

    // y-component, transposed roles.
    for (int b = 1; b < n; ++b)
        for (int i = 1; i <= n; ++i) buf[(b - 1) * n + (i - 1)] = rhs.y(i, b);
    tr.facey_forward(buf.data());
    for (int ky = 1; ky < n; ++ky)
        for (int kx = 0; kx < n; ++kx) buf[(ky - 1) * n + kx] *= scale / (1.0 + lam[kx] + lam[ky]);
    tr.facey_inverse(buf.data());
    for (int b = 1; b < n; ++b)
        for (int i = 1; i <= n; ++i) u.y(i, b) = buf[(b - 1) * n + (i - 1)];

    fill_velocity_inplace(u);
    return u;
}

}  // namespace

CellField inv_neg_laplacian(const CellField& phi, const SolverSettings& settings) {
    if (settings.backend == SolverBackend::Spectral) {
        const double m = mean(phi);
        if (std::abs(m) > 1e-10 * norm(phi)) {
            std::ostringstream msg;
            msg << "inv_neg_laplacian: rhs mean " << m << " is not zero";
            throw IncompatibleRhs(msg.str());
        }
        return spectral_inv_neg_laplacian(phi);
    }
    CellField x = cg_solve(apply_neg_laplacian, phi, settings, true).solution;
    fill_neumann_ghost_inplace(x);
    return x;
}

MacVector solve_face_helmholtz(const MacVector& rhs, const SolverSettings& settings) {
    if (settings.backend == SolverBackend::Spectral) return spectral_face_helmholtz(rhs);
    return cg_solve_face(apply_face_helmholtz, rhs, settings).solution;
}

}  // namespace chs
