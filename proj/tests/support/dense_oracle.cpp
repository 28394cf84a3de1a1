#include "dense_oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace oracle {

Layout layout(const chs::GridSpec& grid) { return {grid.n(), grid.h()}; }

VectorXd cells_of(const chs::CellField& f) {
    const Layout L{f.n(), f.grid().h()};
    VectorXd v(L.cells());
    for (int j = 1; j <= L.n; ++j)
        for (int i = 1; i <= L.n; ++i) v(L.cell(i, j)) = f(i, j);
    return v;
}

chs::CellField cell_field(const chs::GridSpec& grid, const VectorXd& v) {
    const Layout L = layout(grid);
    chs::CellField f(grid);
    for (int j = 1; j <= L.n; ++j)
        for (int i = 1; i <= L.n; ++i) f(i, j) = v(L.cell(i, j));
    return f;
}

VectorXd all_faces_of(const chs::MacVector& v) {
    const Layout L{v.n(), v.grid().h()};
    VectorXd out(L.all_faces());
    for (int j = 1; j <= L.n; ++j)
        for (int a = 0; a <= L.n; ++a) out(L.all_x(a, j)) = v.x(a, j);
    for (int b = 0; b <= L.n; ++b)
        for (int i = 1; i <= L.n; ++i) out(L.all_y(i, b)) = v.y(i, b);
    return out;
}

VectorXd interior_faces_of(const chs::MacVector& v) {
    const Layout L{v.n(), v.grid().h()};
    VectorXd out(L.interior_faces());
    for (int j = 1; j <= L.n; ++j)
        for (int a = 1; a < L.n; ++a) out(L.int_x(a, j)) = v.x(a, j);
    for (int b = 1; b < L.n; ++b)
        for (int i = 1; i <= L.n; ++i) out(L.int_y(i, b)) = v.y(i, b);
    return out;
}

chs::MacVector mac_from_interior(const chs::GridSpec& grid, const VectorXd& v) {
    const Layout L = layout(grid);
    chs::MacVector m(grid);
    for (int j = 1; j <= L.n; ++j)
        for (int a = 1; a < L.n; ++a) m.x(a, j) = v(L.int_x(a, j));
    for (int b = 1; b < L.n; ++b)
        for (int i = 1; i <= L.n; ++i) m.y(i, b) = v(L.int_y(i, b));
    return m;
}

MatrixXd gradient_all(const Layout& L) {
    MatrixXd G = MatrixXd::Zero(L.all_faces(), L.cells());
    for (int j = 1; j <= L.n; ++j) {
        for (int a = 1; a < L.n; ++a) {
            G(L.all_x(a, j), L.cell(a + 1, j)) += 1.0 / L.h;
            G(L.all_x(a, j), L.cell(a, j)) -= 1.0 / L.h;
        }
    }
    for (int b = 1; b < L.n; ++b) {
        for (int i = 1; i <= L.n; ++i) {
            G(L.all_y(i, b), L.cell(i, b + 1)) += 1.0 / L.h;
            G(L.all_y(i, b), L.cell(i, b)) -= 1.0 / L.h;
        }
    }
    return G;
}

MatrixXd average_all(const Layout& L) {
    MatrixXd A = MatrixXd::Zero(L.all_faces(), L.cells());
    // Boundary faces average a cell with its reflected ghost, i.e. the cell itself.
    for (int j = 1; j <= L.n; ++j) {
        for (int a = 0; a <= L.n; ++a) {
            const int left = a == 0 ? 1 : a;
            const int right = a == L.n ? L.n : a + 1;
            A(L.all_x(a, j), L.cell(left, j)) += 0.5;
            A(L.all_x(a, j), L.cell(right, j)) += 0.5;
        }
    }
    for (int b = 0; b <= L.n; ++b) {
        for (int i = 1; i <= L.n; ++i) {
            const int below = b == 0 ? 1 : b;
            const int above = b == L.n ? L.n : b + 1;
            A(L.all_y(i, b), L.cell(i, below)) += 0.5;
            A(L.all_y(i, b), L.cell(i, above)) += 0.5;
        }
    }
    return A;
}

MatrixXd divergence_all(const Layout& L) {
    MatrixXd D = MatrixXd::Zero(L.cells(), L.all_faces());
    for (int j = 1; j <= L.n; ++j) {
        for (int i = 1; i <= L.n; ++i) {
            const int c = L.cell(i, j);
            D(c, L.all_x(i, j)) += 1.0 / L.h;
            D(c, L.all_x(i - 1, j)) -= 1.0 / L.h;
            D(c, L.all_y(i, j)) += 1.0 / L.h;
            D(c, L.all_y(i, j - 1)) -= 1.0 / L.h;
        }
    }
    return D;
}

namespace {

MatrixXd neumann_1d(int n, double h) {
    MatrixXd T = MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        if (k > 0) {
            T(k, k - 1) = 1.0;
            T(k, k) -= 1.0;
        }
        if (k + 1 < n) {
            T(k, k + 1) = 1.0;
            T(k, k) -= 1.0;
        }
    }
    return T / (h * h);
}

MatrixXd dirichlet_1d(int m, double h) {
    MatrixXd T = MatrixXd::Zero(m, m);
    for (int k = 0; k < m; ++k) {
        T(k, k) = -2.0;
        if (k > 0) T(k, k - 1) = 1.0;
        if (k + 1 < m) T(k, k + 1) = 1.0;
    }
    return T / (h * h);
}

// Kronecker sum for an (nx * ny) grid with x fastest.
MatrixXd kron_sum(const MatrixXd& Tx, const MatrixXd& Ty) {
    const int nx = static_cast<int>(Tx.rows());
    const int ny = static_cast<int>(Ty.rows());
    MatrixXd K = MatrixXd::Zero(nx * ny, nx * ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            for (int i2 = 0; i2 < nx; ++i2) K(j * nx + i, j * nx + i2) += Tx(i, i2);
            for (int j2 = 0; j2 < ny; ++j2) K(j * nx + i, j2 * nx + i) += Ty(j, j2);
        }
    return K;
}

}  // namespace

MatrixXd laplacian_cells(const Layout& L) {
    const MatrixXd T = neumann_1d(L.n, L.h);
    return kron_sum(T, T);
}

MatrixXd gradient_interior(const Layout& L) {
    MatrixXd G = MatrixXd::Zero(L.interior_faces(), L.cells());
    for (int j = 1; j <= L.n; ++j)
        for (int a = 1; a < L.n; ++a) {
            G(L.int_x(a, j), L.cell(a + 1, j)) = 1.0 / L.h;
            G(L.int_x(a, j), L.cell(a, j)) = -1.0 / L.h;
        }
    for (int b = 1; b < L.n; ++b)
        for (int i = 1; i <= L.n; ++i) {
            G(L.int_y(i, b), L.cell(i, b + 1)) = 1.0 / L.h;
            G(L.int_y(i, b), L.cell(i, b)) = -1.0 / L.h;
        }
    return G;
}

MatrixXd divergence_interior(const Layout& L) {
    MatrixXd D = MatrixXd::Zero(L.cells(), L.interior_faces());
    for (int j = 1; j <= L.n; ++j)
        for (int i = 1; i <= L.n; ++i) {
            const int c = L.cell(i, j);
            if (i < L.n) D(c, L.int_x(i, j)) += 1.0 / L.h;
            if (i > 1) D(c, L.int_x(i - 1, j)) -= 1.0 / L.h;
            if (j < L.n) D(c, L.int_y(i, j)) += 1.0 / L.h;
            if (j > 1) D(c, L.int_y(i, j - 1)) -= 1.0 / L.h;
        }
    return D;
}

MatrixXd laplacian_faces(const Layout& L) {
    const int half = (L.n - 1) * L.n;
    MatrixXd M = MatrixXd::Zero(2 * half, 2 * half);
    // x-faces: (n-1) unknowns along x with zero ends, n along y with mirrored ends.
    M.topLeftCorner(half, half) = kron_sum(dirichlet_1d(L.n - 1, L.h), neumann_1d(L.n, L.h));
    // y-faces: n along x mirrored, (n-1) along y with zero ends.
    M.bottomRightCorner(half, half) = kron_sum(neumann_1d(L.n, L.h), dirichlet_1d(L.n - 1, L.h));
    return M;
}

VectorXd cell_weights(const Layout& L) { return VectorXd::Constant(L.cells(), L.h * L.h); }

VectorXd all_face_weights(const Layout& L) {
    VectorXd w = VectorXd::Constant(L.all_faces(), L.h * L.h);
    for (int j = 1; j <= L.n; ++j) {
        w(L.all_x(0, j)) *= 0.5;
        w(L.all_x(L.n, j)) *= 0.5;
    }
    for (int i = 1; i <= L.n; ++i) {
        w(L.all_y(i, 0)) *= 0.5;
        w(L.all_y(i, L.n)) *= 0.5;
    }
    return w;
}

namespace {

MatrixXd average_interior(const Layout& L) {
    MatrixXd A = MatrixXd::Zero(L.interior_faces(), L.cells());
    for (int j = 1; j <= L.n; ++j)
        for (int a = 1; a < L.n; ++a) {
            A(L.int_x(a, j), L.cell(a, j)) = 0.5;
            A(L.int_x(a, j), L.cell(a + 1, j)) = 0.5;
        }
    for (int b = 1; b < L.n; ++b)
        for (int i = 1; i <= L.n; ++i) {
            A(L.int_y(i, b), L.cell(i, b)) = 0.5;
            A(L.int_y(i, b), L.cell(i, b + 1)) = 0.5;
        }
    return A;
}

}  // namespace

DenseStokes stokes_kkt(const Layout& L, const VectorXd& force) {
    const int U = L.interior_faces();
    const int C = L.cells();
    MatrixXd K = MatrixXd::Zero(U + C + 1, U + C + 1);
    K.topLeftCorner(U, U) = MatrixXd::Identity(U, U) - laplacian_faces(L);
    K.block(0, U, U, C) = gradient_interior(L);
    K.block(U, 0, C, U) = divergence_interior(L);
    K.block(U, U + C, C, 1).setOnes();
    K.block(U + C, U, 1, C).setOnes();
    VectorXd rhs = VectorXd::Zero(U + C + 1);
    rhs.head(U) = -force;
    const VectorXd z = K.fullPivLu().solve(rhs);
    return {z.head(U), z.segment(U, C)};
}

DenseStokes helmholtz_project(const Layout& L, const VectorXd& f) {
    const int C = L.cells();
    MatrixXd K = MatrixXd::Zero(C + 1, C + 1);
    K.topLeftCorner(C, C) = -laplacian_cells(L);
    K.block(0, C, C, 1).setOnes();
    K.block(C, 0, 1, C).setOnes();
    VectorXd rhs = VectorXd::Zero(C + 1);
    rhs.head(C) = divergence_interior(L) * f;
    const VectorXd z = K.fullPivLu().solve(rhs);
    const VectorXd p = z.head(C);
    return {f + gradient_interior(L) * p, p};
}

MatrixXd mobility_matrix(const Layout& L, const VectorXd& phi_n, double gamma, double dt) {
    const int C = L.cells();
    const VectorXd a_phi = average_interior(L) * phi_n;
    const MatrixXd G = gradient_interior(L);
    const MatrixXd D = divergence_interior(L);
    const MatrixXd lap = laplacian_cells(L);
    MatrixXd M(C, C);
    for (int k = 0; k < C; ++k) {
        const VectorXd mu = VectorXd::Unit(C, k);
        const VectorXd force = gamma * a_phi.cwiseProduct(G * mu);
        const VectorXd u = stokes_kkt(L, force).u;
        M.col(k) = dt * (D * a_phi.cwiseProduct(u)) - dt * (lap * mu);
    }
    return M;
}

VectorXd monolithic_residual(const Layout& L, const VectorXd& phi_n, const MonolithicParams& prm,
                             const VectorXd& phi, const VectorXd& mu, const VectorXd& u,
                             const VectorXd& p, double lambda) {
    const int C = L.cells();
    const int U = L.interior_faces();
    const VectorXd a_phi = average_interior(L) * phi_n;
    const MatrixXd lap = laplacian_cells(L);
    const MatrixXd G = gradient_interior(L);
    const MatrixXd D = divergence_interior(L);

    VectorXd R(3 * C + U + 1);
    R.segment(0, C) = phi - phi_n - prm.dt * (lap * mu) + prm.dt * (D * a_phi.cwiseProduct(u));
    VectorXd logs(C);
    for (int k = 0; k < C; ++k) logs(k) = std::log(1.0 + phi(k)) - std::log(1.0 - phi(k));
    R.segment(C, C) = mu - logs + prm.theta0 * phi_n + prm.epsilon * prm.epsilon * (lap * phi);
    R.segment(2 * C, U) = u - laplacian_faces(L) * u + G * p + prm.gamma * a_phi.cwiseProduct(G * mu);
    R.segment(2 * C + U, C) = D * u + VectorXd::Constant(C, lambda);
    R(3 * C + U) = p.sum();
    return R;
}

MonolithicSolution monolithic_step(const Layout& L, const VectorXd& phi_n,
                                   const MonolithicParams& prm) {
    const int C = L.cells();
    const int U = L.interior_faces();
    const int N = 3 * C + U + 1;
    const VectorXd a_phi = average_interior(L) * phi_n;
    const MatrixXd lap = laplacian_cells(L);
    const MatrixXd G = gradient_interior(L);
    const MatrixXd D = divergence_interior(L);
    const double eps2 = prm.epsilon * prm.epsilon;

    VectorXd z = VectorXd::Zero(N);
    z.segment(0, C) = phi_n;
    auto residual = [&](const VectorXd& w) {
        return monolithic_residual(L, phi_n, prm, w.segment(0, C), w.segment(C, C),
                                   w.segment(2 * C, U), w.segment(2 * C + U, C), w(N - 1));
    };
    auto admissible = [&](const VectorXd& w) {
        return w.segment(0, C).cwiseAbs().maxCoeff() < 1.0;
    };

    MatrixXd J = MatrixXd::Zero(N, N);
    J.block(0, C, C, C) = -prm.dt * lap;
    J.block(0, 2 * C, C, U) = prm.dt * D * a_phi.asDiagonal();
    J.block(C, C, C, C).setIdentity();
    J.block(2 * C, C, U, C) = prm.gamma * a_phi.asDiagonal() * G;
    J.block(2 * C, 2 * C, U, U) = MatrixXd::Identity(U, U) - laplacian_faces(L);
    J.block(2 * C, 2 * C + U, U, C) = G;
    J.block(2 * C + U, 2 * C, C, U) = D;
    J.block(2 * C + U, N - 1, C, 1).setOnes();
    J.block(N - 1, 2 * C + U, 1, C).setOnes();
    J.block(0, 0, C, C).setIdentity();

    MonolithicSolution out;
    VectorXd R = residual(z);
    for (int it = 0; it < 100; ++it) {
        if (R.lpNorm<Eigen::Infinity>() < 1e-14) break;
        VectorXd d(C);
        for (int k = 0; k < C; ++k) d(k) = 1.0 / (1.0 + z(k)) + 1.0 / (1.0 - z(k));
        J.block(C, 0, C, C) = -MatrixXd(d.asDiagonal()) + eps2 * lap;
        const VectorXd step = J.fullPivLu().solve(-R);
        double alpha = 1.0;
        VectorXd trial = z + step;
        VectorXd Rt;
        bool accepted = false;
        while (alpha >= 1e-12) {
            if (admissible(trial)) {
                Rt = residual(trial);
                if (Rt.norm() < (1.0 - 1e-4 * alpha) * R.norm()) {
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
            trial = z + alpha * step;
        }
        if (!accepted) {
            // Rounding floor reached.
            if (R.lpNorm<Eigen::Infinity>() < 1e-11) break;
            throw std::runtime_error("monolithic_step: line search failed");
        }
        z = trial;
        R = Rt;
        out.iterations = it + 1;
    }
    out.phi = z.segment(0, C);
    out.mu = z.segment(C, C);
    out.u = z.segment(2 * C, U);
    out.p = z.segment(2 * C + U, C);
    out.residual = R.lpNorm<Eigen::Infinity>();
    return out;
}

}  // namespace oracle
