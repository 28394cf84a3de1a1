#pragma once

namespace chs {

/// How the constant-coefficient subproblems (Neumann Poisson, face Helmholtz)
/// are solved. Both give the same answer to solver tolerance.
enum class SolverBackend {
    Spectral,  // exact DCT/DST diagonalization
    Krylov,    // matrix-free conjugate gradient
};

struct SolverSettings {
    double cg_rel_tol = 1e-10;
    int cg_max_iter = 0;  // 0 means 10 * n^2 for the grid being solved
    double newton_tol = 1e-8;
    int newton_max_iter = 50;
    double safeguard_delta = 1e-9;
    SolverBackend backend = SolverBackend::Spectral;

    int max_iter_for(int n) const noexcept { return cg_max_iter > 0 ? cg_max_iter : 10 * n * n; }

    /// Throws std::invalid_argument on a non-positive tolerance or iteration cap.
    void validate() const;

    bool operator==(const SolverSettings&) const = default;
};

}  // namespace chs
