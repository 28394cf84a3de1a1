#pragma once

#include "chs/grid.hpp"

#include <vector>

namespace chs {

/// Physical constants of the Cahn-Hilliard-Stokes system.
struct PhysParams {
    double epsilon = 0.0;  // interface width coefficient, must be set
    double theta0 = 3.0;   // expansive (concave) coefficient
    double gamma = 1.0;    // surface-tension coupling

    /// Throws std::invalid_argument unless all three are positive and finite.
    void validate() const;

    bool operator==(const PhysParams&) const = default;
};

struct TimeParams {
    double dt = 0.0;
    double t_final = 0.0;

    /// Smallest step count M with M * dt >= t_final (up to 1e-9 relative slack).
    long step_count() const;
    void validate() const;

    bool operator==(const TimeParams&) const = default;
};

struct StepState {
    CellField phi;
    CellField mu;
    MacVector u;
    CellField p;
    double t = 0.0;

    /// A state at rest: mu, u, p zero.
    static StepState at_rest(CellField phi, double t = 0.0);
};

struct StepDiagnostics {
    double t = 0.0;
    double energy = 0.0;
    double mass = 0.0;
    double max_phi = 0.0;
    double min_phi = 0.0;
    double separation = 0.0;  // min(1 - max_phi, 1 + min_phi)
    double dissipation_residual = 0.0;
    int newton_iters = 0;
    int total_cg_iters = 0;
    std::vector<double> residual_history;  // ||r||_inf per Newton iterate
};

}  // namespace chs
