#pragma once

#include "chs/config.hpp"
#include "chs/errors.hpp"
#include "chs/scheme.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace chs {

/// phi = mean + amplitude * r with r uniform in [-1, 1]. r comes from
/// std::mt19937_64 seeded with `seed`, mapped as (2 (x >> 11) 2^-53 - 1) in
/// x-fastest cell order, so fields are reproducible across platforms.
CellField initial_random(const GridSpec& grid, double mean = 0.2, double amplitude = 0.02,
                         std::uint64_t seed = 1);

/// 0.9 ((1 - cos 4 pi x)(1 - cos 4 pi y) / 2 - 1) at cell centers.
CellField initial_trig(const GridSpec& grid);

/// 0.24 cos(2 pi x) cos(2 pi y) + 0.4 cos(pi x) cos(3 pi y) at cell centers.
CellField initial_convergence(const GridSpec& grid);

CellField make_initial(const GridSpec& grid, const InitialData& data);

struct Snapshot {
    long step = 0;
    double t = 0.0;
    CellField phi;
};

struct RunResult {
    StepState final_state;
    std::vector<StepDiagnostics> diagnostics;  // row 0 is the initial state
    std::vector<Snapshot> snapshots;
};

/// Called after every accepted step (and once for step 0).
using StepObserver = std::function<void(long step, const StepState&, const StepDiagnostics&)>;

/// Step indices at which snapshots are taken, sorted and unique.
std::vector<long> snapshot_steps(const OutputSchedule& schedule, double dt, long step_count);

/// Runs from t = 0 to t_final. Aborts with SimulationFailure (the scheme error
/// nested inside) or InvariantViolation on loss of positivity, mass drift above
/// 1e-10, or a dissipation residual above 1e-8 max(1, |F|). With retain_rows
/// false only the initial and final diagnostics rows are kept (long runs
/// stream rows through the observer instead).
RunResult run_simulation(const RunConfig& config, const StepObserver& observer = {},
                         bool retain_rows = true);

/// Wraps a scheme error with the failing step index.
class SimulationFailure : public Error {
public:
    SimulationFailure(const std::string& what, long step) : Error(what), step_(step) {}
    long step() const noexcept { return step_; }

private:
    long step_;
};

/// Coarse-grid field of 2x2 child averages. Throws ResolutionMismatch unless
/// fine has exactly twice the coarse resolution over the same domain.
CellField restrict_2to1(const CellField& fine);

struct ConvergenceRow {
    int coarse_n = 0;
    int fine_n = 0;
    double l2_error = 0.0;
    double linf_error = 0.0;
    std::optional<double> l2_rate;  // log2(previous / this); absent on the first row
    std::optional<double> linf_rate;
};

/// Errors between consecutive resolutions, e = phi_coarse - restrict(phi_fine),
/// with rates from consecutive rows.
std::vector<ConvergenceRow> convergence_rows(const std::vector<CellField>& finals);

struct ConvergenceOptions {
    std::vector<int> grids{16, 32, 64, 128};
    double t_final = 0.02;
    double dt_over_h2 = 0.02;
    PhysParams phys{0.05, 3.0, 1.0};
    SolverSettings solver;
    InitialData initial{InitialKind::Convergence};
    int max_parallel = 1;  // concurrent grid runs
    std::function<void(int n, const RunResult&)> on_grid_done;
};

/// Runs `initial` (by default the convergence initial data) on each grid with dt = dt_over_h2 h^2 and
/// tabulates coarse-fine errors.
std::vector<ConvergenceRow> convergence_study(const ConvergenceOptions& options);

/// Reads CHS_THREADS (default 1, minimum 1).
int thread_cap_from_env();

}  // namespace chs
