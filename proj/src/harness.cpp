#include "chs/harness.hpp"

#include "chs/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <future>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

namespace chs {

CellField initial_random(const GridSpec& grid, double mean, double amplitude, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    CellField phi(grid);
    const int n = grid.n();
    for (int j = 1; j <= n; ++j) {
        for (int i = 1; i <= n; ++i) {
            const double u = static_cast<double>(rng() >> 11) * 0x1p-53;
            phi(i, j) = mean + amplitude * (2.0 * u - 1.0);
        }
    }
    fill_neumann_ghost_inplace(phi);
    return phi;
}

CellField initial_trig(const GridSpec& grid) {
    using std::numbers::pi;
    CellField phi(grid);
    const int n = grid.n();
    for (int j = 1; j <= n; ++j) {
        const double y = grid.center(j);
        for (int i = 1; i <= n; ++i) {
            const double x = grid.center(i);
            phi(i, j) = 0.9 * ((1.0 - std::cos(4.0 * pi * x)) * (1.0 - std::cos(4.0 * pi * y)) / 2.0 - 1.0);
        }
    }
    fill_neumann_ghost_inplace(phi);
    return phi;
}

CellField initial_convergence(const GridSpec& grid) {
    using std::numbers::pi;
    CellField phi(grid);
    const int n = grid.n();
    for (int j = 1; j <= n; ++j) {
        const double y = grid.center(j);
        for (int i = 1; i <= n; ++i) {
            const double x = grid.center(i);
            phi(i, j) = 0.24 * std::cos(2.0 * pi * x) * std::cos(2.0 * pi * y) +
                        0.4 * std::cos(pi * x) * std::cos(3.0 * pi * y);
        }
    }
    fill_neumann_ghost_inplace(phi);
    return phi;
}

CellField make_initial(const GridSpec& grid, const InitialData& data) {
    switch (data.kind) {
        case InitialKind::Random: return initial_random(grid, data.mean, data.amplitude, data.seed);
        case InitialKind::Trig: return initial_trig(grid);
        case InitialKind::Convergence: return initial_convergence(grid);
    }
    return initial_random(grid, data.mean, data.amplitude, data.seed);
}

std::vector<long> snapshot_steps(const OutputSchedule& schedule, double dt, long step_count) {
    std::set<long> steps;
    if (schedule.every_k_steps > 0) {
        for (long s = 0; s <= step_count; s += schedule.every_k_steps) steps.insert(s);
    }
    for (double t : schedule.times) {
        const long s = std::lround(t / dt);
        if (s >= 0 && s <= step_count) steps.insert(s);
    }
    return {steps.begin(), steps.end()};
}

namespace {

constexpr double kMassDriftLimit = 1e-10;

void check_invariants(const StepDiagnostics& row, double mass0, long step) {
    std::ostringstream msg;
    if (!(row.max_phi < 1.0 && row.min_phi > -1.0)) {
        msg << "step " << step << ": positivity lost (min " << row.min_phi << ", max " << row.max_phi
            << ")";
        throw InvariantViolation(msg.str(), step);
    }
    if (std::abs(row.mass - mass0) > kMassDriftLimit) {
        msg << "step " << step << ": mass drift " << row.mass - mass0;
        throw InvariantViolation(msg.str(), step);
    }
    if (row.dissipation_residual > dissipation_tolerance(row.energy)) {
        msg << "step " << step << ": energy dissipation violated, residual "
            << row.dissipation_residual;
        throw InvariantViolation(msg.str(), step);
    }
}

}  // namespace

RunResult run_simulation(const RunConfig& config, const StepObserver& observer, bool retain_rows) {
    config.validate();
    const double dt = config.effective_dt();
    const long steps = TimeParams{dt, config.time.t_final}.step_count();
    const std::vector<long> snaps = snapshot_steps(config.output, dt, steps);
    auto next_snap = snaps.begin();

    CellField phi0 = make_initial(config.grid, config.initial);
    if (!(max_abs(phi0) < 1.0)) throw ConfigError("initial data is not admissible: max |phi| >= 1");

    RunResult result{StepState::at_rest(std::move(phi0)), {}, {}};
    StepDiagnostics row0 = observe(result.final_state, config.phys);
    const double mass0 = row0.mass;
    if (observer) observer(0, result.final_state, row0);
    result.diagnostics.push_back(std::move(row0));
    if (next_snap != snaps.end() && *next_snap == 0) {
        result.snapshots.push_back({0, 0.0, result.final_state.phi});
        ++next_snap;
    }

    for (long step = 1; step <= steps; ++step) {
        const double t = static_cast<double>(step - 1) * dt;
        StepResult sr = [&] {
            try {
                return chs_step(result.final_state.phi, config.phys, dt, t, config.solver);
            } catch (const Error& e) {
                std::ostringstream msg;
                msg << "step " << step << " (t = " << t << "): " << e.what();
                std::throw_with_nested(SimulationFailure(msg.str(), step));
            }
        }();
        sr.state.t = static_cast<double>(step) * dt;
        sr.diagnostics.t = sr.state.t;
        check_invariants(sr.diagnostics, mass0, step);

        result.final_state = std::move(sr.state);
        if (observer) observer(step, result.final_state, sr.diagnostics);
        if (retain_rows || step == steps) {
            result.diagnostics.push_back(std::move(sr.diagnostics));
        }
        if (next_snap != snaps.end() && *next_snap == step) {
            result.snapshots.push_back({step, result.final_state.t, result.final_state.phi});
            ++next_snap;
        }
    }
    return result;
}

CellField restrict_2to1(const CellField& fine) {
    const int nf = fine.n();
    if (nf % 2 != 0 || nf < 4) {
        throw ResolutionMismatch("restrict_2to1: fine grid must have an even n >= 4");
    }
    const GridSpec coarse_grid(nf / 2, fine.grid().length());
    CellField coarse(coarse_grid);
    const int nc = coarse_grid.n();
    for (int j = 1; j <= nc; ++j) {
        for (int i = 1; i <= nc; ++i) {
            coarse(i, j) = 0.25 * (fine(2 * i, 2 * j) + fine(2 * i - 1, 2 * j) +
                                   fine(2 * i, 2 * j - 1) + fine(2 * i - 1, 2 * j - 1));
        }
    }
    fill_neumann_ghost_inplace(coarse);
    return coarse;
}

std::vector<ConvergenceRow> convergence_rows(const std::vector<CellField>& finals) {
    std::vector<ConvergenceRow> rows;
    for (std::size_t k = 0; k + 1 < finals.size(); ++k) {
        const CellField& coarse = finals[k];
        const CellField& fine = finals[k + 1];
        if (fine.n() != 2 * coarse.n() || fine.grid().length() != coarse.grid().length()) {
            throw ResolutionMismatch("convergence_rows: grids must double at each level");
        }
        CellField err = coarse;
        err -= restrict_2to1(fine);
        ConvergenceRow row;
        row.coarse_n = coarse.n();
        row.fine_n = fine.n();
        row.l2_error = norm(err);
        row.linf_error = max_abs(err);
        if (!rows.empty()) {
            row.l2_rate = std::log2(rows.back().l2_error / row.l2_error);
            row.linf_rate = std::log2(rows.back().linf_error / row.linf_error);
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<ConvergenceRow> convergence_study(const ConvergenceOptions& options) {
    auto run_one = [&options](int n) {
        RunConfig cfg;
        cfg.grid = GridSpec(n);
        cfg.phys = options.phys;
        cfg.time.t_final = options.t_final;
        cfg.dt_over_h2 = options.dt_over_h2;
        cfg.time.dt = cfg.effective_dt();
        cfg.solver = options.solver;
        cfg.initial = options.initial;
        return run_simulation(cfg, {}, false);
    };

    std::vector<CellField> finals;
    const int width = std::max(1, options.max_parallel);
    for (std::size_t start = 0; start < options.grids.size(); start += width) {
        std::vector<std::future<RunResult>> batch;
        const std::size_t stop = std::min(options.grids.size(), start + width);
        for (std::size_t k = start; k < stop; ++k) {
            const int n = options.grids[k];
            batch.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred,
                                       run_one, n));
        }
        for (std::size_t k = start; k < stop; ++k) {
            RunResult r = batch[k - start].get();
            if (options.on_grid_done) options.on_grid_done(options.grids[k], r);
            finals.push_back(std::move(r.final_state.phi));
        }
    }
    return convergence_rows(finals);
}

int thread_cap_from_env() {
    const char* v = std::getenv("CHS_THREADS");
    if (v == nullptr) return 1;
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (end == v || n < 1) return 1;
    return static_cast<int>(std::min<long>(n, 256));
}

}  // namespace chs
