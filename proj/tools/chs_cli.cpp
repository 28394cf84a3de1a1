// chs_cli: run, converge and check front ends for the Cahn-Hilliard-Stokes solver.
//
//   chs_cli run --config run.ini --out results/
//   chs_cli run --grid 64 --epsilon 0.01 --dt 2e-5 --tfinal 0.01 --seed 7
//   chs_cli converge --grids 16,32,64,128
//   chs_cli check --grid 16
//
// Exit codes: 0 success, 1 usage/config/solver error, 2 invariant violation.

#include "chs/cli_io.hpp"
#include "chs/harness.hpp"
#include "chs/operators.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace {

constexpr int kExitError = 1;
constexpr int kExitInvariant = 2;

void print_nested(const std::exception& e, int depth = 0) {
    std::cerr << std::string(2 * depth, ' ') << e.what() << '\n';
    try {
        std::rethrow_if_nested(e);
    } catch (const std::exception& inner) {
        print_nested(inner, depth + 1);
    }
}

std::string snapshot_name(long step) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "phi_%08ld.vtk", step);
    return buf;
}

int cmd_run(const std::optional<std::string>& config_path, const chs::ConfigOverrides& overrides) {
    const chs::RunConfig cfg = chs::parse_config(config_path, overrides);
    const std::filesystem::path dir = cfg.output.directory;
    const bool writing = !cfg.output.directory.empty();

    std::optional<chs::DiagnosticsCsvWriter> csv;
    if (writing) {
        std::filesystem::create_directories(dir);
        std::ofstream(dir / "config.ini") << chs::serialize_config(cfg);
        if (cfg.output.csv) csv.emplace((dir / "diagnostics.csv").string());
    }

    const double dt = cfg.effective_dt();
    const long steps = chs::TimeParams{dt, cfg.time.t_final}.step_count();
    const std::vector<long> snaps = chs::snapshot_steps(cfg.output, dt, steps);
    auto next_snap = snaps.begin();

    std::cout << "grid " << cfg.grid.n() << "^2, dt " << chs::format_roundtrip(dt) << ", "
              << steps << " steps\n";

    auto observer = [&](long step, const chs::StepState& state, const chs::StepDiagnostics& row) {
        if (csv) csv->write_row(step, row);
        while (next_snap != snaps.end() && *next_snap < step) ++next_snap;
        if (next_snap != snaps.end() && *next_snap == step) {
            if (writing && cfg.output.vtk) {
                chs::write_vtk_snapshot(state.phi, (dir / snapshot_name(step)).string(), state.t);
            }
            ++next_snap;
        }
    };

    const chs::RunResult result = [&] {
        try {
            return chs::run_simulation(cfg, observer, false);
        } catch (...) {
            if (csv) csv->flush();
            throw;
        }
    }();
    if (csv) csv->flush();

    const chs::StepDiagnostics& first = result.diagnostics.front();
    const chs::StepDiagnostics& last = result.diagnostics.back();
    std::cout << "t = " << chs::format_roundtrip(last.t) << "\n"
              << "energy " << chs::format_full(first.energy) << " -> "
              << chs::format_full(last.energy) << "\n"
              << "mass drift " << chs::format_full(last.mass - first.mass) << "\n"
              << "phi in [" << chs::format_full(last.min_phi) << ", "
              << chs::format_full(last.max_phi) << "]\n";
    return 0;
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4E", v);
    return buf;
}

std::string rate(const std::optional<double>& r) {
    if (!r) return "-";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", *r);
    return buf;
}

int cmd_converge(chs::ConvergenceOptions options) {
    options.max_parallel = chs::thread_cap_from_env();
    options.on_grid_done = [](int n, const chs::RunResult& r) {
        std::cerr << "  grid " << n << " done, t = " << chs::format_roundtrip(r.final_state.t)
                  << '\n';
    };
    const std::vector<chs::ConvergenceRow> rows = chs::convergence_study(options);
    std::printf("%-10s %-12s %-8s %-12s %-8s\n", "grids", "L2 error", "rate", "Linf error",
                "rate");
    for (const chs::ConvergenceRow& row : rows) {
        const std::string pair = std::to_string(row.coarse_n) + "-" + std::to_string(row.fine_n);
        std::printf("%-10s %-12s %-8s %-12s %-8s\n", pair.c_str(), sci(row.l2_error).c_str(),
                    rate(row.l2_rate).c_str(), sci(row.linf_error).c_str(),
                    rate(row.linf_rate).c_str());
    }
    return 0;
}

// Short runs on a small grid; each line is one invariant.
int cmd_check(int n, double epsilon, long steps) {
    bool all_ok = true;
    auto report = [&](const std::string& name, bool ok, const std::string& detail) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << "  " << detail << '\n';
        all_ok = all_ok && ok;
    };

    for (double dt : {2e-5, 1e-3, 1e-1}) {
        chs::RunConfig cfg;
        cfg.grid = chs::GridSpec(n);
        cfg.phys.epsilon = epsilon;
        cfg.time.dt = dt;
        cfg.time.t_final = dt * static_cast<double>(steps);
        cfg.initial.kind = chs::InitialKind::Random;
        const std::string name = "random dt=" + chs::format_roundtrip(dt);
        try {
            double worst_ratio = 0.0;
            double worst_phi = 0.0;
            const chs::RunResult r = chs::run_simulation(
                cfg, [&](long, const chs::StepState&, const chs::StepDiagnostics& row) {
                    worst_ratio = std::max(
                        worst_ratio, row.dissipation_residual / chs::dissipation_tolerance(row.energy));
                    worst_phi = std::max({worst_phi, row.max_phi, -row.min_phi});
                });
            const double drift = chs::mass_drift(std::span<const chs::StepDiagnostics>(r.diagnostics));
            report(name + " positivity", worst_phi < 1.0, "max|phi| " + chs::format_full(worst_phi));
            report(name + " mass", drift <= 1e-11, "drift " + chs::format_full(drift));
            report(name + " dissipation", worst_ratio <= 1.0,
                   "worst residual/tolerance " + chs::format_full(worst_ratio));
        } catch (const chs::InvariantViolation& e) {
            report(name, false, e.what());
        }
    }

    for (double c : {-0.5, 0.0, 0.3}) {
        chs::RunConfig cfg;
        cfg.grid = chs::GridSpec(n);
        cfg.phys.epsilon = epsilon;
        cfg.time.dt = 1e-3;
        cfg.time.t_final = 1e-3 * static_cast<double>(steps);
        cfg.initial.kind = chs::InitialKind::Random;
        cfg.initial.mean = c;
        cfg.initial.amplitude = 0.0;
        const std::string name = "constant " + chs::format_roundtrip(c) + " fixed point";
        try {
            const chs::RunResult r = chs::run_simulation(cfg);
            chs::CellField diff = r.final_state.phi;
            diff -= chs::CellField(cfg.grid, c);
            const double dev = chs::max_abs(diff);
            const double speed = chs::norm(r.final_state.u);
            report(name, dev <= cfg.solver.newton_tol && speed == 0.0,
                   "max deviation " + chs::format_full(dev) + ", |u| " + chs::format_full(speed));
        } catch (const chs::InvariantViolation& e) {
            report(name, false, e.what());
        }
    }
    return all_ok ? 0 : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cahn-Hilliard-Stokes solver on a MAC grid"};
    app.require_subcommand(1);

    std::optional<std::string> config_path;
    chs::ConfigOverrides overrides;
    auto* run = app.add_subcommand("run", "single simulation");
    run->add_option("--config", config_path, "config file");
    run->add_option("--grid", overrides.grid, "cells per side")->check(CLI::PositiveNumber);
    run->add_option("--epsilon", overrides.epsilon, "interface parameter");
    run->add_option("--dt", overrides.dt, "time step");
    run->add_option("--tfinal", overrides.t_final, "final time");
    run->add_option("--seed", overrides.seed, "random seed");
    run->add_option("--initial", overrides.initial, "initial data")
        ->check(CLI::IsMember({"random", "trig", "convergence"}));
    run->add_option("--out", overrides.out, "output directory");

    chs::ConvergenceOptions conv;
    auto* converge = app.add_subcommand("converge", "grid refinement study");
    converge->add_option("--grids", conv.grids, "resolutions, each twice the previous")
        ->delimiter(',');
    converge->add_option("--epsilon", conv.phys.epsilon, "interface parameter")
        ->capture_default_str();
    converge->add_option("--tfinal", conv.t_final, "final time")->capture_default_str();
    converge->add_option("--dt-over-h2", conv.dt_over_h2, "dt / h^2")->capture_default_str();
    std::string conv_initial = "convergence";
    converge->add_option("--initial", conv_initial, "initial data")
        ->check(CLI::IsMember({"random", "trig", "convergence"}))
        ->capture_default_str();

    int check_n = 16;
    double check_eps = 0.05;
    long check_steps = 20;
    auto* check = app.add_subcommand("check", "invariant suite on a small grid");
    check->add_option("--grid", check_n, "cells per side")->capture_default_str();
    check->add_option("--epsilon", check_eps, "interface parameter")->capture_default_str();
    check->add_option("--steps", check_steps, "steps per run")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(config_path, overrides);
        if (*converge) {
            conv.initial.kind = chs::initial_kind_from_string(conv_initial);
            return cmd_converge(conv);
        }
        if (*check) return cmd_check(check_n, check_eps, check_steps);
    } catch (const chs::InvariantViolation& e) {
        std::cerr << "invariant violation: ";
        print_nested(e);
        return kExitInvariant;
    } catch (const std::exception& e) {
        std::cerr << "error: ";
        print_nested(e);
        return kExitError;
    }
    return kExitError;
}
