#pragma once

#include "chs/grid.hpp"
#include "chs/settings.hpp"
#include "chs/state.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace chs {

enum class InitialKind { Random, Trig, Convergence };

struct InitialData {
    InitialKind kind = InitialKind::Random;
    // Random only: phi = mean + amplitude * r, r uniform in [-1, 1].
    double mean = 0.2;
    double amplitude = 0.02;
    std::uint64_t seed = 1;

    bool operator==(const InitialData&) const = default;
};

struct OutputSchedule {
    long every_k_steps = 0;     // 0 disables the periodic schedule
    std::vector<double> times;  // explicit snapshot times, rounded to the nearest step
    std::string directory;      // empty: nothing is written
    bool csv = true;
    bool vtk = false;

    bool operator==(const OutputSchedule&) const = default;
};

struct RunConfig {
    GridSpec grid{64};
    PhysParams phys;
    TimeParams time;
    // Refinement-path mode: dt = dt_over_h2 * h^2 (time.dt is derived from it).
    std::optional<double> dt_over_h2;
    SolverSettings solver;
    InitialData initial;
    OutputSchedule output;

    /// Throws ConfigError naming the offending field.
    void validate() const;

    /// dt_over_h2 * h^2 in refinement-path mode, else time.dt.
    double effective_dt() const;

    bool operator==(const RunConfig&) const = default;
};

std::string to_string(InitialKind kind);
InitialKind initial_kind_from_string(const std::string& name);

}  // namespace chs
