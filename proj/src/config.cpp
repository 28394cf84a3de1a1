#include "chs/config.hpp"

#include "chs/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace chs {

std::string to_string(InitialKind kind) {
    switch (kind) {
        case InitialKind::Random: return "random";
        case InitialKind::Trig: return "trig";
        case InitialKind::Convergence: return "convergence";
    }
    return "random";
}

InitialKind initial_kind_from_string(const std::string& name) {
    if (name == "random") return InitialKind::Random;
    if (name == "trig") return InitialKind::Trig;
    if (name == "convergence") return InitialKind::Convergence;
    throw ConfigError("initial.type: unknown initial data '" + name +
                      "' (expected random, trig or convergence)");
}

double RunConfig::effective_dt() const {
    if (dt_over_h2) return *dt_over_h2 * grid.h() * grid.h();
    return time.dt;
}

void RunConfig::validate() const {
    try {
        phys.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("physics: ") + e.what());
    }
    if (dt_over_h2) {
        if (!(std::isfinite(*dt_over_h2) && *dt_over_h2 > 0.0)) {
            throw ConfigError("time.dt_over_h2: must be > 0");
        }
    } else if (!(std::isfinite(time.dt) && time.dt > 0.0)) {
        throw ConfigError("time.dt: time step must be > 0");
    }
    if (!(std::isfinite(time.t_final) && time.t_final >= 0.0)) {
        throw ConfigError("time.t_final: must be >= 0");
    }
    try {
        solver.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("solver: ") + e.what());
    }
    if (initial.kind == InitialKind::Random) {
        if (!(initial.amplitude >= 0.0)) throw ConfigError("initial.amplitude: must be >= 0");
        if (!(std::abs(initial.mean) + initial.amplitude < 1.0)) {
            throw ConfigError("initial: |mean| + amplitude must be < 1 for admissible data");
        }
    }
    if (output.every_k_steps < 0) throw ConfigError("output.every: must be >= 0");
    for (double t : output.times) {
        if (!(t >= 0.0)) throw ConfigError("output.times: snapshot times must be >= 0");
    }
}

}  // namespace chs
