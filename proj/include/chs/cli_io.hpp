#pragma once

// Configuration files, CSV diagnostics and legacy-VTK snapshots.
//
// Config files are INI/TOML-style:
//
//   [grid]     n, length
//   [physics]  epsilon (required), theta0 = 3, gamma = 1
//   [time]     dt or dt_over_h2 (one required), t_final (required)
//   [solver]   backend = spectral|krylov, cg_rel_tol, cg_max_iter,
//              newton_tol, newton_max_iter, safeguard_delta
//   [initial]  type = random|trig|convergence, mean, amplitude, seed
//   [output]   directory, every, times = [t1, t2, ...], formats = csv,vtk
//
// Unknown sections or keys are errors.

#include "chs/config.hpp"
#include "chs/state.hpp"

#include <cstdint>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>

namespace chs {

/// Command-line values that take precedence over the file.
struct ConfigOverrides {
    std::optional<int> grid;
    std::optional<double> epsilon;
    std::optional<double> dt;
    std::optional<double> t_final;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> initial;
    std::optional<std::string> out;
};

/// Parses config text, applies overrides, fills defaults and validates.
/// Throws ConfigError naming the offending key.
RunConfig parse_config_text(const std::string& text, const ConfigOverrides& overrides = {});

/// As parse_config_text, reading from `path` when given.
RunConfig parse_config(const std::optional<std::string>& path,
                       const ConfigOverrides& overrides = {});

/// Config text that parses back to an equal RunConfig.
std::string serialize_config(const RunConfig& config);

/// Column header of the diagnostics CSV, without newline.
extern const char* const kDiagnosticsHeader;

/// Streams diagnostics rows; the header is written on construction.
class DiagnosticsCsvWriter {
public:
    explicit DiagnosticsCsvWriter(const std::string& path);
    void write_row(long step, const StepDiagnostics& row);
    void flush();

private:
    std::string path_;
    std::ofstream out_;
};

/// Writes the header plus one row per entry; row k is labelled step k.
void write_diagnostics_csv(std::span<const StepDiagnostics> rows, const std::string& path);

/// Legacy-VTK STRUCTURED_POINTS file with one CELL_DATA scalar `phi`, x fastest.
void write_vtk_snapshot(const CellField& phi, const std::string& path, double t);

/// Shortest decimal text that reads back to the same double.
std::string format_roundtrip(double v);

/// 17 significant digits in scientific notation.
std::string format_full(double v);

}  // namespace chs
