#include "chs/cli_io.hpp"

#include "chs/errors.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>
#include <system_error>
#include <vector>

namespace chs {

const char* const kDiagnosticsHeader =
    "step,t,energy,mass,max_phi,min_phi,separation,dissipation_residual,newton_iters,cg_iters";

std::string format_roundtrip(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_full(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific, 16);
    return std::string(buf, res.ptr);
}

namespace {

using KeyValues = std::map<std::string, std::vector<std::string>>;

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "grid.n",           "grid.length",       "physics.epsilon",     "physics.theta0",
        "physics.gamma",    "time.dt",           "time.dt_over_h2",     "time.t_final",
        "solver.backend",   "solver.cg_rel_tol", "solver.cg_max_iter",  "solver.newton_tol",
        "solver.newton_max_iter", "solver.safeguard_delta", "initial.type", "initial.mean",
        "initial.amplitude", "initial.seed",     "output.directory",    "output.every",
        "output.times",     "output.formats",
    };
    return keys;
}

KeyValues read_items(const std::string& text) {
    std::istringstream in(text);
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigTOML().from_config(in);
    } catch (const CLI::Error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    KeyValues kv;
    for (const CLI::ConfigItem& item : items) {
        if (item.name == "++" || item.name == "--") continue;
        const std::string key = item.fullname();
        if (item.parents.empty()) {
            throw ConfigError("config: key '" + key + "' must live in a [section]");
        }
        if (known_keys().count(key) == 0) throw ConfigError("config: unknown key '" + key + "'");
        if (kv.count(key) != 0) throw ConfigError("config: duplicate key '" + key + "'");
        kv[key] = item.inputs;
    }
    return kv;
}

const std::string& single(const KeyValues& kv, const std::string& key) {
    const auto& v = kv.at(key);
    if (v.size() != 1) throw ConfigError(key + ": expected a single value");
    return v.front();
}

double parse_double(const std::string& key, const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ConfigError(key + ": '" + s + "' is not a number");
    }
    return v;
}

template <class Int>
Int parse_int(const std::string& key, const std::string& s) {
    Int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ConfigError(key + ": '" + s + "' is not an integer");
    }
    return v;
}

std::optional<double> get_double(const KeyValues& kv, const std::string& key) {
    if (kv.count(key) == 0) return std::nullopt;
    return parse_double(key, single(kv, key));
}

template <class Int>
std::optional<Int> get_int(const KeyValues& kv, const std::string& key) {
    if (kv.count(key) == 0) return std::nullopt;
    return parse_int<Int>(key, single(kv, key));
}

RunConfig build(const KeyValues& kv) {
    RunConfig cfg;

    const auto n = get_int<int>(kv, "grid.n");
    if (!n) throw ConfigError("grid.n: required");
    const double length = get_double(kv, "grid.length").value_or(1.0);
    try {
        cfg.grid = GridSpec(*n, length);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("grid: ") + e.what());
    }

    const auto eps = get_double(kv, "physics.epsilon");
    if (!eps) throw ConfigError("physics.epsilon: required");
    cfg.phys.epsilon = *eps;
    cfg.phys.theta0 = get_double(kv, "physics.theta0").value_or(3.0);
    cfg.phys.gamma = get_double(kv, "physics.gamma").value_or(1.0);

    const auto dt = get_double(kv, "time.dt");
    const auto dt_h2 = get_double(kv, "time.dt_over_h2");
    if (dt && dt_h2) throw ConfigError("time: give either dt or dt_over_h2, not both");
    if (!dt && !dt_h2) throw ConfigError("time.dt: required (or time.dt_over_h2)");
    const auto t_final = get_double(kv, "time.t_final");
    if (!t_final) throw ConfigError("time.t_final: required");
    cfg.time.t_final = *t_final;
    if (dt_h2) {
        cfg.dt_over_h2 = *dt_h2;
        cfg.time.dt = cfg.effective_dt();
    } else {
        cfg.time.dt = *dt;
    }

    if (kv.count("solver.backend")) {
        const std::string& b = single(kv, "solver.backend");
        if (b == "spectral") {
            cfg.solver.backend = SolverBackend::Spectral;
        } else if (b == "krylov") {
            cfg.solver.backend = SolverBackend::Krylov;
        } else {
            throw ConfigError("solver.backend: expected spectral or krylov, got '" + b + "'");
        }
    }
    if (auto v = get_double(kv, "solver.cg_rel_tol")) cfg.solver.cg_rel_tol = *v;
    if (auto v = get_int<int>(kv, "solver.cg_max_iter")) cfg.solver.cg_max_iter = *v;
    if (auto v = get_double(kv, "solver.newton_tol")) cfg.solver.newton_tol = *v;
    if (auto v = get_int<int>(kv, "solver.newton_max_iter")) cfg.solver.newton_max_iter = *v;
    if (auto v = get_double(kv, "solver.safeguard_delta")) cfg.solver.safeguard_delta = *v;

    if (kv.count("initial.type")) {
        cfg.initial.kind = initial_kind_from_string(single(kv, "initial.type"));
    }
    if (auto v = get_double(kv, "initial.mean")) cfg.initial.mean = *v;
    if (auto v = get_double(kv, "initial.amplitude")) cfg.initial.amplitude = *v;
    if (auto v = get_int<std::uint64_t>(kv, "initial.seed")) cfg.initial.seed = *v;

    if (kv.count("output.directory")) cfg.output.directory = single(kv, "output.directory");
    if (auto v = get_int<long>(kv, "output.every")) cfg.output.every_k_steps = *v;
    if (kv.count("output.times")) {
        for (const std::string& s : kv.at("output.times")) {
            cfg.output.times.push_back(parse_double("output.times", s));
        }
    }
    if (kv.count("output.formats")) {
        cfg.output.csv = false;
        cfg.output.vtk = false;
        for (const std::string& f : kv.at("output.formats")) {
            if (f == "csv") {
                cfg.output.csv = true;
            } else if (f == "vtk") {
                cfg.output.vtk = true;
            } else if (f != "none") {
                throw ConfigError("output.formats: unknown format '" + f + "'");
            }
        }
    }

    cfg.validate();
    return cfg;
}

void apply_overrides(KeyValues& kv, const ConfigOverrides& o) {
    if (o.grid) kv["grid.n"] = {std::to_string(*o.grid)};
    if (o.epsilon) kv["physics.epsilon"] = {format_roundtrip(*o.epsilon)};
    if (o.dt) {
        kv["time.dt"] = {format_roundtrip(*o.dt)};
        kv.erase("time.dt_over_h2");
    }
    if (o.t_final) kv["time.t_final"] = {format_roundtrip(*o.t_final)};
    if (o.seed) kv["initial.seed"] = {std::to_string(*o.seed)};
    if (o.initial) kv["initial.type"] = {*o.initial};
    if (o.out) kv["output.directory"] = {*o.out};
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const ConfigOverrides& overrides) {
    KeyValues kv = read_items(text);
    apply_overrides(kv, overrides);
    return build(kv);
}

RunConfig parse_config(const std::optional<std::string>& path, const ConfigOverrides& overrides) {
    std::string text;
    if (path) {
        std::ifstream in(*path);
        if (!in) throw ConfigError("config: cannot open '" + *path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    return parse_config_text(text, overrides);
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream out;
    out << "[grid]\n"
        << "n = " << c.grid.n() << "\n"
        << "length = " << format_roundtrip(c.grid.length()) << "\n\n";
    out << "[physics]\n"
        << "epsilon = " << format_roundtrip(c.phys.epsilon) << "\n"
        << "theta0 = " << format_roundtrip(c.phys.theta0) << "\n"
        << "gamma = " << format_roundtrip(c.phys.gamma) << "\n\n";
    out << "[time]\n";
    if (c.dt_over_h2) {
        out << "dt_over_h2 = " << format_roundtrip(*c.dt_over_h2) << "\n";
    } else {
        out << "dt = " << format_roundtrip(c.time.dt) << "\n";
    }
    out << "t_final = " << format_roundtrip(c.time.t_final) << "\n\n";
    out << "[solver]\n"
        << "backend = \"" << (c.solver.backend == SolverBackend::Spectral ? "spectral" : "krylov")
        << "\"\n"
        << "cg_rel_tol = " << format_roundtrip(c.solver.cg_rel_tol) << "\n"
        << "cg_max_iter = " << c.solver.cg_max_iter << "\n"
        << "newton_tol = " << format_roundtrip(c.solver.newton_tol) << "\n"
        << "newton_max_iter = " << c.solver.newton_max_iter << "\n"
        << "safeguard_delta = " << format_roundtrip(c.solver.safeguard_delta) << "\n\n";
    out << "[initial]\n"
        << "type = \"" << to_string(c.initial.kind) << "\"\n"
        << "mean = " << format_roundtrip(c.initial.mean) << "\n"
        << "amplitude = " << format_roundtrip(c.initial.amplitude) << "\n"
        << "seed = " << c.initial.seed << "\n\n";
    out << "[output]\n";
    if (!c.output.directory.empty()) out << "directory = \"" << c.output.directory << "\"\n";
    out << "every = " << c.output.every_k_steps << "\n";
    if (!c.output.times.empty()) {
        out << "times = [";
        for (std::size_t k = 0; k < c.output.times.size(); ++k) {
            out << (k ? ", " : "") << format_roundtrip(c.output.times[k]);
        }
        out << "]\n";
    }
    std::vector<std::string> formats;
    if (c.output.csv) formats.emplace_back("\"csv\"");
    if (c.output.vtk) formats.emplace_back("\"vtk\"");
    if (formats.empty()) formats.emplace_back("\"none\"");
    out << "formats = [";
    for (std::size_t k = 0; k < formats.size(); ++k) out << (k ? ", " : "") << formats[k];
    out << "]\n";
    return out.str();
}

namespace {

void ensure_parent_dir(const std::string& path) {
    const std::filesystem::path parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
}

std::ofstream open_for_write(const std::string& path) {
    ensure_parent_dir(path);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    return out;
}

}  // namespace

DiagnosticsCsvWriter::DiagnosticsCsvWriter(const std::string& path)
    : path_(path), out_(open_for_write(path)) {
    out_ << kDiagnosticsHeader << '\n';
    if (!out_) throw std::runtime_error("write failed: " + path_);
}

void DiagnosticsCsvWriter::write_row(long step, const StepDiagnostics& r) {
    out_ << step << ',' << format_full(r.t) << ',' << format_full(r.energy) << ','
         << format_full(r.mass) << ',' << format_full(r.max_phi) << ',' << format_full(r.min_phi)
         << ',' << format_full(r.separation) << ',' << format_full(r.dissipation_residual) << ','
         << r.newton_iters << ',' << r.total_cg_iters << '\n';
    if (!out_) throw std::runtime_error("write failed: " + path_);
}

void DiagnosticsCsvWriter::flush() {
    out_.flush();
    if (!out_) throw std::runtime_error("write failed: " + path_);
}

void write_diagnostics_csv(std::span<const StepDiagnostics> rows, const std::string& path) {
    DiagnosticsCsvWriter w(path);
    for (std::size_t k = 0; k < rows.size(); ++k) w.write_row(static_cast<long>(k), rows[k]);
    w.flush();
}

void write_vtk_snapshot(const CellField& phi, const std::string& path, double t) {
    std::ofstream out = open_for_write(path);
    const int n = phi.n();
    const std::string h = format_roundtrip(phi.grid().h());
    out << "# vtk DataFile Version 3.0\n"
        << "phi t=" << format_full(t) << "\n"
        << "ASCII\n"
        << "DATASET STRUCTURED_POINTS\n"
        << "DIMENSIONS " << n + 1 << ' ' << n + 1 << " 1\n"
        << "ORIGIN 0 0 0\n"
        << "SPACING " << h << ' ' << h << " 1\n"
        << "CELL_DATA " << n * n << "\n"
        << "SCALARS phi double 1\n"
        << "LOOKUP_TABLE default\n";
    for (int j = 1; j <= n; ++j) {
        for (int i = 1; i <= n; ++i) out << format_full(phi(i, j)) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace chs
