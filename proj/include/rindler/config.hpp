#pragma once

// Flat key-value configuration with dotted sections:
//
//   # comment
//   model.coupling = 0.01
//   model.mode.1.omega = 1.33
//
// Later assignments win, command-line --set pairs win over the file, and a
// preset (key `preset`) supplies defaults under both. All frequencies are in
// units of the declared reference Omega_ref. Unknown keys are rejected by
// name; physical validation failures name the violated inequality.

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rindler/errors.hpp"
#include "rindler/hamiltonian.hpp"
#include "rindler/landau_zener.hpp"

namespace rindler::cli {

enum class Mode { evolve, sweep, lz, hardware, convergence };

inline Mode mode_from_string(const std::string& name) {
    if (name == "evolve") return Mode::evolve;
    if (name == "sweep") return Mode::sweep;
    if (name == "lz") return Mode::lz;
    if (name == "hardware") return Mode::hardware;
    if (name == "convergence") return Mode::convergence;
    throw ConfigError("unknown mode '" + name +
                      "' (expected evolve, sweep, lz, hardware or convergence)");
}

inline const char* to_string(Mode mode) {
    switch (mode) {
        case Mode::evolve: return "evolve";
        case Mode::sweep: return "sweep";
        case Mode::lz: return "lz";
        case Mode::hardware: return "hardware";
        default: return "convergence";
    }
}

namespace detail {

inline std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream stream(s);
    while (std::getline(stream, item, sep)) parts.push_back(trim(item));
    return parts;
}

inline bool is_positive_int(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// Whitelist patterns; '#' matches a positive integer segment.
inline const std::vector<std::string>& known_key_patterns() {
    static const std::vector<std::string> patterns = {
        "preset",
        "units.omega_ref",
        "model.gap",
        "model.detectors",
        "model.detector.#.gap",
        "model.modes",
        "model.n_max",
        "model.mode.#.omega",
        "model.mode.#.n_max",
        "model.mode.#.phase_offset",
        "model.coupling",
        "model.coupling.#.#",
        "model.rwa_diagnostic",
        "worldline.type",
        "worldline.alpha",
        "worldline.velocity",
        "worldline.x0",
        "worldline.file",
        "initial.detector.#",
        "initial.mode.#",
        "integrator.method",
        "integrator.dt",
        "integrator.steps_per_period",
        "integrator.record_stride",
        "integrator.norm_tolerance",
        "evolve.tau0",
        "evolve.tau1",
        "sweep.alphas",
        "sweep.workers",
        "convergence.truncations",
        "hardware.branch",
        "hardware.unit",
        "hardware.target.g",
        "hardware.target.gap",
        "hardware.target.alpha",
        "hardware.target.omega0",
        "hardware.ion.n_ions",
        "hardware.ion.mode_freqs",
        "hardware.ion.lamb_dicke",
        "hardware.cqed.n_qubits",
        "hardware.cqed.qubit_energy",
        "hardware.cqed.cavity_freq",
        "hardware.cqed.bare_coupling",
        "hardware.schedule.tau1",
        "hardware.schedule.samples",
    };
    return patterns;
}

inline bool matches_pattern(const std::string& key, const std::string& pattern) {
    const auto key_parts = split(key, '.');
    const auto pattern_parts = split(pattern, '.');
    if (key_parts.size() != pattern_parts.size()) return false;
    for (std::size_t i = 0; i < key_parts.size(); ++i) {
        if (pattern_parts[i] == "#") {
            if (!is_positive_int(key_parts[i])) return false;
        } else if (pattern_parts[i] != key_parts[i]) {
            return false;
        }
    }
    return true;
}

inline bool is_known_key(const std::string& key) {
    for (const auto& pattern : known_key_patterns())
        if (matches_pattern(key, pattern)) return true;
    return false;
}

} // namespace detail

// Raw key-value store with default tracking: everything read (including
// applied defaults) lands in resolved() for the provenance header.
class ConfigMap {
public:
    void set(const std::string& key, const std::string& value) {
        if (!detail::is_known_key(key)) throw ConfigError("unknown config key '" + key + "'");
        raw_[key] = detail::trim(value);
    }

    void load_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open config file '" + path + "'");
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = detail::trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config file '" + path + "' line " + std::to_string(lineno) +
                                  ": expected 'key = value'");
            set(detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
        }
    }

    bool has(const std::string& key) const { return raw_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& fallback) {
        const auto it = raw_.find(key);
        const std::string value = it == raw_.end() ? fallback : it->second;
        resolved_[key] = value;
        return value;
    }

    std::string require_string(const std::string& key) {
        const auto it = raw_.find(key);
        if (it == raw_.end()) throw ConfigError("missing required config key '" + key + "'");
        resolved_[key] = it->second;
        return it->second;
    }

    double get_double(const std::string& key, double fallback) {
        if (!has(key)) {
            resolved_[key] = format_number(fallback);
            return fallback;
        }
        return parse_double(key, require_string(key));
    }

    double require_double(const std::string& key) { return parse_double(key, require_string(key)); }

    int get_int(const std::string& key, int fallback) {
        if (!has(key)) {
            resolved_[key] = std::to_string(fallback);
            return fallback;
        }
        const std::string value = require_string(key);
        try {
            std::size_t pos = 0;
            const int parsed = std::stoi(value, &pos);
            if (pos != value.size()) throw std::invalid_argument("trailing characters");
            return parsed;
        } catch (const std::exception&) {
            throw ConfigError("config key '" + key + "': cannot parse integer from '" + value + "'");
        }
    }

    bool get_bool(const std::string& key, bool fallback) {
        if (!has(key)) {
            resolved_[key] = fallback ? "true" : "false";
            return fallback;
        }
        const std::string value = require_string(key);
        if (value == "true" || value == "1") return true;
        if (value == "false" || value == "0") return false;
        throw ConfigError("config key '" + key + "': expected true/false, got '" + value + "'");
    }

    std::vector<double> get_double_list(const std::string& key, const std::string& fallback) {
        const std::string value = get_string(key, fallback);
        std::vector<double> values;
        for (const auto& item : detail::split(value, ','))
            if (!item.empty()) values.push_back(parse_double(key, item));
        return values;
    }

    std::vector<int> get_int_list(const std::string& key, const std::string& fallback) {
        const std::string value = get_string(key, fallback);
        std::vector<int> values;
        for (const auto& item : detail::split(value, ','))
            if (!item.empty()) values.push_back(static_cast<int>(parse_double(key, item)));
        return values;
    }

    // Missing-key sweep so "empty config" errors list everything at once.
    void require_all(const std::vector<std::string>& keys) const {
        std::string missing;
        for (const auto& key : keys)
            if (!has(key)) missing += (missing.empty() ? "" : ", ") + key;
        if (!missing.empty())
            throw ConfigError("missing required config keys: " + missing);
    }

    const std::map<std::string, std::string>& resolved() const { return resolved_; }
    const std::map<std::string, std::string>& raw() const { return raw_; }

private:
    static std::string format_number(double value) {
        std::ostringstream out;
        out << value;
        return out.str();
    }

    double parse_double(const std::string& key, const std::string& value) {
        try {
            std::size_t pos = 0;
            const double parsed = std::stod(value, &pos);
            if (pos != value.size()) throw std::invalid_argument("trailing characters");
            return parsed;
        } catch (const std::exception&) {
            throw ConfigError("config key '" + key + "': cannot parse number from '" + value + "'");
        }
    }

    std::map<std::string, std::string> raw_;
    std::map<std::string, std::string> resolved_;
};

// Presets mirror the reference parameter sets: `fig1` is the single-detector
// decay run (g = 0.01, omega0 = 1.33, alpha = 1e-3 in units of the gap);
// `fig2` adds the acceleration sweep grid.
inline std::map<std::string, std::string> preset_values(const std::string& name) {
    std::map<std::string, std::string> values = {
        {"model.gap", "1.0"},
        {"model.mode.1.omega", "1.33"},
        {"model.n_max", "3"},
        {"model.coupling", "0.01"},
        {"worldline.type", "uniform_acceleration"},
        {"worldline.alpha", "1e-3"},
    };
    if (name == "fig1") return values;
    if (name == "fig2") {
        values["sweep.alphas"] = "2e-5,5e-5,1e-4,2e-4,5e-4";
        return values;
    }
    throw ConfigError("unknown preset '" + name + "' (expected fig1 or fig2)");
}

// Everything a mode runner needs, extracted and validated.
struct RunConfig {
    Mode mode = Mode::evolve;

    // evolve / convergence / sweep dynamics
    ModelSpec model;
    BasisIndex initial;
    IntegratorConfig integrator;
    double tau0 = 0.0;
    double tau1 = 0.0;
    bool tau1_auto = true;

    // lz / sweep closed forms
    LzSetup lz;
    std::vector<double> sweep_alphas;
    int sweep_workers = 0;

    std::vector<int> truncations;

    // hardware
    std::string hw_branch;
    std::string hw_unit = "kHz";
    SimTarget hw_target;
    int hw_n_emitters = 1;
    std::vector<double> hw_mode_freqs;
    double hw_lamb_dicke = 0.2;
    double hw_qubit_energy = 5000.0;
    double hw_cavity_freq = 6000.0;
    double hw_bare_coupling = 1.0;
    double hw_tau1 = 0.0; // 0: auto
    int hw_samples = 0;   // 0: auto (Nyquist with margin)

    std::map<std::string, std::string> resolved; // for provenance headers
};

namespace detail {

inline Worldline worldline_from_config(ConfigMap& config) {
    const std::string type = config.require_string("worldline.type");
    if (type == "uniform_acceleration") {
        const double alpha = config.require_double("worldline.alpha");
        if (!(alpha > 0.0))
            throw ConfigError("worldline.alpha must satisfy alpha > 0 (got " +
                              std::to_string(alpha) + ")");
        return Worldline::uniform_acceleration(alpha);
    }
    if (type == "inertial") {
        const double velocity = config.get_double("worldline.velocity", 0.0);
        const double x0 = config.get_double("worldline.x0", 0.0);
        if (!(std::abs(velocity) < 1.0))
            throw ConfigError("worldline.velocity must satisfy |v| < 1 (got " +
                              std::to_string(velocity) + ")");
        return Worldline::inertial(velocity, x0);
    }
    if (type == "custom") return worldline_from_csv(config.require_string("worldline.file"));
    throw ConfigError("worldline.type must be uniform_acceleration, inertial or custom (got '" +
                      type + "')");
}

inline ModelSpec model_from_config(ConfigMap& config) {
    const int n_detectors = config.get_int("model.detectors", 1);
    const int n_modes = config.get_int("model.modes", 1);
    if (n_detectors < 1) throw ConfigError("model.detectors must be >= 1");
    if (n_modes < 1) throw ConfigError("model.modes must be >= 1");

    const Worldline shared = worldline_from_config(config);
    const double default_gap = config.get_double("model.gap", 1.0);
    const int default_n_max = config.get_int("model.n_max", 3);

    ModelSpec model;
    for (int j = 1; j <= n_detectors; ++j) {
        const double gap =
            config.get_double("model.detector." + std::to_string(j) + ".gap", default_gap);
        if (!(gap > 0.0))
            throw ConfigError("detector " + std::to_string(j) +
                              " must satisfy gap > 0 (got " + std::to_string(gap) + ")");
        model.detectors.push_back({gap, shared});
    }
    for (int m = 1; m <= n_modes; ++m) {
        const std::string base = "model.mode." + std::to_string(m) + ".";
        const double omega = config.require_double(base + "omega");
        if (!(omega > 0.0))
            throw ConfigError("mode " + std::to_string(m) + " must satisfy omega > 0 (got " +
                              std::to_string(omega) + ")");
        const int n_max = config.get_int(base + "n_max", default_n_max);
        ModeSpec mode = ModeSpec::massless(omega, n_max);
        mode.phase_offset = config.get_double(base + "phase_offset", 0.0);
        model.modes.push_back(mode);
    }

    const double default_g = config.get_double("model.coupling", 0.0);
    model.couplings = Eigen::MatrixXd::Constant(n_detectors, n_modes, default_g);
    for (int j = 1; j <= n_detectors; ++j)
        for (int m = 1; m <= n_modes; ++m) {
            const std::string key =
                "model.coupling." + std::to_string(j) + "." + std::to_string(m);
            if (config.has(key)) model.couplings(j - 1, m - 1) = config.require_double(key);
        }
    model.rwa_diagnostic = config.get_bool("model.rwa_diagnostic", false);
    validate(model);
    return model;
}

inline BasisIndex initial_from_config(ConfigMap& config, const SpaceSpec& space) {
    BasisIndex initial;
    initial.spin_bits.assign(static_cast<std::size_t>(space.n_detectors), 0);
    initial.occupations.assign(space.mode_truncations.size(), 0);
    for (int j = 1; j <= space.n_detectors; ++j) {
        const std::string fallback = j == 1 ? "e" : "g";
        const std::string state =
            config.get_string("initial.detector." + std::to_string(j), fallback);
        if (state == "e")
            initial.spin_bits[static_cast<std::size_t>(j - 1)] = 1;
        else if (state == "g")
            initial.spin_bits[static_cast<std::size_t>(j - 1)] = 0;
        else
            throw ConfigError("initial.detector." + std::to_string(j) +
                              " must be 'g' or 'e' (got '" + state + "')");
    }
    for (int m = 1; m <= space.n_modes(); ++m) {
        const int occ = config.get_int("initial.mode." + std::to_string(m), 0);
        const int n_max = space.mode_truncations[static_cast<std::size_t>(m - 1)];
        if (occ < 0 || occ > n_max)
            throw ConfigError("initial.mode." + std::to_string(m) +
                              " must lie in [0," + std::to_string(n_max) + "]");
        initial.occupations[static_cast<std::size_t>(m - 1)] = occ;
    }
    return initial;
}

inline IntegratorConfig integrator_from_config(ConfigMap& config) {
    IntegratorConfig integrator;
    const std::string method = config.get_string("integrator.method", "rk4");
    if (method == "rk4" || method == "rk4_fixed")
        integrator.method = Method::rk4_fixed;
    else if (method == "expm" || method == "piecewise_expm_midpoint")
        integrator.method = Method::piecewise_expm_midpoint;
    else
        throw ConfigError("integrator.method must be rk4 or expm (got '" + method + "')");
    integrator.dt = config.get_double("integrator.dt", 0.0);
    integrator.steps_per_period =
        config.get_int("integrator.steps_per_period", kDefaultStepsPerPeriod);
    if (integrator.steps_per_period < 4)
        throw ConfigError("integrator.steps_per_period must be >= 4");
    integrator.record_stride = config.get_int("integrator.record_stride", 0);
    integrator.norm_tolerance = config.get_double("integrator.norm_tolerance", 1e-8);
    if (!(integrator.norm_tolerance > 0.0))
        throw ConfigError("integrator.norm_tolerance must satisfy tolerance > 0");
    return integrator;
}

// The lz/sweep modes describe the single-detector problem; pull the scalar
// setup out of the same model keys.
inline LzSetup lz_from_config(ConfigMap& config) {
    LzSetup setup;
    setup.g = config.require_double("model.coupling");
    setup.omega0 = config.require_double("model.mode.1.omega");
    setup.gap = config.get_double("model.gap", 1.0);
    setup.alpha = config.get_double("worldline.alpha", 0.0);
    return setup;
}

} // namespace detail

// Parses (preset -> file -> --set overrides), extracts and validates the
// configuration for one mode.
inline RunConfig parse_config(Mode mode, const std::string& config_path,
                              const std::vector<std::pair<std::string, std::string>>& overrides) {
    ConfigMap config;
    // Apply file first so a preset named there can be expanded underneath it.
    ConfigMap file_layer;
    if (!config_path.empty()) file_layer.load_file(config_path);
    for (const auto& [key, value] : overrides) file_layer.set(key, value);

    if (file_layer.has("preset")) {
        ConfigMap probe = file_layer;
        const std::string preset = probe.require_string("preset");
        for (const auto& [key, value] : preset_values(preset)) config.set(key, value);
        config.set("preset", preset);
    }
    for (const auto& [key, value] : file_layer.raw()) config.set(key, value);

    RunConfig run;
    run.mode = mode;

    switch (mode) {
        case Mode::evolve:
        case Mode::convergence: {
            config.require_all({"model.coupling", "model.mode.1.omega", "worldline.type"});
            run.model = detail::model_from_config(config);
            run.initial = detail::initial_from_config(config, run.model.space());
            run.integrator = detail::integrator_from_config(config);
            run.tau0 = config.get_double("evolve.tau0", 0.0);
            const std::string tau1 = config.get_string("evolve.tau1", "auto");
            run.tau1_auto = tau1 == "auto";
            if (!run.tau1_auto) {
                try {
                    run.tau1 = std::stod(tau1);
                } catch (const std::exception&) {
                    throw ConfigError("evolve.tau1 must be a number or 'auto'");
                }
                if (!(run.tau1 > run.tau0))
                    throw ConfigError("evolve.tau1 must satisfy tau1 > tau0");
            }
            if (mode == Mode::convergence) {
                run.truncations = config.get_int_list("convergence.truncations", "2,3");
                if (run.truncations.empty())
                    throw ConfigError("convergence.truncations must be a nonempty list");
            }
            if (run.tau1_auto) {
                // The automatic horizon comes from the Landau-Zener stopping
                // rule, which needs the single-detector uniform-acceleration
                // picture with a crossing.
                if (run.model.detectors.size() != 1 || run.model.modes.size() != 1 ||
                    !run.model.detectors[0].worldline.is_uniform_acceleration())
                    throw ConfigError("evolve.tau1 = auto needs a single detector and mode on a "
                                      "uniform-acceleration worldline; set evolve.tau1 explicitly");
                LzSetup setup{run.model.couplings(0, 0), run.model.modes[0].omega,
                              run.model.detectors[0].gap,
                              run.model.detectors[0].worldline.alpha()};
                if (!(setup.omega0 > setup.gap))
                    throw ConfigError("evolve.tau1 = auto needs omega0 > gap (no level crossing); "
                                      "set evolve.tau1 explicitly");
                run.tau1 = default_tau_end(setup);
            }
            break;
        }
        case Mode::sweep: {
            config.require_all({"model.coupling", "model.mode.1.omega", "sweep.alphas"});
            run.lz = detail::lz_from_config(config);
            if (!(run.lz.g > 0.0)) throw ConfigError("model.coupling must satisfy g > 0 for sweep");
            if (!(run.lz.omega0 > run.lz.gap))
                throw ConfigError("sweep needs omega0 > gap (level crossing required)");
            run.sweep_alphas = config.get_double_list("sweep.alphas", "");
            if (run.sweep_alphas.empty()) throw ConfigError("sweep.alphas must be a nonempty list");
            for (double alpha : run.sweep_alphas)
                if (!(alpha > 0.0)) throw ConfigError("sweep.alphas entries must satisfy alpha > 0");
            run.sweep_workers = config.get_int("sweep.workers", 0);
            run.integrator = detail::integrator_from_config(config);
            run.truncations = {config.get_int("model.n_max", 3)};
            break;
        }
        case Mode::lz: {
            config.require_all({"model.coupling", "model.mode.1.omega", "worldline.alpha"});
            run.lz = detail::lz_from_config(config);
            validate(run.lz);
            if (!(run.lz.omega0 > run.lz.gap))
                throw ConfigError("lz analysis needs omega0 > gap (no level crossing otherwise)");
            break;
        }
        case Mode::hardware: {
            config.require_all({"hardware.branch", "hardware.target.g", "hardware.target.gap",
                                "hardware.target.alpha", "hardware.target.omega0"});
            run.hw_branch = config.require_string("hardware.branch");
            if (run.hw_branch != "ion" && run.hw_branch != "cqed")
                throw ConfigError("hardware.branch must be 'ion' or 'cqed' (got '" +
                                  run.hw_branch + "')");
            run.hw_unit = config.get_string("hardware.unit", "kHz");
            run.hw_target.g = config.require_double("hardware.target.g");
            run.hw_target.gap = config.require_double("hardware.target.gap");
            run.hw_target.alpha = config.require_double("hardware.target.alpha");
            run.hw_target.omega_field = config.require_double("hardware.target.omega0");
            validate(run.hw_target);
            if (run.hw_branch == "ion") {
                run.hw_n_emitters = config.get_int("hardware.ion.n_ions", 1);
                run.hw_mode_freqs = config.get_double_list("hardware.ion.mode_freqs", "1000,2000");
                run.hw_lamb_dicke = config.get_double("hardware.ion.lamb_dicke", 0.2);
                if (!(run.hw_lamb_dicke > 0.0))
                    throw ConfigError("hardware.ion.lamb_dicke must satisfy k*xbar > 0");
            } else {
                run.hw_n_emitters = config.get_int("hardware.cqed.n_qubits", 1);
                run.hw_qubit_energy = config.get_double("hardware.cqed.qubit_energy", 5000.0);
                run.hw_cavity_freq = config.get_double("hardware.cqed.cavity_freq", 6000.0);
                run.hw_bare_coupling = config.get_double("hardware.cqed.bare_coupling", 1.0);
            }
            if (run.hw_n_emitters < 1) throw ConfigError("hardware emitter count must be >= 1");
            run.hw_tau1 = config.get_double("hardware.schedule.tau1", 0.0);
            run.hw_samples = config.get_int("hardware.schedule.samples", 0);
            break;
        }
    }

    run.resolved = config.resolved();
    return run;
}

} // namespace rindler::cli
