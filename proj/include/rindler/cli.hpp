#pragma once

// Mode runners behind the rindler-sim front end. Each writes its artifacts
// under an output directory and returns the paths; main() maps exceptions to
// exit codes (2 config, 3 accuracy, 4 I/O).

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "rindler/config.hpp"
#include "rindler/csv.hpp"
#include "rindler/hardware.hpp"

namespace rindler::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitAccuracyError = 3;
inline constexpr int kExitIoError = 4;

struct RunOutputs {
    std::vector<std::string> files;
};

namespace detail {

inline std::string output_path(const std::string& out_dir, const std::string& name) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());
    return (fs::path(out_dir) / name).string();
}

inline RunOutputs run_evolve(const RunConfig& run, const std::string& out_dir) {
    const StateVector initial = basis_state(run.model.space(), run.initial);
    const auto result = evolve(run.model, initial, run.tau0, run.tau1, run.integrator);

    const std::string path = output_path(out_dir, "evolve.csv");
    auto out = open_artifact(path, "evolve", run.resolved);
    out << "tau";
    for (std::size_t o = 0; o + 1 < result.observables.size(); ++o)
        out << "," << result.observables[o].name;
    out << ",norm\n";
    for (std::size_t i = 0; i < result.times.size(); ++i) {
        out << format_full(result.times[i]);
        for (const auto& series : result.observables) out << "," << format_full(series.values[i]);
        out << "\n";
    }

    std::cout << "evolve: " << result.times.size() << " rows over tau in ["
              << format_full(run.tau0) << ", " << format_full(run.tau1)
              << "], norm drift " << format_full(result.norm_drift) << "\n";
    std::cout << "wrote " << path << "\n";
    return {{path}};
}

inline RunOutputs run_sweep(const RunConfig& run, const std::string& out_dir) {
    SweepConfig sweep;
    sweep.n_max = run.truncations.front();
    sweep.integrator = run.integrator;
    sweep.workers = run.sweep_workers;
    const auto rows = sweep_acceleration(run.lz, run.sweep_alphas, sweep);

    const std::string path = output_path(out_dir, "sweep.csv");
    auto out = open_artifact(path, "sweep", run.resolved);
    out << "alpha,gamma,p_excited_sim,p_excited_lz,abs_dev\n";
    for (const auto& row : rows)
        out << format_full(row.alpha) << "," << format_full(row.gamma) << ","
            << format_full(row.p_excited_sim) << "," << format_full(row.p_excited_lz) << ","
            << format_full(row.abs_dev) << "\n";

    std::cout << "sweep: " << rows.size() << " accelerations\n";
    for (const auto& row : rows)
        std::cout << "  alpha = " << format_full(row.alpha)
                  << "  P_e,sim = " << format_full(row.p_excited_sim)
                  << "  P_e,lz = " << format_full(row.p_excited_lz)
                  << "  |dev| = " << format_full(row.abs_dev) << "\n";
    std::cout << "wrote " << path << "\n";
    return {{path}};
}

inline RunOutputs run_lz(const RunConfig& run, const std::string& out_dir) {
    bool boundary = false;
    const double tau_c = crossing_time(run.lz, &boundary);
    const double gamma = lz_gamma(run.lz);
    const auto [p_excited, p_ground] = lz_probability(gamma);

    const std::string path = output_path(out_dir, "lz_report.txt");
    auto out = open_artifact(path, "lz", run.resolved);
    out << "landau-zener analysis (frequencies in units of Omega_ref)\n";
    out << "g       = " << format_full(run.lz.g) << "\n";
    out << "omega0  = " << format_full(run.lz.omega0) << "\n";
    out << "Omega   = " << format_full(run.lz.gap) << "\n";
    out << "alpha   = " << format_full(run.lz.alpha) << "\n";
    out << "tau_c   = " << format_full(tau_c) << (boundary ? "  (boundary: omega0 == Omega)" : "")
        << "\n";
    out << "gamma   = " << format_full(gamma) << "\n";
    out << "P_e(inf) = " << format_full(p_excited) << "\n";
    out << "P_g(inf) = " << format_full(p_ground) << "\n";
    out << "suggested tau_end = " << format_full(default_tau_end(run.lz)) << "\n";

    std::cout << "lz: tau_c = " << format_full(tau_c) << ", gamma = " << format_full(gamma)
              << ", P_e(inf) = " << format_full(p_excited) << "\n";
    std::cout << "wrote " << path << "\n";
    return {{path}};
}

inline std::vector<double> hardware_grid(const RunConfig& run) {
    // Default horizon: crossing (when present) plus three e-foldings.
    double tau1 = run.hw_tau1;
    if (!(tau1 > 0.0)) {
        const double log_ratio = run.hw_target.omega_field > run.hw_target.gap
                                     ? std::log(run.hw_target.omega_field / run.hw_target.gap)
                                     : 0.0;
        tau1 = (log_ratio + 3.0) / run.hw_target.alpha;
    }
    int samples = run.hw_samples;
    if (samples <= 0) {
        // Sampling-rate requirement: ten points per fastest phase period,
        // with 25% margin; omega_eff is maximal at tau = 0.
        const double required_spacing = (2.0 * M_PI / run.hw_target.omega_field) / 10.0;
        samples = static_cast<int>(std::ceil(tau1 / (required_spacing * 0.8))) + 1;
        samples = std::max(samples, 101);
    }
    std::vector<double> grid(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i)
        grid[static_cast<std::size_t>(i)] = tau1 * static_cast<double>(i) / (samples - 1);
    return grid;
}

inline void write_validity(std::ostream& out, const ValidityReport& report) {
    out << "validity checks (ratio: pass <= " << kPassThreshold << " < warn <= " << kWarnThreshold
        << " < fail):\n";
    for (const auto& check : report.checks)
        out << "  " << check.name << " = " << format_full(check.ratio) << "  ["
            << to_string(check.status) << "]\n";
    out << "overall: " << to_string(report.worst()) << "\n";
}

inline RunOutputs run_hardware(const RunConfig& run, const std::string& out_dir) {
    const auto grid = hardware_grid(run);

    const std::string schedule_path = output_path(out_dir, "schedule.csv");
    const std::string report_path = output_path(out_dir, "validity_report.txt");

    PhaseSchedule schedule;
    auto report = open_artifact(report_path, "hardware", run.resolved);

    if (run.hw_branch == "ion") {
        const auto compiled = compile_ion(run.hw_target, run.hw_n_emitters, run.hw_mode_freqs,
                                          run.hw_lamb_dicke, grid);
        schedule = compiled.schedule;
        report << "branch: trapped ions (" << compiled.spec.n_ions << " ions)\n";
        report << "frequency unit: " << run.hw_unit << "\n";
        for (std::size_t j = 0; j < compiled.couplings.size(); ++j)
            report << "g[" << j + 1 << "] = " << format_full(compiled.couplings[j]) << " "
                   << run.hw_unit << "\n";
        for (std::size_t j = 0; j < compiled.spec.rabi_amplitudes.size(); ++j)
            report << "Omega_L[" << j + 1 << "]/2 = "
                   << format_full(0.5 * compiled.spec.rabi_amplitudes[j]) << " " << run.hw_unit
                   << "\n";
        report << "omega_L1 = " << format_full(compiled.laser_freqs.first) << " " << run.hw_unit
               << "\n";
        report << "omega_L2 = " << format_full(compiled.laser_freqs.second) << " " << run.hw_unit
               << "\n";
        report << "phase timescale 1/alpha = " << format_full(1.0 / run.hw_target.alpha)
               << " 1/" << run.hw_unit << "\n";
        write_validity(report, compiled.validity);
        for (const auto& note : compiled.notes) report << "note: " << note << "\n";
    } else {
        const auto compiled =
            compile_cqed(run.hw_target, run.hw_n_emitters, run.hw_qubit_energy,
                         run.hw_cavity_freq, run.hw_bare_coupling, grid);
        schedule = compiled.schedule;
        report << "branch: circuit QED (" << run.hw_n_emitters << " qubits)\n";
        report << "frequency unit: " << run.hw_unit << "\n";
        for (std::size_t j = 0; j < compiled.couplings.size(); ++j) {
            report << "g[" << j + 1 << "] = " << format_full(compiled.couplings[j]) << " "
                   << run.hw_unit << "\n";
            report << "eta[" << j + 1 << "] = "
                   << format_full(compiled.spec.modulation_depths[j]) << "\n";
            report << "omega_d1[" << j + 1 << "] = "
                   << format_full(compiled.drive_freqs[j].first) << " " << run.hw_unit << "\n";
            report << "omega_d2[" << j + 1 << "] = "
                   << format_full(compiled.drive_freqs[j].second) << " " << run.hw_unit << "\n";
        }
        write_validity(report, compiled.validity);
        for (const auto& note : compiled.notes) report << "note: " << note << "\n";
    }

    auto csv = open_artifact(schedule_path, "hardware", run.resolved);
    csv << "tau,phi1,phi2\n";
    for (std::size_t i = 0; i < schedule.tau_grid.size(); ++i)
        csv << format_full(schedule.tau_grid[i]) << "," << format_full(schedule.phi1[i]) << ","
            << format_full(schedule.phi2[i]) << "\n";

    std::cout << "hardware (" << run.hw_branch << "): " << schedule.tau_grid.size()
              << " schedule samples\n";
    std::cout << "wrote " << schedule_path << "\n";
    std::cout << "wrote " << report_path << "\n";
    return {{schedule_path, report_path}};
}

inline RunOutputs run_convergence(const RunConfig& run, const std::string& out_dir) {
    const auto report = convergence_check(run.model, run.initial, run.tau0, run.tau1,
                                          run.integrator, run.truncations);

    const std::string path = output_path(out_dir, "convergence.csv");
    auto out = open_artifact(path, "convergence", run.resolved);
    out << "# converged: " << (report.converged ? "true" : "false")
        << " (threshold " << format_full(report.threshold) << ")\n";
    out << "n_max,p_ground_final,delta_from_previous\n";
    for (const auto& row : report.rows)
        out << row.n_max << "," << format_full(row.p_ground_final) << ","
            << format_full(row.delta_from_previous) << "\n";

    std::cout << "convergence: " << (report.converged ? "converged" : "NOT converged") << "\n";
    for (const auto& row : report.rows)
        std::cout << "  n_max = " << row.n_max << "  P_g = " << format_full(row.p_ground_final)
                  << "  delta = " << format_full(row.delta_from_previous) << "\n";
    std::cout << "wrote " << path << "\n";
    return {{path}};
}

} // namespace detail

// Runs one fully parsed configuration; throws on failure.
inline RunOutputs run(const RunConfig& config, const std::string& out_dir) {
    switch (config.mode) {
        case Mode::evolve: return detail::run_evolve(config, out_dir);
        case Mode::sweep: return detail::run_sweep(config, out_dir);
        case Mode::lz: return detail::run_lz(config, out_dir);
        case Mode::hardware: return detail::run_hardware(config, out_dir);
        default: return detail::run_convergence(config, out_dir);
    }
}

// Parse + run + exception-to-exit-code mapping, shared by main() and tests.
inline int run_cli(const std::string& mode_name, const std::string& config_path,
                   const std::vector<std::string>& set_pairs, const std::string& out_dir) {
    try {
        std::vector<std::pair<std::string, std::string>> overrides;
        for (const auto& pair : set_pairs) {
            const auto eq = pair.find('=');
            if (eq == std::string::npos)
                throw ConfigError("--set expects key=value, got '" + pair + "'");
            overrides.emplace_back(pair.substr(0, eq), pair.substr(eq + 1));
        }
        const Mode mode = mode_from_string(mode_name);
        const RunConfig config = parse_config(mode, config_path, overrides);
        run(config, out_dir);
        return kExitOk;
    } catch (const AccuracyError& error) {
        std::cerr << "accuracy error: " << error.what() << "\n";
        return kExitAccuracyError;
    } catch (const IoError& error) {
        std::cerr << "i/o error: " << error.what() << "\n";
        return kExitIoError;
    } catch (const ConfigError& error) {
        std::cerr << "config error: " << error.what() << "\n";
        return kExitConfigError;
    } catch (const DomainError& error) {
        std::cerr << "config error: " << error.what() << "\n";
        return kExitConfigError;
    }
}

} // namespace rindler::cli
