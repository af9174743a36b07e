#pragma once

// Compiles target simulation parameters (g, Omega, alpha, omega0) into
// trapped-ion laser schedules and circuit-QED drive schedules, with a
// quantitative validity check for every approximation the derivations lean
// on. Frequencies here are plain numbers in whatever unit the caller uses
// consistently (the reference setups quote kHz for ions, MHz for circuits).
//
// Only the center-of-mass mode (n = 0) is compiled for ions; coupling more
// modes needs additional lasers and is surfaced as a note, not implemented.

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "rindler/errors.hpp"
#include "rindler/trajectory.hpp"

namespace rindler {

enum class CheckStatus { pass, warn, fail };

inline const char* to_string(CheckStatus status) {
    switch (status) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::warn: return "warn";
        default: return "fail";
    }
}

// Thresholds for the "<<" inequalities: 0.2 matches the accepted Lamb-Dicke
// ratio of the reference setup.
inline constexpr double kPassThreshold = 0.2;
inline constexpr double kWarnThreshold = 0.5;

struct ValidityCheck {
    std::string name;
    double ratio = 0.0; // left side / right side of the inequality
    CheckStatus status = CheckStatus::pass;
};

inline CheckStatus classify_ratio(double ratio) {
    if (!(ratio <= kWarnThreshold)) return CheckStatus::fail; // also catches NaN/inf
    if (ratio <= kPassThreshold) return CheckStatus::pass;
    return CheckStatus::warn;
}

struct ValidityReport {
    std::vector<ValidityCheck> checks;

    bool all_pass() const {
        for (const auto& check : checks)
            if (check.status != CheckStatus::pass) return false;
        return true;
    }

    CheckStatus worst() const {
        CheckStatus worst = CheckStatus::pass;
        for (const auto& check : checks)
            if (static_cast<int>(check.status) > static_cast<int>(worst)) worst = check.status;
        return worst;
    }

    void add(std::string name, double ratio) {
        checks.push_back({std::move(name), ratio, classify_ratio(ratio)});
    }
};

struct IonChainSpec {
    int n_ions = 1;
    std::vector<double> mode_freqs;       // [0] is the center-of-mass frequency
    double lamb_dicke = 0.0;              // k * xbar_0
    std::vector<double> rabi_amplitudes;  // Omega_L,j (full amplitude, not half)
    double detuning = 0.0;                // Omega
};

inline void validate(const IonChainSpec& spec) {
    if (spec.n_ions < 1) throw DomainError("IonChainSpec: n_ions must be >= 1");
    if (spec.mode_freqs.empty()) throw DomainError("IonChainSpec: mode_freqs must not be empty");
    if (!(spec.lamb_dicke > 0.0)) throw DomainError("IonChainSpec: lamb_dicke must be > 0");
    if (spec.rabi_amplitudes.size() != static_cast<std::size_t>(spec.n_ions))
        throw DomainError("IonChainSpec: need one Rabi amplitude per ion");
    for (std::size_t n = 1; n < spec.mode_freqs.size(); ++n)
        if (spec.mode_freqs[n] == spec.mode_freqs[0])
            throw DomainError("IonChainSpec: spectator mode " + std::to_string(n + 1) +
                              " degenerate with the center-of-mass mode");
}

// |g_j| = Omega_L,j * (k xbar_0) / (2 sqrt(N)). The derivation carries a
// phase factor i, absorbed as a gauge choice into the operator phases; only
// the magnitude is compiled.
inline std::vector<double> ion_effective_coupling(const IonChainSpec& spec) {
    validate(spec);
    const double root_n = std::sqrt(static_cast<double>(spec.n_ions));
    std::vector<double> couplings;
    couplings.reserve(spec.rabi_amplitudes.size());
    for (double rabi : spec.rabi_amplitudes)
        couplings.push_back(rabi * spec.lamb_dicke / (2.0 * root_n));
    return couplings;
}

// Raman beat frequencies around the center-of-mass mode:
// omega_L1 = -omega0 - Omega, omega_L2 = omega0 - Omega.
inline std::pair<double, double> ion_laser_frequencies(double omega0, double detuning) {
    return {-omega0 - detuning, omega0 - detuning};
}

// One row per inequality of the two derivation conditions:
// (i) Lamb-Dicke k xbar << 1; (ii) Omega_L/2 << omega0 and
// (Omega_L/2) k xbar << omega0, |omega0 - omega_{n != 0}|.
inline ValidityReport ion_validity(const IonChainSpec& spec) {
    validate(spec);
    ValidityReport report;
    report.add("lamb_dicke", spec.lamb_dicke);

    double min_spectator_gap = std::numeric_limits<double>::infinity();
    for (std::size_t n = 1; n < spec.mode_freqs.size(); ++n)
        min_spectator_gap =
            std::min(min_spectator_gap, std::abs(spec.mode_freqs[n] - spec.mode_freqs[0]));

    const double omega0 = spec.mode_freqs[0];
    for (std::size_t j = 0; j < spec.rabi_amplitudes.size(); ++j) {
        const double half_rabi = 0.5 * spec.rabi_amplitudes[j];
        const std::string tag = "[" + std::to_string(j + 1) + "]";
        report.add("rabi_vs_com" + tag, half_rabi / omega0);
        report.add("sideband_vs_com" + tag, half_rabi * spec.lamb_dicke / omega0);
        if (spec.mode_freqs.size() > 1)
            report.add("sideband_vs_spectators" + tag,
                       half_rabi * spec.lamb_dicke / min_spectator_gap);
    }
    return report;
}

struct CqedSpec {
    double qubit_energy = 0.0;  // epsilon
    double cavity_freq = 0.0;   // omega0
    double bare_coupling = 0.0; // g0
    std::vector<double> modulation_depths; // eta_j
    std::vector<double> target_gaps;       // Omega_j
};

inline void validate(const CqedSpec& spec) {
    if (!(spec.qubit_energy > 0.0)) throw DomainError("CqedSpec: qubit_energy must be > 0");
    if (!(spec.cavity_freq > 0.0)) throw DomainError("CqedSpec: cavity_freq must be > 0");
    if (!(spec.bare_coupling > 0.0)) throw DomainError("CqedSpec: bare_coupling must be > 0");
    if (spec.modulation_depths.empty() ||
        spec.modulation_depths.size() != spec.target_gaps.size())
        throw DomainError("CqedSpec: need matching modulation depth and gap per qubit");
    for (double eta : spec.modulation_depths)
        if (!(eta > 0.0) || !(eta < 1.0))
            throw DomainError("CqedSpec: modulation depths must lie in (0, 1)");
}

// Per-qubit drive pair (epsilon - Omega_j - omega0, epsilon - Omega_j + omega0),
// applied verbatim; nonpositive results are flagged by the callers, not
// rejected.
inline std::vector<std::pair<double, double>> cqed_drive_frequencies(const CqedSpec& spec) {
    validate(spec);
    std::vector<std::pair<double, double>> freqs;
    freqs.reserve(spec.target_gaps.size());
    for (double gap : spec.target_gaps)
        freqs.emplace_back(spec.qubit_energy - gap - spec.cavity_freq,
                           spec.qubit_energy - gap + spec.cavity_freq);
    return freqs;
}

// g_j = g0 eta_j.
inline std::vector<double> cqed_effective_coupling(const CqedSpec& spec) {
    validate(spec);
    std::vector<double> couplings;
    couplings.reserve(spec.modulation_depths.size());
    for (double eta : spec.modulation_depths) couplings.push_back(spec.bare_coupling * eta);
    return couplings;
}

// eta_j << 1; epsilon, omega0, |epsilon - omega0| >> g0; and the slow-phase
// condition phi_dot/phi = alpha << omega_d for every drive tone.
inline ValidityReport cqed_validity(const CqedSpec& spec, double alpha) {
    validate(spec);
    ValidityReport report;
    for (std::size_t j = 0; j < spec.modulation_depths.size(); ++j)
        report.add("eta[" + std::to_string(j + 1) + "]", spec.modulation_depths[j]);
    report.add("g0_vs_qubit", spec.bare_coupling / spec.qubit_energy);
    report.add("g0_vs_cavity", spec.bare_coupling / spec.cavity_freq);
    const double split = std::abs(spec.qubit_energy - spec.cavity_freq);
    report.add("g0_vs_qubit_cavity_split",
               split > 0.0 ? spec.bare_coupling / split
                           : std::numeric_limits<double>::infinity());
    double min_drive = std::numeric_limits<double>::infinity();
    for (const auto& [d1, d2] : cqed_drive_frequencies(spec))
        min_drive = std::min({min_drive, std::abs(d1), std::abs(d2)});
    report.add("alpha_vs_drive",
               alpha == 0.0 ? 0.0
               : min_drive > 0.0 ? alpha / min_drive
                                 : std::numeric_limits<double>::infinity());
    return report;
}

struct PhaseSchedule {
    std::vector<double> tau_grid;
    std::vector<double> phi1; //  Phi(tau)
    std::vector<double> phi2; // -Phi(tau), pointwise
    std::vector<double> drive_frequencies;
};

// Samples the control phases phi1 = Phi, phi2 = -Phi on the supplied grid.
// Rejects grids coarser than a tenth of the fastest effective-frequency
// period, naming the spacing that would be needed.
inline PhaseSchedule phase_schedule(const Worldline& worldline, const ModeSpec& mode,
                                    const std::vector<double>& tau_grid) {
    if (tau_grid.size() < 2) throw DomainError("phase_schedule: grid needs >= 2 samples");
    double max_spacing = 0.0;
    double max_omega_eff = 0.0;
    for (std::size_t i = 0; i < tau_grid.size(); ++i) {
        if (i > 0) {
            if (!(tau_grid[i] > tau_grid[i - 1]))
                throw DomainError("phase_schedule: grid must be strictly increasing");
            max_spacing = std::max(max_spacing, tau_grid[i] - tau_grid[i - 1]);
        }
        max_omega_eff =
            std::max(max_omega_eff, std::abs(effective_frequency(worldline, mode, tau_grid[i])));
    }
    if (max_omega_eff > 0.0) {
        const double required = (2.0 * M_PI / max_omega_eff) / 10.0;
        if (max_spacing > required)
            throw AccuracyError("phase_schedule: grid spacing " + std::to_string(max_spacing) +
                                " undersamples the phase; spacing <= " +
                                std::to_string(required) + " required");
    }
    PhaseSchedule schedule;
    schedule.tau_grid = tau_grid;
    schedule.phi1.reserve(tau_grid.size());
    schedule.phi2.reserve(tau_grid.size());
    for (double tau : tau_grid) {
        const double phi = phase(worldline, mode, tau);
        schedule.phi1.push_back(phi);
        schedule.phi2.push_back(-phi);
    }
    return schedule;
}

// Target effective model to realize on hardware.
struct SimTarget {
    double g = 0.0;          // effective coupling per emitter
    double gap = 0.0;        // Omega
    double alpha = 0.0;      // acceleration frequency
    double omega_field = 0.0; // simulated field frequency omega0
};

inline void validate(const SimTarget& target) {
    if (!(target.g > 0.0)) throw DomainError("SimTarget: g must be > 0");
    if (!(target.gap > 0.0)) throw DomainError("SimTarget: gap must be > 0");
    if (!(target.alpha > 0.0)) throw DomainError("SimTarget: alpha must be > 0");
    if (!(target.omega_field > 0.0)) throw DomainError("SimTarget: omega_field must be > 0");
}

struct IonCompileResult {
    IonChainSpec spec;
    std::vector<double> couplings;          // recomputed from the spec
    std::pair<double, double> laser_freqs;  // (omega_L1, omega_L2)
    PhaseSchedule schedule;
    ValidityReport validity;
    std::vector<std::string> notes;
};

// Inverts g = Omega_L k xbar / (2 sqrt(N)) for the Rabi amplitude, derives
// the laser pair around the center-of-mass mode and samples the optical
// phases. Reported couplings are recomputed from the emitted spec so the
// round trip is checkable.
inline IonCompileResult compile_ion(const SimTarget& target, int n_ions,
                                    std::vector<double> mode_freqs, double lamb_dicke,
                                    const std::vector<double>& tau_grid) {
    validate(target);
    IonCompileResult result;
    result.spec.n_ions = n_ions;
    result.spec.mode_freqs = std::move(mode_freqs);
    result.spec.lamb_dicke = lamb_dicke;
    result.spec.detuning = target.gap;
    const double rabi =
        2.0 * target.g * std::sqrt(static_cast<double>(n_ions)) / lamb_dicke;
    result.spec.rabi_amplitudes.assign(static_cast<std::size_t>(n_ions), rabi);
    validate(result.spec);

    result.couplings = ion_effective_coupling(result.spec);
    result.laser_freqs = ion_laser_frequencies(result.spec.mode_freqs[0], target.gap);
    result.validity = ion_validity(result.spec);
    result.schedule = phase_schedule(Worldline::uniform_acceleration(target.alpha),
                                     ModeSpec::massless(target.omega_field, 1), tau_grid);
    result.schedule.drive_frequencies = {result.laser_freqs.first, result.laser_freqs.second};

    result.notes.push_back("coupling phase factor i absorbed into operator phases (gauge)");
    result.notes.push_back(
        "only the center-of-mass mode is compiled; more modes need additional lasers");
    if (!(target.gap < result.spec.mode_freqs[0]))
        result.notes.push_back("warning: detuning Omega is not small against omega0");
    return result;
}

struct CqedCompileResult {
    CqedSpec spec;
    std::vector<double> couplings;
    std::vector<std::pair<double, double>> drive_freqs;
    PhaseSchedule schedule;
    ValidityReport validity;
    std::vector<std::string> notes;
};

// eta_j = g/g0 per qubit, drive pairs from (epsilon, omega0, Omega_j), and
// the sampled phase pair phi1 = Phi, phi2 = -Phi.
inline CqedCompileResult compile_cqed(const SimTarget& target, int n_qubits, double qubit_energy,
                                      double cavity_freq, double bare_coupling,
                                      const std::vector<double>& tau_grid) {
    validate(target);
    if (n_qubits < 1) throw DomainError("compile_cqed: n_qubits must be >= 1");
    CqedCompileResult result;
    result.spec.qubit_energy = qubit_energy;
    result.spec.cavity_freq = cavity_freq;
    result.spec.bare_coupling = bare_coupling;
    result.spec.modulation_depths.assign(static_cast<std::size_t>(n_qubits),
                                         target.g / bare_coupling);
    result.spec.target_gaps.assign(static_cast<std::size_t>(n_qubits), target.gap);
    validate(result.spec);

    result.couplings = cqed_effective_coupling(result.spec);
    result.drive_freqs = cqed_drive_frequencies(result.spec);
    result.validity = cqed_validity(result.spec, target.alpha);
    result.schedule = phase_schedule(Worldline::uniform_acceleration(target.alpha),
                                     ModeSpec::massless(target.omega_field, 1), tau_grid);
    for (const auto& [d1, d2] : result.drive_freqs) {
        result.schedule.drive_frequencies.push_back(d1);
        result.schedule.drive_frequencies.push_back(d2);
        if (d1 <= 0.0 || d2 <= 0.0)
            result.notes.push_back("warning: nonpositive drive frequency emitted verbatim; "
                                   "physical interpretation is left to the user");
    }
    return result;
}

} // namespace rindler
