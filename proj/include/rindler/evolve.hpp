#pragma once

// Fixed-step integration of the proper-time Schrodinger equation
// i d/dtau psi = H_I(tau) psi.
//
// rk4_fixed is the production method; piecewise_expm_midpoint (exact matrix
// exponential of the midpoint-frozen Hamiltonian) is the verification oracle.
// The state is never renormalized during evolution: norm drift is measured
// and reported, not hidden.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "rindler/hamiltonian.hpp"
#include "rindler/observables.hpp"

namespace rindler {

enum class Method { rk4_fixed, piecewise_expm_midpoint };

inline constexpr int kDefaultStepsPerPeriod = 128;
inline constexpr int kDefaultRecordTarget = 5000;

struct IntegratorConfig {
    Method method = Method::rk4_fixed;
    double dt = 0.0;          // <= 0: use default_dt
    int record_stride = 0;    // <= 0: auto, ~kDefaultRecordTarget rows
    double norm_tolerance = 1e-8;
    int steps_per_period = kDefaultStepsPerPeriod; // for the default dt rule
};

struct EvolutionResult {
    std::vector<double> times;
    std::vector<ObservableSeries> observables; // last series is the norm
    StateVector final_state;
    double norm_drift = 0.0; // max | ||psi|| - 1 | observed
};

// Fastest phase present in the integrand: max over the span of
// (|omega_eff| + max_j Omega_j). For uniform acceleration omega_eff is
// maximal at tau0; sampled worldlines are scanned.
inline double fastest_frequency(const ModelSpec& model, double tau0, double tau1) {
    double max_gap = 0.0;
    for (const auto& det : model.detectors) max_gap = std::max(max_gap, det.gap);
    double max_omega_eff = 0.0;
    for (const auto& det : model.detectors) {
        for (const auto& mode : model.modes) {
            double local = 0.0;
            if (std::holds_alternative<CustomSampled>(det.worldline.variant())) {
                const int samples = 1024;
                for (int s = 0; s <= samples; ++s) {
                    const double tau = tau0 + (tau1 - tau0) * s / samples;
                    local = std::max(local,
                                     std::abs(effective_frequency(det.worldline, mode, tau)));
                }
            } else {
                local = std::max(std::abs(effective_frequency(det.worldline, mode, tau0)),
                                 std::abs(effective_frequency(det.worldline, mode, tau1)));
            }
            max_omega_eff = std::max(max_omega_eff, local);
        }
    }
    return max_omega_eff + max_gap;
}

// Default step: steps_per_period points per fastest oscillation period.
inline double default_dt(const ModelSpec& model, double tau0, double tau1,
                         int steps_per_period = kDefaultStepsPerPeriod) {
    const double omega_fast = fastest_frequency(model, tau0, tau1);
    if (!(omega_fast > 0.0)) return (tau1 - tau0) / 1000.0;
    return (2.0 * M_PI / omega_fast) / steps_per_period;
}

namespace detail {

struct Rk4Workspace {
    Eigen::VectorXcd k1, k2, k3, k4, tmp;
    void resize(Eigen::Index n) {
        k1.resize(n);
        k2.resize(n);
        k3.resize(n);
        k4.resize(n);
        tmp.resize(n);
    }
};

inline void rk4_step_inplace(const ModelSpec& model, double tau, double dt,
                             Eigen::VectorXcd& psi, Rk4Workspace& ws) {
    const Complex minus_i{0.0, -1.0};
    apply_hamiltonian_inplace(model, tau, psi, ws.k1);
    ws.k1 *= minus_i;
    ws.tmp = psi + (0.5 * dt) * ws.k1;
    apply_hamiltonian_inplace(model, tau + 0.5 * dt, ws.tmp, ws.k2);
    ws.k2 *= minus_i;
    ws.tmp = psi + (0.5 * dt) * ws.k2;
    apply_hamiltonian_inplace(model, tau + 0.5 * dt, ws.tmp, ws.k3);
    ws.k3 *= minus_i;
    ws.tmp = psi + dt * ws.k3;
    apply_hamiltonian_inplace(model, tau + dt, ws.tmp, ws.k4);
    ws.k4 *= minus_i;
    psi += (dt / 6.0) * (ws.k1 + 2.0 * ws.k2 + 2.0 * ws.k3 + ws.k4);
}

} // namespace detail

// One classical RK4 step of i psi' = H psi. dt may be negative (time-reversed
// integration).
inline void rk4_step(const ModelSpec& model, double tau, double dt, StateVector& psi) {
    detail::Rk4Workspace ws;
    ws.resize(psi.amplitudes.size());
    detail::rk4_step_inplace(model, tau, dt, psi.amplitudes, ws);
}

// Midpoint-frozen exponential propagator U = exp(-i H(tau + dt/2) dt),
// computed from the exact eigendecomposition of the Hermitian matrix.
inline Eigen::MatrixXcd propagator_step_expm(const ModelSpec& model, double tau, double dt) {
    const Eigen::MatrixXcd h = hamiltonian_at(model, tau + 0.5 * dt);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
    const Eigen::VectorXd& lambda = eig.eigenvalues();
    Eigen::VectorXcd exp_phase(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i)
        exp_phase[i] = std::polar(1.0, -lambda[i] * dt);
    return eig.eigenvectors() * exp_phase.asDiagonal() * eig.eigenvectors().adjoint();
}

inline EvolutionResult evolve(const ModelSpec& model, const StateVector& initial, double tau0,
                              double tau1, const IntegratorConfig& config,
                              const std::vector<Observer>& observers) {
    validate(model);
    if (!(initial.space == model.space()))
        throw DomainError("evolve: initial state space does not match the model");
    if (!(tau1 > tau0)) throw DomainError("evolve: tau span must satisfy tau1 > tau0");
    if (std::abs(norm(initial) - 1.0) > 1e-10)
        throw DomainError("evolve: initial state must be normalized");
    if (!(config.norm_tolerance > 0.0))
        throw ConfigError("evolve: norm_tolerance must be > 0");

    const double dt_req =
        config.dt > 0.0 ? config.dt : default_dt(model, tau0, tau1, config.steps_per_period);
    const auto n_steps = static_cast<std::size_t>(std::ceil((tau1 - tau0) / dt_req));
    const double dt = (tau1 - tau0) / static_cast<double>(n_steps);
    const std::size_t stride =
        config.record_stride > 0
            ? static_cast<std::size_t>(config.record_stride)
            : std::max<std::size_t>(1, n_steps / kDefaultRecordTarget);

    const bool use_expm = config.method == Method::piecewise_expm_midpoint;
    if (use_expm && dimension(model.space()) > kDenseDimensionCap)
        throw ConfigError("evolve: piecewise_expm_midpoint needs dimension <= " +
                          std::to_string(kDenseDimensionCap));

    EvolutionResult result;
    result.observables.reserve(observers.size() + 1);
    for (const auto& obs : observers) result.observables.push_back({obs.name, {}});
    result.observables.push_back({"norm", {}});

    StateVector psi = initial;
    detail::Rk4Workspace ws;
    if (!use_expm) ws.resize(psi.amplitudes.size());

    double norm_drift = 0.0;
    auto record = [&](double tau) {
        result.times.push_back(tau);
        for (std::size_t o = 0; o < observers.size(); ++o)
            result.observables[o].values.push_back(observers[o].eval(psi));
        result.observables.back().values.push_back(norm(psi));
    };

    record(tau0);
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double tau = tau0 + static_cast<double>(k) * dt;
        if (use_expm)
            psi.amplitudes = propagator_step_expm(model, tau, dt) * psi.amplitudes;
        else
            detail::rk4_step_inplace(model, tau, dt, psi.amplitudes, ws);

        const double tau_next = tau0 + static_cast<double>(k + 1) * dt;
        const double drift = std::abs(norm(psi) - 1.0);
        norm_drift = std::max(norm_drift, drift);
        if (drift > config.norm_tolerance)
            throw AccuracyError("evolve: norm drift " + std::to_string(drift) +
                                " exceeds tolerance " + std::to_string(config.norm_tolerance) +
                                " at tau = " + std::to_string(tau_next));
        if ((k + 1) % stride == 0 || k + 1 == n_steps) record(tau_next);
    }

    result.final_state = std::move(psi);
    result.norm_drift = norm_drift;
    return result;
}

inline EvolutionResult evolve(const ModelSpec& model, const StateVector& initial, double tau0,
                              double tau1, const IntegratorConfig& config = {}) {
    return evolve(model, initial, tau0, tau1, config, standard_observers(model.space()));
}

struct ConvergenceRow {
    int n_max = 0;
    double p_ground_final = 0.0;
    double delta_from_previous = 0.0; // |P(this) - P(previous row)|; 0 for the first row
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    bool converged = false; // last successive difference < threshold
    double threshold = 1e-4;
};

// Re-runs the same evolution at increasing single-mode-family truncations and
// tabulates the final ground population of detector 1. The initial ket is
// given as a BasisIndex so it can be rebuilt in each truncated space.
inline ConvergenceReport convergence_check(const ModelSpec& model, const BasisIndex& initial,
                                           double tau0, double tau1,
                                           const IntegratorConfig& config,
                                           const std::vector<int>& truncations,
                                           double threshold = 1e-4) {
    if (truncations.empty()) throw ConfigError("convergence_check: empty truncation list");
    for (std::size_t i = 1; i < truncations.size(); ++i)
        if (truncations[i] <= truncations[i - 1])
            throw ConfigError("convergence_check: truncations must be strictly increasing");

    ConvergenceReport report;
    report.threshold = threshold;
    for (int n_max : truncations) {
        ModelSpec trial = model;
        for (auto& mode : trial.modes) mode.n_max = n_max;
        const SpaceSpec space = trial.space();
        for (std::size_t m = 0; m < initial.occupations.size(); ++m)
            if (initial.occupations[m] > n_max)
                throw ConfigError("convergence_check: initial occupation exceeds n_max = " +
                                  std::to_string(n_max));
        const StateVector psi0 = basis_state(space, initial);
        const auto result = evolve(trial, psi0, tau0, tau1, config, {});
        ConvergenceRow row;
        row.n_max = n_max;
        row.p_ground_final = ground_population(result.final_state, 0);
        row.delta_from_previous =
            report.rows.empty() ? 0.0
                                : std::abs(row.p_ground_final - report.rows.back().p_ground_final);
        report.rows.push_back(row);
    }
    report.converged =
        report.rows.size() > 1 && report.rows.back().delta_from_previous < threshold;
    return report;
}

} // namespace rindler
