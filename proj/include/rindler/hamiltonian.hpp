#pragma once

// The comoving-frame interaction Hamiltonian
//
//   H_I(tau) = sum_{jm} g_{jm} (sigma^+_j e^{i Omega_j tau} + H.c.)
//                             (a^dagger_m e^{i Phi_m(tau)} + H.c.)
//
// assembled over the composite space, in dense and matrix-free forms.
// All four product terms are kept; counter-rotating terms matter here and a
// rotating-wave approximation is valid only as a diagnostics mode.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "rindler/hilbert.hpp"
#include "rindler/trajectory.hpp"

namespace rindler {

struct DetectorSpec {
    double gap = 1.0; // Omega_j, units of Omega_ref
    Worldline worldline = Worldline::uniform_acceleration(1.0);
};

struct ModelSpec {
    std::vector<DetectorSpec> detectors;
    std::vector<ModeSpec> modes;
    Eigen::MatrixXd couplings; // g_{jm}, real >= 0; N x M
    // Diagnostics only: drop the counter-rotating sigma+ a^dagger / sigma- a
    // terms. Never used in acceptance runs.
    bool rwa_diagnostic = false;

    SpaceSpec space() const {
        SpaceSpec s;
        s.n_detectors = static_cast<int>(detectors.size());
        s.mode_truncations.reserve(modes.size());
        for (const auto& mode : modes) s.mode_truncations.push_back(mode.n_max);
        return s;
    }
};

inline void validate(const ModelSpec& model) {
    if (model.detectors.empty()) throw ConfigError("ModelSpec: at least one detector required");
    if (model.modes.empty()) throw ConfigError("ModelSpec: at least one mode required");
    for (std::size_t j = 0; j < model.detectors.size(); ++j)
        if (!(model.detectors[j].gap > 0.0))
            throw ConfigError("ModelSpec: detector " + std::to_string(j + 1) +
                              " must satisfy gap > 0");
    for (std::size_t m = 0; m < model.modes.size(); ++m) {
        if (!(model.modes[m].omega > 0.0))
            throw ConfigError("ModelSpec: mode " + std::to_string(m + 1) +
                              " must satisfy omega > 0");
        if (model.modes[m].n_max < 1)
            throw ConfigError("ModelSpec: mode " + std::to_string(m + 1) +
                              " must satisfy n_max >= 1");
    }
    if (model.couplings.rows() != static_cast<Eigen::Index>(model.detectors.size()) ||
        model.couplings.cols() != static_cast<Eigen::Index>(model.modes.size()))
        throw ConfigError("ModelSpec: coupling matrix must be (detectors x modes)");
    for (Eigen::Index j = 0; j < model.couplings.rows(); ++j)
        for (Eigen::Index m = 0; m < model.couplings.cols(); ++m) {
            const double g = model.couplings(j, m);
            if (!std::isfinite(g) || g < 0.0)
                throw ConfigError("ModelSpec: coupling g[" + std::to_string(j + 1) + "][" +
                                  std::to_string(m + 1) + "] must be finite and >= 0");
        }
    dimension(model.space());
}

namespace detail {

// Per-(j,m) phase factors of the two independent operator terms at a given
// tau. With A = sum_jm g (e^{i(Omega tau + Phi)} sigma+ adag
//                       + e^{i(Omega tau - Phi)} sigma+ a),
// the full Hamiltonian is H = A + A^dagger.
struct TermPhases {
    Complex up_create;     // sigma^+_j a^dagger_m  (counter-rotating)
    Complex up_annihilate; // sigma^+_j a_m         (co-rotating)
};

inline TermPhases term_phases(const ModelSpec& model, std::size_t j, std::size_t m, double tau) {
    const double phi = phase(model.detectors[j].worldline, model.modes[m], tau);
    const double gap_phase = model.detectors[j].gap * tau;
    TermPhases phases;
    phases.up_create = std::polar(1.0, gap_phase + phi);
    phases.up_annihilate = std::polar(1.0, gap_phase - phi);
    return phases;
}

} // namespace detail

// Dense H_I(tau). Exactly Hermitian: built as A + A^dagger from one triangle
// of operator terms. Rejects dimensions past the dense cap.
inline Eigen::MatrixXcd hamiltonian_at(const ModelSpec& model, double tau) {
    validate(model);
    const SpaceSpec space = model.space();
    const std::size_t dim = dimension(space);
    if (dim > kDenseDimensionCap)
        throw ConfigError("hamiltonian_at: dimension " + std::to_string(dim) +
                          " exceeds the dense cap of " + std::to_string(kDenseDimensionCap) +
                          " (use the matrix-free path)");
    const auto n = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXcd upper = Eigen::MatrixXcd::Zero(n, n);

    for (std::size_t j = 0; j < model.detectors.size(); ++j) {
        const std::size_t det_stride = detail::detector_stride(space, static_cast<int>(j));
        for (std::size_t m = 0; m < model.modes.size(); ++m) {
            const double g = model.couplings(static_cast<Eigen::Index>(j),
                                             static_cast<Eigen::Index>(m));
            if (g == 0.0) continue;
            const std::size_t mode_stride = detail::mode_stride(space, static_cast<int>(m));
            const auto levels =
                static_cast<std::size_t>(space.mode_truncations[m]) + 1;
            const auto phases = detail::term_phases(model, j, m, tau);
            const Complex c_create = model.rwa_diagnostic ? Complex{0.0} : g * phases.up_create;
            const Complex c_annihilate = g * phases.up_annihilate;

            for (std::size_t i = 0; i < dim; ++i) {
                if ((i / det_stride) % 2 != 0) continue; // need detector j in |g>
                const auto occ = (i / mode_stride) % levels;
                if (occ + 1 < levels) // sigma+ adag
                    upper(static_cast<Eigen::Index>(i + det_stride + mode_stride),
                          static_cast<Eigen::Index>(i)) +=
                        c_create * std::sqrt(static_cast<double>(occ + 1));
                if (occ > 0) // sigma+ a
                    upper(static_cast<Eigen::Index>(i + det_stride - mode_stride),
                          static_cast<Eigen::Index>(i)) +=
                        c_annihilate * std::sqrt(static_cast<double>(occ));
            }
        }
    }
    return upper + upper.adjoint();
}

namespace detail {

// Matrix-free y = H(tau) x over preallocated vectors; the integrator hot path.
inline void apply_hamiltonian_inplace(const ModelSpec& model, double tau,
                                      const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
    const SpaceSpec space = model.space();
    const std::size_t dim = static_cast<std::size_t>(x.size());
    y.setZero();

    for (std::size_t j = 0; j < model.detectors.size(); ++j) {
        const std::size_t det_stride = detector_stride(space, static_cast<int>(j));
        for (std::size_t m = 0; m < model.modes.size(); ++m) {
            const double g = model.couplings(static_cast<Eigen::Index>(j),
                                             static_cast<Eigen::Index>(m));
            if (g == 0.0) continue;
            const std::size_t mode_stride = detail::mode_stride(space, static_cast<int>(m));
            const auto levels = static_cast<std::size_t>(space.mode_truncations[m]) + 1;
            const auto phases = term_phases(model, j, m, tau);
            const Complex c_create = model.rwa_diagnostic ? Complex{0.0} : g * phases.up_create;
            const Complex c_annihilate = g * phases.up_annihilate;
            const Complex c_create_adj = std::conj(c_create);
            const Complex c_annihilate_adj = std::conj(c_annihilate);

            for (std::size_t i = 0; i < dim; ++i) {
                const Complex amp = x[static_cast<Eigen::Index>(i)];
                if (amp == Complex{0.0}) continue;
                const auto occ = (i / mode_stride) % levels;
                if ((i / det_stride) % 2 == 0) { // detector j in |g>
                    if (occ + 1 < levels)
                        y[static_cast<Eigen::Index>(i + det_stride + mode_stride)] +=
                            c_create * std::sqrt(static_cast<double>(occ + 1)) * amp;
                    if (occ > 0)
                        y[static_cast<Eigen::Index>(i + det_stride - mode_stride)] +=
                            c_annihilate * std::sqrt(static_cast<double>(occ)) * amp;
                } else { // |e>: adjoint terms sigma- a and sigma- adag
                    if (occ > 0)
                        y[static_cast<Eigen::Index>(i - det_stride - mode_stride)] +=
                            c_create_adj * std::sqrt(static_cast<double>(occ)) * amp;
                    if (occ + 1 < levels)
                        y[static_cast<Eigen::Index>(i - det_stride + mode_stride)] +=
                            c_annihilate_adj * std::sqrt(static_cast<double>(occ + 1)) * amp;
                }
            }
        }
    }
}

} // namespace detail

// H(tau) psi without forming the dense matrix.
inline StateVector apply_hamiltonian(const ModelSpec& model, double tau, const StateVector& psi) {
    validate(model);
    if (!(psi.space == model.space()))
        throw DomainError("apply_hamiltonian: state space does not match the model");
    StateVector out;
    out.space = psi.space;
    out.amplitudes.resize(psi.amplitudes.size());
    detail::apply_hamiltonian_inplace(model, tau, psi.amplitudes, out.amplitudes);
    return out;
}

// Uniform bound sum_jm 2 g_jm sqrt(n_max,m + 1) on ||H(tau)||; used to sanity
// check integrator step sizes.
inline double hamiltonian_norm_bound(const ModelSpec& model) {
    double bound = 0.0;
    for (Eigen::Index j = 0; j < model.couplings.rows(); ++j)
        for (Eigen::Index m = 0; m < model.couplings.cols(); ++m)
            bound += 2.0 * model.couplings(j, m) *
                     std::sqrt(static_cast<double>(model.modes[static_cast<std::size_t>(m)].n_max) + 1.0);
    return bound;
}

} // namespace rindler
