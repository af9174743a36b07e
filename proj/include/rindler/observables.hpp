#pragma once

// Projective and expectation-value readouts on StateVectors. Probabilities
// are never clamped inside computation; only output formatting clamps, so
// integrator drift stays visible in tests.

#include <functional>
#include <string>
#include <vector>

#include "rindler/hilbert.hpp"

namespace rindler {

struct ObservableSeries {
    std::string name;
    std::vector<double> values;
};

// P(detector j in |g>) = sum over basis kets with spin bit 0 of |amp|^2.
inline double ground_population(const StateVector& psi, int detector) {
    detail::check_detector(psi.space, detector);
    const std::size_t stride = detail::detector_stride(psi.space, detector);
    double p = 0.0;
    for (std::size_t i = 0; i < psi.dim(); ++i)
        if ((i / stride) % 2 == 0) p += std::norm(psi.amplitudes[static_cast<Eigen::Index>(i)]);
    return p;
}

inline double excited_population(const StateVector& psi, int detector) {
    detail::check_detector(psi.space, detector);
    const std::size_t stride = detail::detector_stride(psi.space, detector);
    double p = 0.0;
    for (std::size_t i = 0; i < psi.dim(); ++i)
        if ((i / stride) % 2 == 1) p += std::norm(psi.amplitudes[static_cast<Eigen::Index>(i)]);
    return p;
}

// <n_m> = sum over basis of n_m |amp|^2.
inline double mode_occupation(const StateVector& psi, int mode) {
    detail::check_mode(psi.space, mode);
    const std::size_t stride = detail::mode_stride(psi.space, mode);
    const auto levels =
        static_cast<std::size_t>(psi.space.mode_truncations[static_cast<std::size_t>(mode)]) + 1;
    double total = 0.0;
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        const auto n = (i / stride) % levels;
        if (n > 0)
            total += static_cast<double>(n) *
                     std::norm(psi.amplitudes[static_cast<Eigen::Index>(i)]);
    }
    return total;
}

// Probability table over the 2^N spin configurations, indexed by the spin
// code of the documented basis ordering (detector 1 most significant).
inline std::vector<double> joint_spin_distribution(const StateVector& psi) {
    const std::size_t mode_dim = mode_dimension(psi.space);
    const std::size_t n_configs = std::size_t{1} << psi.space.n_detectors;
    std::vector<double> table(n_configs, 0.0);
    for (std::size_t i = 0; i < psi.dim(); ++i)
        table[i / mode_dim] += std::norm(psi.amplitudes[static_cast<Eigen::Index>(i)]);
    return table;
}

// Named observable evaluated along an evolution.
struct Observer {
    std::string name;
    std::function<double(const StateVector&)> eval;
};

// Default recording set: p_ground per detector, <n> per mode.
inline std::vector<Observer> standard_observers(const SpaceSpec& space) {
    std::vector<Observer> observers;
    for (int j = 0; j < space.n_detectors; ++j)
        observers.push_back({"p_ground_" + std::to_string(j + 1),
                             [j](const StateVector& psi) { return ground_population(psi, j); }});
    for (int m = 0; m < space.n_modes(); ++m)
        observers.push_back({"n_mode_" + std::to_string(m + 1),
                             [m](const StateVector& psi) { return mode_occupation(psi, m); }});
    return observers;
}

} // namespace rindler
