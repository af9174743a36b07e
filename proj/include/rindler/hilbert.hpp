#pragma once

// Composite Hilbert-space kernel: N two-level detectors tensor M truncated
// bosonic modes. Basis ordering is spin-major and fixed: the flat index is
//
//   flat = spin_code * prod_m (n_max[m]+1)  +  mode_code
//
// where spin_code packs detector 0 into the most significant bit
// (bit value 1 = excited |e>), and mode_code is the mixed-radix number of
// the occupations with mode 0 as the most significant digit. This ordering
// is part of the file-format contract; CSV dumps rely on it.

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "rindler/errors.hpp"

namespace rindler {

using Complex = std::complex<double>;

// Largest composite dimension we accept for state vectors; dense evolution
// beyond this is out of desk scale.
inline constexpr std::size_t kDimensionCap = std::size_t{1} << 18;

// Dense matrices (hamiltonian_at, expm propagator) reject earlier: a dim^2
// complex matrix at 2^18 would be ~1 TB.
inline constexpr std::size_t kDenseDimensionCap = 4096;

struct SpaceSpec {
    int n_detectors = 1;
    std::vector<int> mode_truncations; // n_max per mode; occupations 0..n_max

    int n_modes() const { return static_cast<int>(mode_truncations.size()); }

    bool operator==(const SpaceSpec&) const = default;
};

inline void validate(const SpaceSpec& space) {
    if (space.n_detectors < 1)
        throw ConfigError("SpaceSpec: n_detectors must be >= 1 (got " +
                          std::to_string(space.n_detectors) + ")");
    if (space.mode_truncations.empty())
        throw ConfigError("SpaceSpec: at least one mode is required");
    for (std::size_t m = 0; m < space.mode_truncations.size(); ++m)
        if (space.mode_truncations[m] < 1)
            throw ConfigError("SpaceSpec: mode " + std::to_string(m + 1) +
                              " must satisfy n_max >= 1 (got " +
                              std::to_string(space.mode_truncations[m]) + ")");
}

// Total dimension 2^N * prod_m (n_max,m + 1), guarded by kDimensionCap.
inline std::size_t dimension(const SpaceSpec& space) {
    validate(space);
    if (space.n_detectors >= 63)
        throw ConfigError("SpaceSpec: detector count overflows the dimension cap");
    std::size_t dim = std::size_t{1} << space.n_detectors;
    for (int n_max : space.mode_truncations) {
        const auto levels = static_cast<std::size_t>(n_max) + 1;
        if (dim > kDimensionCap / levels)
            throw ConfigError("SpaceSpec: dimension exceeds the cap of " +
                              std::to_string(kDimensionCap) + " states");
        dim *= levels;
    }
    return dim;
}

// Dimension of the bosonic factor only.
inline std::size_t mode_dimension(const SpaceSpec& space) {
    std::size_t dim = 1;
    for (int n_max : space.mode_truncations) dim *= static_cast<std::size_t>(n_max) + 1;
    return dim;
}

struct BasisIndex {
    std::vector<int> spin_bits;   // per detector: 0 = |g>, 1 = |e>
    std::vector<int> occupations; // per mode

    bool operator==(const BasisIndex&) const = default;
};

inline std::size_t flat_index(const SpaceSpec& space, const BasisIndex& basis) {
    if (static_cast<int>(basis.spin_bits.size()) != space.n_detectors ||
        basis.occupations.size() != space.mode_truncations.size())
        throw DomainError("flat_index: basis shape does not match space");
    std::size_t spin_code = 0;
    for (int j = 0; j < space.n_detectors; ++j) {
        const int bit = basis.spin_bits[static_cast<std::size_t>(j)];
        if (bit != 0 && bit != 1)
            throw DomainError("flat_index: spin bit of detector " + std::to_string(j + 1) +
                              " must be 0 or 1");
        spin_code = spin_code * 2 + static_cast<std::size_t>(bit);
    }
    std::size_t mode_code = 0;
    for (std::size_t m = 0; m < basis.occupations.size(); ++m) {
        const int n = basis.occupations[m];
        const int n_max = space.mode_truncations[m];
        if (n < 0 || n > n_max)
            throw DomainError("flat_index: occupation of mode " + std::to_string(m + 1) +
                              " out of range [0," + std::to_string(n_max) + "]");
        mode_code = mode_code * (static_cast<std::size_t>(n_max) + 1) + static_cast<std::size_t>(n);
    }
    return spin_code * mode_dimension(space) + mode_code;
}

inline BasisIndex unflatten(const SpaceSpec& space, std::size_t flat) {
    if (flat >= dimension(space)) throw DomainError("unflatten: index out of range");
    BasisIndex basis;
    basis.spin_bits.resize(static_cast<std::size_t>(space.n_detectors));
    basis.occupations.resize(space.mode_truncations.size());
    const std::size_t mode_dim = mode_dimension(space);
    std::size_t spin_code = flat / mode_dim;
    std::size_t mode_code = flat % mode_dim;
    for (int j = space.n_detectors - 1; j >= 0; --j) {
        basis.spin_bits[static_cast<std::size_t>(j)] = static_cast<int>(spin_code & 1);
        spin_code >>= 1;
    }
    for (int m = space.n_modes() - 1; m >= 0; --m) {
        const auto levels = static_cast<std::size_t>(space.mode_truncations[static_cast<std::size_t>(m)]) + 1;
        basis.occupations[static_cast<std::size_t>(m)] = static_cast<int>(mode_code % levels);
        mode_code /= levels;
    }
    return basis;
}

struct StateVector {
    SpaceSpec space;
    Eigen::VectorXcd amplitudes;

    std::size_t dim() const { return static_cast<std::size_t>(amplitudes.size()); }
};

// Stride helpers for ladder-operator index arithmetic.
namespace detail {

// |flat| changes by this much when detector j flips g -> e.
inline std::size_t detector_stride(const SpaceSpec& space, int j) {
    return (std::size_t{1} << (space.n_detectors - 1 - j)) * mode_dimension(space);
}

// |flat| changes by this much when mode m gains one quantum.
inline std::size_t mode_stride(const SpaceSpec& space, int m) {
    std::size_t stride = 1;
    for (int k = space.n_modes() - 1; k > m; --k)
        stride *= static_cast<std::size_t>(space.mode_truncations[static_cast<std::size_t>(k)]) + 1;
    return stride;
}

inline void check_detector(const SpaceSpec& space, int j) {
    if (j < 0 || j >= space.n_detectors)
        throw DomainError("detector index " + std::to_string(j + 1) + " out of range (1.." +
                          std::to_string(space.n_detectors) + ")");
}

inline void check_mode(const SpaceSpec& space, int m) {
    if (m < 0 || m >= space.n_modes())
        throw DomainError("mode index " + std::to_string(m + 1) + " out of range (1.." +
                          std::to_string(space.n_modes()) + ")");
}

} // namespace detail

inline StateVector zero_state(const SpaceSpec& space) {
    StateVector psi;
    psi.space = space;
    psi.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dimension(space)));
    return psi;
}

inline StateVector basis_state(const SpaceSpec& space, const BasisIndex& basis) {
    StateVector psi = zero_state(space);
    psi.amplitudes[static_cast<Eigen::Index>(flat_index(space, basis))] = 1.0;
    return psi;
}

// Detector 1 excited, everything else in the ground/vacuum state: the
// initial ket |e 0> of the single-detector decay problem.
inline StateVector excited_vacuum_state(const SpaceSpec& space) {
    BasisIndex basis;
    basis.spin_bits.assign(static_cast<std::size_t>(space.n_detectors), 0);
    basis.spin_bits[0] = 1;
    basis.occupations.assign(space.mode_truncations.size(), 0);
    return basis_state(space, basis);
}

inline Complex inner_product(const StateVector& bra, const StateVector& ket) {
    if (!(bra.space == ket.space))
        throw DomainError("inner_product: states live in different spaces");
    return bra.amplitudes.dot(ket.amplitudes); // conjugate-linear in the first argument
}

inline double norm(const StateVector& psi) { return psi.amplitudes.norm(); }

// sigma^+_j (unnormalized result): |g>_j -> |e>_j, |e>_j -> 0.
inline StateVector apply_sigma_plus(const StateVector& psi, int detector) {
    detail::check_detector(psi.space, detector);
    const std::size_t stride = detail::detector_stride(psi.space, detector);
    StateVector out = zero_state(psi.space);
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        if ((i / stride) % 2 == 0) // detector in |g>
            out.amplitudes[static_cast<Eigen::Index>(i + stride)] =
                psi.amplitudes[static_cast<Eigen::Index>(i)];
    }
    return out;
}

inline StateVector apply_sigma_minus(const StateVector& psi, int detector) {
    detail::check_detector(psi.space, detector);
    const std::size_t stride = detail::detector_stride(psi.space, detector);
    StateVector out = zero_state(psi.space);
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        if ((i / stride) % 2 == 1) // detector in |e>
            out.amplitudes[static_cast<Eigen::Index>(i - stride)] =
                psi.amplitudes[static_cast<Eigen::Index>(i)];
    }
    return out;
}

// a^dagger_m with hard truncation: a^dagger |n_max> = 0.
inline StateVector apply_create(const StateVector& psi, int mode) {
    detail::check_mode(psi.space, mode);
    const std::size_t stride = detail::mode_stride(psi.space, mode);
    const auto levels = static_cast<std::size_t>(
        psi.space.mode_truncations[static_cast<std::size_t>(mode)]) + 1;
    StateVector out = zero_state(psi.space);
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        const auto n = (i / stride) % levels;
        if (n + 1 < levels)
            out.amplitudes[static_cast<Eigen::Index>(i + stride)] =
                std::sqrt(static_cast<double>(n + 1)) *
                psi.amplitudes[static_cast<Eigen::Index>(i)];
    }
    return out;
}

// a_m: a|0> = 0, a|n> = sqrt(n)|n-1>.
inline StateVector apply_annihilate(const StateVector& psi, int mode) {
    detail::check_mode(psi.space, mode);
    const std::size_t stride = detail::mode_stride(psi.space, mode);
    const auto levels = static_cast<std::size_t>(
        psi.space.mode_truncations[static_cast<std::size_t>(mode)]) + 1;
    StateVector out = zero_state(psi.space);
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        const auto n = (i / stride) % levels;
        if (n > 0)
            out.amplitudes[static_cast<Eigen::Index>(i - stride)] =
                std::sqrt(static_cast<double>(n)) *
                psi.amplitudes[static_cast<Eigen::Index>(i)];
    }
    return out;
}

} // namespace rindler
