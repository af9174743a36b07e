#pragma once

// Worldlines and the field phase Phi_m(tau) they induce. Uniformly
// accelerated detectors sit at constant Rindler position xi = c^2/a, where
// the phase collapses to the closed form -(omega_m/alpha) e^{-alpha tau};
// inertial and sampled worldlines route through the general
// omega_m t(tau) - k_m x(tau) form.
//
// Units: hbar = 1, frequencies in a common reference unit Omega_ref,
// times in 1/Omega_ref, positions in c/Omega_ref. c appears explicitly only
// in the kinematic helpers.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rindler/errors.hpp"

namespace rindler {

struct ModeSpec {
    double omega = 0.0;      // angular frequency, units of Omega_ref
    double k = 0.0;          // wavenumber, units of Omega_ref/c
    int n_max = 1;           // Fock truncation
    double phase_offset = 0.0; // constant added to Phi; gauge freedom

    // Massless dispersion omega = c k, the paper's assumption.
    static ModeSpec massless(double omega, int n_max, double c = 1.0) {
        if (omega <= 0.0) throw DomainError("ModeSpec: omega must be > 0");
        ModeSpec mode;
        mode.omega = omega;
        mode.k = omega / c;
        mode.n_max = n_max;
        return mode;
    }
};

// Piecewise-cubic Hermite interpolation with Fritsch-Carlson slope limiting.
// Monotone data stays monotone: no overshoot, which matters because these
// curves feed oscillatory phase integrands.
class MonotoneCubic {
public:
    MonotoneCubic() = default;

    MonotoneCubic(std::vector<double> xs, std::vector<double> ys)
        : xs_(std::move(xs)), ys_(std::move(ys)) {
        const std::size_t n = xs_.size();
        if (n < 2 || ys_.size() != n)
            throw DomainError("MonotoneCubic: need >= 2 samples of equal length");
        for (std::size_t i = 1; i < n; ++i)
            if (!(xs_[i] > xs_[i - 1]))
                throw DomainError("MonotoneCubic: sample grid must be strictly increasing");

        std::vector<double> secant(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i)
            secant[i] = (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]);

        slope_.assign(n, 0.0);
        slope_.front() = secant.front();
        slope_.back() = secant.back();
        for (std::size_t i = 1; i + 1 < n; ++i)
            slope_[i] = (secant[i - 1] * secant[i] <= 0.0)
                            ? 0.0
                            : 0.5 * (secant[i - 1] + secant[i]);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (secant[i] == 0.0) {
                slope_[i] = 0.0;
                slope_[i + 1] = 0.0;
                continue;
            }
            const double a = slope_[i] / secant[i];
            const double b = slope_[i + 1] / secant[i];
            const double s = a * a + b * b;
            if (s > 9.0) {
                const double t = 3.0 / std::sqrt(s);
                slope_[i] = t * a * secant[i];
                slope_[i + 1] = t * b * secant[i];
            }
        }
    }

    double x_min() const { return xs_.front(); }
    double x_max() const { return xs_.back(); }

    double operator()(double x) const {
        const std::size_t i = locate(x);
        const double h = xs_[i + 1] - xs_[i];
        const double t = (x - xs_[i]) / h;
        const double t2 = t * t;
        const double t3 = t2 * t;
        const double h00 = 2 * t3 - 3 * t2 + 1;
        const double h10 = t3 - 2 * t2 + t;
        const double h01 = -2 * t3 + 3 * t2;
        const double h11 = t3 - t2;
        return h00 * ys_[i] + h10 * h * slope_[i] + h01 * ys_[i + 1] + h11 * h * slope_[i + 1];
    }

private:
    std::size_t locate(double x) const {
        if (x < xs_.front() || x > xs_.back())
            throw DomainError("MonotoneCubic: argument " + std::to_string(x) +
                              " outside sampled range [" + std::to_string(xs_.front()) + ", " +
                              std::to_string(xs_.back()) + "]");
        auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
        std::size_t i = static_cast<std::size_t>(it - xs_.begin());
        if (i > 0) --i;
        if (i + 1 >= xs_.size()) i = xs_.size() - 2;
        return i;
    }

    std::vector<double> xs_, ys_, slope_;
};

struct UniformAcceleration {
    double alpha = 0.0; // a/c, inverse time
    // Detector at constant Rindler position xi = c^2/a.
};

struct Inertial {
    double velocity = 0.0; // fraction of c
    double x0 = 0.0;       // position at tau = 0, units of c/Omega_ref
};

struct CustomSampled {
    std::vector<double> tau;
    MonotoneCubic t_of_tau;
    MonotoneCubic x_of_tau;
};

class Worldline {
public:
    using Variant = std::variant<UniformAcceleration, Inertial, CustomSampled>;

    static Worldline uniform_acceleration(double alpha) {
        if (!(alpha > 0.0))
            throw DomainError("Worldline: uniform acceleration requires alpha > 0");
        return Worldline(UniformAcceleration{alpha});
    }

    static Worldline inertial(double velocity, double x0 = 0.0) {
        if (!(std::abs(velocity) < 1.0))
            throw DomainError("Worldline: inertial velocity must satisfy |v| < 1 (in units of c)");
        return Worldline(Inertial{velocity, x0});
    }

    // Samples (tau_i, t_i, x_i). Rejects non-monotone grids and superluminal
    // segments |dx| > c|dt|.
    static Worldline custom_sampled(std::vector<double> tau, std::vector<double> t,
                                    std::vector<double> x, double c = 1.0) {
        const std::size_t n = tau.size();
        if (n < 2 || t.size() != n || x.size() != n)
            throw DomainError("Worldline: custom samples need >= 2 rows of (tau, t, x)");
        for (std::size_t i = 1; i < n; ++i) {
            if (!(tau[i] > tau[i - 1]))
                throw DomainError("Worldline: tau samples must be strictly increasing");
            if (!(t[i] > t[i - 1]))
                throw DomainError("Worldline: coordinate time samples must be strictly increasing");
            if (std::abs(x[i] - x[i - 1]) > c * (t[i] - t[i - 1]) * (1.0 + 1e-12))
                throw DomainError("Worldline: superluminal segment between samples " +
                                  std::to_string(i) + " and " + std::to_string(i + 1));
        }
        CustomSampled custom;
        custom.t_of_tau = MonotoneCubic(tau, std::move(t));
        custom.x_of_tau = MonotoneCubic(tau, std::move(x));
        custom.tau = std::move(tau);
        return Worldline(std::move(custom));
    }

    const Variant& variant() const { return variant_; }

    bool is_uniform_acceleration() const {
        return std::holds_alternative<UniformAcceleration>(variant_);
    }

    double alpha() const {
        if (auto* ua = std::get_if<UniformAcceleration>(&variant_)) return ua->alpha;
        throw DomainError("Worldline: alpha is defined only for uniform acceleration");
    }

private:
    explicit Worldline(Variant v) : variant_(std::move(v)) {}
    Variant variant_;
};

// Rindler -> Minkowski map at Rindler position xi: ct = xi sinh(alpha tau),
// x = xi cosh(alpha tau). Satisfies x^2 - (ct)^2 = xi^2 identically.
inline std::pair<double, double> rindler_to_minkowski(double tau, double xi, double alpha,
                                                      double c = 1.0) {
    if (!(xi > 0.0)) throw DomainError("rindler_to_minkowski: xi must be > 0");
    const double t = xi * std::sinh(alpha * tau) / c;
    const double x = xi * std::cosh(alpha * tau);
    return {t, x};
}

// Field phase Phi_m(tau) along the worldline.
inline double phase(const Worldline& worldline, const ModeSpec& mode, double tau) {
    return std::visit(
        [&](const auto& w) -> double {
            using W = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<W, UniformAcceleration>) {
                return -(mode.omega / w.alpha) * std::exp(-w.alpha * tau) + mode.phase_offset;
            } else if constexpr (std::is_same_v<W, Inertial>) {
                const double gamma = 1.0 / std::sqrt(1.0 - w.velocity * w.velocity);
                const double t = gamma * tau;
                const double x = w.x0 + w.velocity * gamma * tau;
                return mode.omega * t - mode.k * x + mode.phase_offset;
            } else {
                return mode.omega * w.t_of_tau(tau) - mode.k * w.x_of_tau(tau) +
                       mode.phase_offset;
            }
        },
        worldline.variant());
}

// d Phi / d tau. Analytic for the closed-form worldlines; central finite
// difference (h = 1e-6 max(1,|tau|)) for sampled ones.
inline double effective_frequency(const Worldline& worldline, const ModeSpec& mode, double tau) {
    return std::visit(
        [&](const auto& w) -> double {
            using W = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<W, UniformAcceleration>) {
                return mode.omega * std::exp(-w.alpha * tau);
            } else if constexpr (std::is_same_v<W, Inertial>) {
                const double gamma = 1.0 / std::sqrt(1.0 - w.velocity * w.velocity);
                return gamma * (mode.omega - mode.k * w.velocity);
            } else {
                const double h = 1e-6 * std::max(1.0, std::abs(tau));
                return (phase(worldline, mode, tau + h) - phase(worldline, mode, tau - h)) /
                       (2.0 * h);
            }
        },
        worldline.variant());
}

// Small-acceleration expansion of the uniform-acceleration phase:
//   Phi ~ -omega/alpha + omega tau - (1/2) omega alpha tau^2.
// The constant -omega/alpha is kept by default so exact and expanded phases
// are directly comparable; pass absorb_constant to drop it (the gauge where
// it is absorbed into the particle operators).
inline double nonrelativistic_phase(const ModeSpec& mode, double alpha, double tau,
                                    bool absorb_constant = false) {
    if (!(alpha > 0.0)) throw DomainError("nonrelativistic_phase: alpha must be > 0");
    const double constant = absorb_constant ? 0.0 : -mode.omega / alpha;
    return constant + mode.omega * tau - 0.5 * mode.omega * alpha * tau * tau;
}

// Equivalent acceleration frequency near a black-hole horizon:
// a ~ kappa/sqrt(f0), so alpha = kappa/(c sqrt(f0)).
inline double alpha_from_black_hole(double kappa, double f0, double c = 1.0) {
    if (!(kappa > 0.0)) throw DomainError("alpha_from_black_hole: kappa must be > 0");
    if (!(f0 > 0.0) || f0 > 1.0)
        throw DomainError("alpha_from_black_hole: redshift factor f0 must lie in (0, 1]");
    if (f0 < 1e-12)
        throw DomainError("alpha_from_black_hole: f0 < 1e-12 rejected (alpha would diverge)");
    return kappa / (c * std::sqrt(f0));
}

// Loads a custom worldline from comma-separated numeric text:
// three columns (tau, t, x), or two columns (tau, x) with t = tau.
inline Worldline worldline_from_csv(const std::string& path, double c = 1.0) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open worldline file '" + path + "'");
    std::vector<double> tau, t, x;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double a, b, d;
        if (row >> a >> b) {
            if (row >> d) {
                tau.push_back(a);
                t.push_back(b);
                x.push_back(d);
            } else {
                tau.push_back(a);
                t.push_back(a);
                x.push_back(b);
            }
        } else {
            throw IoError("worldline file '" + path + "': cannot parse line " +
                          std::to_string(lineno));
        }
    }
    return Worldline::custom_sampled(std::move(tau), std::move(t), std::move(x), c);
}

} // namespace rindler
