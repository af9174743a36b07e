#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "rindler/landau_zener.hpp"

using namespace rindler;

namespace {
const LzSetup kFigSetup{0.01, 1.33, 1.0, 1e-3};
}

TEST_CASE("effective energy gap") {
    CHECK(energy_gap(kFigSetup, 0.0) == Catch::Approx(0.33));
    CHECK(energy_gap(kFigSetup, crossing_time(kFigSetup)) ==
          Catch::Approx(0.0).margin(1e-12 * 1.33));
    // Frozen: 1.33 e^{-1} - 1 at tau = 1e3/Omega.
    CHECK(energy_gap(kFigSetup, 1e3) == Catch::Approx(-0.5107203432419817).epsilon(1e-14));
}

TEST_CASE("crossing time") {
    SECTION("omega0 = e Omega, alpha = 1 crosses at tau = 1") {
        const LzSetup setup{0.01, std::exp(1.0), 1.0, 1.0};
        CHECK(crossing_time(setup) == Catch::Approx(1.0).epsilon(1e-15));
    }

    SECTION("frozen fig-2 value") {
        CHECK(crossing_time(kFigSetup) == Catch::Approx(285.17894223366244).epsilon(1e-14));
    }

    SECTION("no crossing below the gap") {
        const LzSetup setup{0.01, 0.9, 1.0, 1e-3};
        CHECK_THROWS_AS(crossing_time(setup), DomainError);
        bool warn = false;
        CHECK_THROWS_AS(crossing_time(setup, &warn), DomainError);
    }

    SECTION("boundary omega0 == Omega: rejected strictly, warned when allowed") {
        const LzSetup setup{0.01, 1.0, 1.0, 1e-3};
        CHECK_THROWS_AS(crossing_time(setup), DomainError);
        bool warn = false;
        CHECK(crossing_time(setup, &warn) == 0.0);
        CHECK(warn);
    }
}

TEST_CASE("lz gamma") {
    SECTION("fig-2 normalization: g = 0.01, alpha = 1e-4 gives Gamma = 1") {
        const LzSetup setup{0.01, 1.33, 1.0, 1e-4};
        CHECK(lz_gamma(setup) == Catch::Approx(1.0).epsilon(1e-14));
    }

    SECTION("zero coupling") {
        const LzSetup setup{0.0, 1.33, 1.0, 1e-4};
        CHECK(lz_gamma(setup) == 0.0);
    }

    SECTION("doubling g quadruples Gamma") {
        LzSetup doubled = kFigSetup;
        doubled.g = 2.0 * kFigSetup.g;
        CHECK(lz_gamma(doubled) == 4.0 * lz_gamma(kFigSetup));
    }

    SECTION("dimensionless: invariant under common rescaling") {
        std::mt19937 rng(2024);
        std::uniform_real_distribution<double> uniform(0.1, 10.0);
        for (int trial = 0; trial < 20; ++trial) {
            const double lambda = uniform(rng);
            const LzSetup scaled{kFigSetup.g * lambda, kFigSetup.omega0 * lambda,
                                 kFigSetup.gap * lambda, kFigSetup.alpha * lambda};
            CHECK(lz_gamma(scaled) == Catch::Approx(lz_gamma(kFigSetup)).epsilon(1e-13));
            CHECK(crossing_time(scaled) ==
                  Catch::Approx(crossing_time(kFigSetup) / lambda).epsilon(1e-13));
        }
    }
}

TEST_CASE("slope of the gap at the crossing is -alpha Omega") {
    const double tau_c = crossing_time(kFigSetup);
    const double analytic = -kFigSetup.alpha * kFigSetup.gap;
    const double h = 1e-3 / kFigSetup.alpha * 1e-3;
    const double fd = (energy_gap(kFigSetup, tau_c + h) - energy_gap(kFigSetup, tau_c - h)) /
                      (2.0 * h);
    CHECK(fd == Catch::Approx(analytic).epsilon(1e-6));
}

TEST_CASE("lz probability") {
    SECTION("no crossing dynamics at Gamma = 0") {
        CHECK(lz_probability(0.0) == std::pair{1.0, 0.0});
    }

    SECTION("frozen Gamma = 1 values") {
        const auto [p_excited, p_ground] = lz_probability(1.0);
        CHECK(p_excited == Catch::Approx(0.0018674427317079893).epsilon(1e-14));
        CHECK(p_ground == Catch::Approx(0.998132557268292).epsilon(1e-14));
    }

    SECTION("adiabatic limit") {
        const auto [p_excited, p_ground] = lz_probability(1e6);
        CHECK(p_excited == 0.0);
        CHECK(p_ground == 1.0);
    }

    SECTION("components sum to exactly 1") {
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> uniform(0.0, 8.0);
        for (int trial = 0; trial < 100; ++trial) {
            const auto [p_excited, p_ground] = lz_probability(uniform(rng));
            CHECK(p_excited + p_ground == 1.0);
        }
    }

    SECTION("negative Gamma rejected") {
        CHECK_THROWS_AS(lz_probability(-0.1), DomainError);
    }
}

TEST_CASE("stopping rule") {
    const double tau_c = crossing_time(kFigSetup);
    const double tau_end = default_tau_end(kFigSetup);
    CHECK(tau_end >= 3.0 * tau_c);
    CHECK(tau_end >= tau_c + 3.0 / kFigSetup.alpha);
}

TEST_CASE("tail mean averages the final window") {
    const std::vector<double> times = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    const std::vector<double> flat(11, 0.5);
    CHECK(tail_mean(times, flat) == 0.5);

    std::vector<double> ramp(11);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(i);
    CHECK(tail_mean(times, ramp, 0.2) == Catch::Approx(9.0)); // mean of {8, 9, 10}
    CHECK_THROWS_AS(tail_mean({}, {}), DomainError);
}

TEST_CASE("acceleration sweep", "[slow]") {
    SECTION("single alpha reduces to one evolve + prediction pair") {
        const auto rows = sweep_acceleration(kFigSetup, {5e-4});
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].alpha == 5e-4);
        CHECK(rows[0].gamma == Catch::Approx(0.2).epsilon(1e-14));
        CHECK(rows[0].p_excited_lz == Catch::Approx(std::exp(-0.4 * M_PI)).epsilon(1e-14));
        CHECK(rows[0].abs_dev == std::abs(rows[0].p_excited_sim - rows[0].p_excited_lz));
        CHECK(rows[0].abs_dev <= 0.05);
    }

    SECTION("rows come back in input order") {
        const auto rows = sweep_acceleration(kFigSetup, {5e-4, 2e-3, 1e-3});
        REQUIRE(rows.size() == 3);
        CHECK(rows[0].alpha == 5e-4);
        CHECK(rows[1].alpha == 2e-3);
        CHECK(rows[2].alpha == 1e-3);
    }

    SECTION("errors propagate") {
        LzSetup no_crossing = kFigSetup;
        no_crossing.omega0 = 0.5;
        CHECK_THROWS_AS(sweep_acceleration(no_crossing, {1e-3}), DomainError);
        CHECK_THROWS_AS(sweep_acceleration(kFigSetup, {}), DomainError);
    }
}
