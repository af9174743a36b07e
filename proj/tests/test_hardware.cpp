#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "rindler/hardware.hpp"

using namespace rindler;

namespace {

// The reference ion setup: omega0 = 1 MHz trap, spectator 1 MHz away,
// k xbar = 0.2, Omega_L/2 = 100 kHz, Omega = 100 kHz. Values in kHz.
IonChainSpec reference_chain(int n_ions) {
    IonChainSpec spec;
    spec.n_ions = n_ions;
    spec.mode_freqs = {1000.0, 2000.0};
    spec.lamb_dicke = 0.2;
    spec.rabi_amplitudes.assign(static_cast<std::size_t>(n_ions), 200.0);
    spec.detuning = 100.0;
    return spec;
}

} // namespace

TEST_CASE("ion effective coupling") {
    SECTION("reference values give g = 20 kHz exactly") {
        const auto g = ion_effective_coupling(reference_chain(1));
        REQUIRE(g.size() == 1);
        CHECK(g[0] == 20.0);
    }

    SECTION("sqrt(N) scaling: four ions give 10 kHz") {
        const auto g = ion_effective_coupling(reference_chain(4));
        REQUIRE(g.size() == 4);
        for (double gj : g) CHECK(gj == 10.0);
    }

    SECTION("zero drive gives zero coupling") {
        IonChainSpec spec = reference_chain(1);
        spec.rabi_amplitudes = {0.0};
        CHECK(ion_effective_coupling(spec)[0] == 0.0);
    }
}

TEST_CASE("ion laser frequencies") {
    SECTION("reference pair (-1.1, 0.9) MHz") {
        const auto [l1, l2] = ion_laser_frequencies(1.0, 0.1);
        CHECK(l1 == Catch::Approx(-1.1).epsilon(1e-14));
        CHECK(l2 == Catch::Approx(0.9).epsilon(1e-14));
    }
    SECTION("zero detuning straddles the mode") {
        CHECK(ion_laser_frequencies(1.0, 0.0) == std::pair{-1.0, 1.0});
    }
    SECTION("sum is -2 Omega") {
        const auto [l1, l2] = ion_laser_frequencies(1.0, 0.1);
        CHECK(l1 + l2 == Catch::Approx(-0.2).margin(1e-15));
    }
}

TEST_CASE("ion validity report") {
    SECTION("reference values all pass (0.2 boundary inclusive)") {
        const auto report = ion_validity(reference_chain(1));
        CHECK(report.all_pass());
        CHECK(report.worst() == CheckStatus::pass);
        REQUIRE(report.checks.size() == 4);
        CHECK(report.checks[0].name == "lamb_dicke");
        CHECK(report.checks[0].ratio == 0.2);
    }

    SECTION("deep-sideband regime fails the Lamb-Dicke check") {
        IonChainSpec spec = reference_chain(1);
        spec.lamb_dicke = 0.9;
        const auto report = ion_validity(spec);
        CHECK_FALSE(report.all_pass());
        CHECK(report.checks[0].status == CheckStatus::fail);
    }

    SECTION("vanishing drive passes all coupling checks") {
        IonChainSpec spec = reference_chain(1);
        spec.rabi_amplitudes = {0.0};
        for (const auto& check : ion_validity(spec).checks)
            if (check.name != "lamb_dicke") CHECK(check.ratio == 0.0);
    }

    SECTION("status is monotone in the ratio") {
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        for (int trial = 0; trial < 100; ++trial) {
            double r1 = uniform(rng), r2 = uniform(rng);
            if (r1 > r2) std::swap(r1, r2);
            CHECK(static_cast<int>(classify_ratio(r1)) <= static_cast<int>(classify_ratio(r2)));
        }
        CHECK(classify_ratio(0.2) == CheckStatus::pass);
        CHECK(classify_ratio(0.5) == CheckStatus::warn);
        CHECK(classify_ratio(0.500001) == CheckStatus::fail);
    }
}

TEST_CASE("cqed drive frequencies") {
    CqedSpec spec;
    spec.qubit_energy = 5000.0; // MHz
    spec.cavity_freq = 6000.0;
    spec.bare_coupling = 1.0;
    spec.modulation_depths = {0.1};
    spec.target_gaps = {1.0};

    SECTION("formula applied verbatim, negative results included") {
        const auto freqs = cqed_drive_frequencies(spec);
        REQUIRE(freqs.size() == 1);
        CHECK(freqs[0].first == Catch::Approx(-1001.0));
        CHECK(freqs[0].second == Catch::Approx(11000.0 - 1.0));
    }

    SECTION("difference is 2 omega0 identically") {
        for (const auto& [d1, d2] : cqed_drive_frequencies(spec))
            CHECK(d2 - d1 == Catch::Approx(2.0 * spec.cavity_freq).epsilon(1e-15));
    }

    SECTION("degenerate zero-gap, matched-frequency input") {
        CqedSpec degenerate = spec;
        degenerate.cavity_freq = spec.qubit_energy;
        degenerate.target_gaps = {0.0};
        const auto freqs = cqed_drive_frequencies(degenerate);
        CHECK(freqs[0].first == 0.0);
        CHECK(freqs[0].second == 2.0 * spec.qubit_energy);
    }
}

TEST_CASE("cqed effective coupling") {
    CqedSpec spec;
    spec.qubit_energy = 5000.0;
    spec.cavity_freq = 6000.0;
    spec.bare_coupling = 1.0; // MHz
    spec.modulation_depths = {0.1, 0.25, 0.5};
    spec.target_gaps = {1.0, 1.0, 2.0};

    const auto g = cqed_effective_coupling(spec);
    REQUIRE(g.size() == 3);
    CHECK(g[0] == Catch::Approx(0.1));  // 100 kHz in MHz units
    CHECK(g[1] == Catch::Approx(0.25));
    CHECK(g[2] == Catch::Approx(0.5));

    spec.modulation_depths = {1.2, 0.1, 0.1};
    CHECK_THROWS_AS(cqed_effective_coupling(spec), DomainError);
}

TEST_CASE("cqed validity report") {
    CqedSpec spec;
    spec.qubit_energy = 5000.0;
    spec.cavity_freq = 6000.0;
    spec.bare_coupling = 1.0;
    spec.modulation_depths = {0.1};
    spec.target_gaps = {1.0};

    SECTION("GHz-scale splittings with MHz couplings pass") {
        const auto report = cqed_validity(spec, 1.0);
        CHECK(report.all_pass());
    }

    SECTION("degenerate qubit-cavity split fails with an infinite ratio") {
        CqedSpec degenerate = spec;
        degenerate.cavity_freq = spec.qubit_energy;
        const auto report = cqed_validity(degenerate, 1.0);
        CHECK_FALSE(report.all_pass());
        bool found = false;
        for (const auto& check : report.checks)
            if (check.name == "g0_vs_qubit_cavity_split") {
                found = true;
                CHECK(std::isinf(check.ratio));
                CHECK(check.status == CheckStatus::fail);
            }
        CHECK(found);
    }

    SECTION("alpha = 0 trivially satisfies the slow-phase condition") {
        const auto report = cqed_validity(spec, 0.0);
        CHECK(report.checks.back().name == "alpha_vs_drive");
        CHECK(report.checks.back().ratio == 0.0);
    }
}

TEST_CASE("phase schedule") {
    // Reference ion numbers in kHz: Omega = 100, omega_sim = 133, alpha = 0.1
    // (so the phase varies on the 1/alpha = 10 ms scale).
    const double alpha = 0.1;
    const ModeSpec mode = ModeSpec::massless(133.0, 1);
    const Worldline wl = Worldline::uniform_acceleration(alpha);
    CHECK(1.0 / alpha == 10.0);

    std::vector<double> grid;
    const int n = 20001;
    for (int i = 0; i < n; ++i) grid.push_back(30.0 * i / (n - 1));

    const auto schedule = phase_schedule(wl, mode, grid);

    SECTION("phi1 + phi2 = 0 pointwise and the first sample is -omega/alpha") {
        REQUIRE(schedule.phi1.size() == grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(schedule.phi1[i] + schedule.phi2[i] == 0.0);
        CHECK(schedule.phi1.front() == -133.0 / 0.1);
    }

    SECTION("undersampled grids are rejected with the required spacing") {
        std::vector<double> coarse = {0.0, 1.0, 2.0};
        CHECK_THROWS_MATCHES(phase_schedule(wl, mode, coarse), AccuracyError,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("required")));
    }

    SECTION("ten-times-finer sampling interpolates the coarse schedule") {
        std::vector<double> fine;
        const int nf = 10 * (n - 1) + 1;
        for (int i = 0; i < nf; ++i) fine.push_back(30.0 * i / (nf - 1));
        const auto dense = phase_schedule(wl, mode, fine);

        double max_phi = 0.0;
        for (double phi : schedule.phi1) max_phi = std::max(max_phi, std::abs(phi));
        // Linear interpolation of the coarse schedule against the dense one.
        for (int i = 0; i + 1 < n; ++i) {
            for (int sub = 0; sub <= 10; ++sub) {
                const std::size_t fi = static_cast<std::size_t>(10 * i + sub);
                const double t = sub / 10.0;
                const double interp = (1.0 - t) * schedule.phi1[static_cast<std::size_t>(i)] +
                                      t * schedule.phi1[static_cast<std::size_t>(i) + 1];
                CHECK(std::abs(interp - dense.phi1[fi]) <= 1e-6 * max_phi);
            }
        }
    }
}

TEST_CASE("ion compiler round trip") {
    std::vector<double> grid;
    for (int i = 0; i <= 20000; ++i) grid.push_back(33.0 * i / 20000);

    SECTION("reference target reproduces the quoted numbers exactly") {
        const SimTarget target{20.0, 100.0, 0.1, 133.0}; // kHz
        const auto compiled = compile_ion(target, 1, {1000.0, 2000.0}, 0.2, grid);
        REQUIRE(compiled.couplings.size() == 1);
        CHECK(compiled.couplings[0] == 20.0); // exact round trip
        CHECK(compiled.spec.rabi_amplitudes[0] == Catch::Approx(200.0).epsilon(1e-14));
        CHECK(compiled.laser_freqs.first == Catch::Approx(-1100.0).epsilon(1e-14));
        CHECK(compiled.laser_freqs.second == Catch::Approx(900.0).epsilon(1e-14));
        CHECK(compiled.validity.all_pass());
        CHECK(compiled.schedule.phi1.front() == -133.0 / 0.1);
    }

    SECTION("round trip is tight for arbitrary targets") {
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> uniform(0.5, 2.0);
        for (int trial = 0; trial < 10; ++trial) {
            const SimTarget target{17.3 * uniform(rng), 100.0, 0.1, 133.0};
            const auto compiled = compile_ion(target, 3, {1000.0, 2000.0}, 0.17, grid);
            for (double g : compiled.couplings)
                CHECK(g == Catch::Approx(target.g).epsilon(1e-12));
            // Recomputing Omega from the laser pair inverts the compilation.
            const auto [l1, l2] = compiled.laser_freqs;
            CHECK(-0.5 * (l1 + l2) == Catch::Approx(target.gap).epsilon(1e-12));
            CHECK(0.5 * (l2 - l1) == Catch::Approx(compiled.spec.mode_freqs[0]).epsilon(1e-12));
        }
    }
}

TEST_CASE("cqed compiler") {
    std::vector<double> grid;
    for (int i = 0; i <= 40000; ++i) grid.push_back(3.0 * i / 40000);

    const SimTarget target{0.1, 1.0, 1.0, 1.33}; // MHz
    const auto compiled = compile_cqed(target, 2, 5000.0, 6000.0, 1.0, grid);
    REQUIRE(compiled.couplings.size() == 2);
    CHECK(compiled.couplings[0] == Catch::Approx(0.1).epsilon(1e-14));
    CHECK(compiled.spec.modulation_depths[0] == Catch::Approx(0.1).epsilon(1e-14));
    CHECK(compiled.drive_freqs[0].first == Catch::Approx(5000.0 - 1.0 - 6000.0));
    CHECK(compiled.drive_freqs[0].second == Catch::Approx(5000.0 - 1.0 + 6000.0));
    CHECK(compiled.schedule.drive_frequencies.size() == 4);
    // The first drive tone is negative: flagged, not rejected.
    bool flagged = false;
    for (const auto& note : compiled.notes)
        if (note.find("nonpositive drive frequency") != std::string::npos) flagged = true;
    CHECK(flagged);
}
