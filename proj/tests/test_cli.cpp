#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rindler/cli.hpp"

using namespace rindler;
using namespace rindler::cli;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string write_file(const TempDir& dir, const std::string& name, const std::string& content) {
    const std::string path = dir.file(name);
    std::ofstream out(path);
    out << content;
    return path;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace

TEST_CASE("preset fig1 supplies the reference parameters") {
    const RunConfig config = parse_config(Mode::evolve, "", {{"preset", "fig1"}});
    REQUIRE(config.model.detectors.size() == 1);
    REQUIRE(config.model.modes.size() == 1);
    CHECK(config.model.couplings(0, 0) == 0.01);
    CHECK(config.model.modes[0].omega == 1.33);
    CHECK(config.model.modes[0].n_max == 3);
    CHECK(config.model.detectors[0].gap == 1.0);
    CHECK(config.model.detectors[0].worldline.alpha() == 1e-3);
    // Initial ket defaults to |e 0>.
    CHECK(config.initial.spin_bits == std::vector<int>{1});
    CHECK(config.initial.occupations == std::vector<int>{0});
    CHECK(config.tau1_auto);
    CHECK(config.tau1 > 0.0);
}

TEST_CASE("empty config lists every missing required key") {
    TempDir dir("rindler_cli_empty");
    const std::string path = write_file(dir, "empty.cfg", "");
    try {
        parse_config(Mode::evolve, path, {});
        FAIL("expected ConfigError");
    } catch (const ConfigError& error) {
        const std::string message = error.what();
        CHECK(message.find("model.coupling") != std::string::npos);
        CHECK(message.find("model.mode.1.omega") != std::string::npos);
        CHECK(message.find("worldline.type") != std::string::npos);
    }
}

TEST_CASE("unknown keys are rejected by name") {
    try {
        parse_config(Mode::evolve, "", {{"model.couplingg", "0.1"}});
        FAIL("expected ConfigError");
    } catch (const ConfigError& error) {
        CHECK(std::string(error.what()).find("model.couplingg") != std::string::npos);
    }
}

TEST_CASE("set overrides beat file values and are echoed") {
    TempDir dir("rindler_cli_override");
    const std::string path = write_file(dir, "run.cfg",
                                        "preset = fig1\n"
                                        "model.coupling = 0.01\n");
    const RunConfig config =
        parse_config(Mode::evolve, path, {{"model.coupling", "0.02"}});
    CHECK(config.model.couplings(0, 0) == 0.02);
    CHECK(config.resolved.at("model.coupling") == "0.02");
}

TEST_CASE("physical validation names the violated inequality") {
    try {
        parse_config(Mode::evolve, "",
                     {{"preset", "fig1"}, {"model.gap", "-1"}});
        FAIL("expected ConfigError");
    } catch (const ConfigError& error) {
        CHECK(std::string(error.what()).find("gap > 0") != std::string::npos);
    }

    try {
        parse_config(Mode::evolve, "",
                     {{"preset", "fig1"}, {"worldline.alpha", "0"}});
        FAIL("expected ConfigError");
    } catch (const ConfigError& error) {
        CHECK(std::string(error.what()).find("alpha > 0") != std::string::npos);
    }
}

TEST_CASE("config file syntax") {
    TempDir dir("rindler_cli_syntax");

    SECTION("comments and blank lines are skipped") {
        const std::string path = write_file(dir, "ok.cfg",
                                            "# a comment\n"
                                            "\n"
                                            "preset = fig1  # trailing comment\n"
                                            "evolve.tau1 = 10\n");
        const RunConfig config = parse_config(Mode::evolve, path, {});
        CHECK(config.tau1 == 10.0);
    }

    SECTION("missing '=' is a config error") {
        const std::string path = write_file(dir, "bad.cfg", "model.coupling 0.01\n");
        CHECK_THROWS_AS(parse_config(Mode::evolve, path, {}), ConfigError);
    }

    SECTION("unparseable numbers name the key") {
        try {
            parse_config(Mode::evolve, "",
                         {{"preset", "fig1"}, {"model.coupling", "abc"}});
            FAIL("expected ConfigError");
        } catch (const ConfigError& error) {
            CHECK(std::string(error.what()).find("model.coupling") != std::string::npos);
        }
    }
}

TEST_CASE("evolve run writes a provenance-headed csv") {
    TempDir dir("rindler_cli_evolve");
    const int code = run_cli("evolve", "",
                             {"preset=fig1", "model.coupling=0", "evolve.tau1=5",
                              "integrator.dt=0.05"},
                             dir.file("out"));
    REQUIRE(code == kExitOk);

    const std::string content = slurp(dir.file("out") + "/evolve.csv");
    CHECK(content.rfind("# rindler-sim", 0) == 0);
    CHECK(content.find("# mode: evolve") != std::string::npos);
    CHECK(content.find("#   model.coupling = 0") != std::string::npos);
    CHECK(content.find("tau,p_ground_1,n_mode_1,norm") != std::string::npos);

    // g = 0: the ground population column is identically zero.
    std::istringstream lines(content);
    std::string line;
    bool saw_data = false;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("tau,", 0) == 0) continue;
        saw_data = true;
        const auto first_comma = line.find(',');
        const auto second_comma = line.find(',', first_comma + 1);
        CHECK(line.substr(first_comma + 1, second_comma - first_comma - 1) == "0");
    }
    CHECK(saw_data);
}

TEST_CASE("lz run reports the Gamma = 1 prediction") {
    TempDir dir("rindler_cli_lz");
    const int code = run_cli("lz", "",
                             {"preset=fig1", "worldline.alpha=1e-4"}, dir.file("out"));
    REQUIRE(code == kExitOk);
    const std::string content = slurp(dir.file("out") + "/lz_report.txt");
    CHECK(content.find("gamma   = 1") != std::string::npos);
    CHECK(content.find("P_e(inf) = 0.0018674427") != std::string::npos);
    CHECK(content.find("tau_c   = 2851.789") != std::string::npos);
}

TEST_CASE("hardware run emits the reference ion report") {
    TempDir dir("rindler_cli_hw");
    const int code = run_cli("hardware", "",
                             {"hardware.branch=ion", "hardware.target.g=20",
                              "hardware.target.gap=100", "hardware.target.alpha=0.1",
                              "hardware.target.omega0=133"},
                             dir.file("out"));
    REQUIRE(code == kExitOk);

    const std::string report = slurp(dir.file("out") + "/validity_report.txt");
    CHECK(report.find("g[1] = 20 kHz") != std::string::npos);
    CHECK(report.find("Omega_L[1]/2 = 100 kHz") != std::string::npos);
    CHECK(report.find("omega_L1 = -1100 kHz") != std::string::npos);
    CHECK(report.find("omega_L2 = 900 kHz") != std::string::npos);
    CHECK(report.find("overall: pass") != std::string::npos);

    const std::string schedule = slurp(dir.file("out") + "/schedule.csv");
    CHECK(schedule.find("tau,phi1,phi2") != std::string::npos);
    CHECK(schedule.find("0,-1330,1330") != std::string::npos); // Phi(0) = -133/0.1
}

TEST_CASE("convergence run writes the truncation table") {
    TempDir dir("rindler_cli_conv");
    const int code = run_cli("convergence", "",
                             {"preset=fig1", "model.coupling=0", "evolve.tau1=5",
                              "integrator.dt=0.05", "convergence.truncations=1,2"},
                             dir.file("out"));
    REQUIRE(code == kExitOk);
    const std::string content = slurp(dir.file("out") + "/convergence.csv");
    CHECK(content.find("# converged: true") != std::string::npos);
    CHECK(content.find("n_max,p_ground_final,delta_from_previous") != std::string::npos);
}

TEST_CASE("exit codes distinguish failure classes") {
    TempDir dir("rindler_cli_codes");

    SECTION("config errors exit 2") {
        CHECK(run_cli("evolve", "", {"bogus.key=1"}, dir.file("out")) == kExitConfigError);
        CHECK(run_cli("evolve", dir.file("missing.cfg"), {}, dir.file("out")) == kExitIoError);
        CHECK(run_cli("nonsense-mode", "", {}, dir.file("out")) == kExitConfigError);
    }

    SECTION("accuracy failures exit 3") {
        const int code = run_cli("evolve", "",
                                 {"preset=fig1", "model.coupling=1.0", "evolve.tau1=100",
                                  "integrator.dt=20", "integrator.norm_tolerance=1e-10"},
                                 dir.file("out"));
        CHECK(code == kExitAccuracyError);
    }

    SECTION("i/o failures exit 4") {
        const std::string blocker = dir.file("blocker");
        std::ofstream(blocker) << "not a directory";
        const int code = run_cli("evolve", "",
                                 {"preset=fig1", "model.coupling=0", "evolve.tau1=1",
                                  "integrator.dt=0.05"},
                                 blocker + "/nested");
        CHECK(code == kExitIoError);
    }
}
