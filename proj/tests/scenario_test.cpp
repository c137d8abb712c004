// Copyright 2026 The cohswap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "cohswap/scenario.hpp"

namespace cohswap {
namespace {

namespace fs = std::filesystem;

const fs::path kScenarios = COHSWAP_SCENARIO_DIR;

std::string read_file(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

fs::path fresh_dir(const std::string &name) {
    const fs::path dir = fs::temp_directory_path() / ("cohswap_test_" + name);
    fs::remove_all(dir);
    return dir;
}

RunReport run_file(const std::string &name, const fs::path &out_dir, RunOptions opts = {}) {
    const fs::path path = kScenarios / (name + ".scenario");
    opts.out_dir = out_dir;
    return run_scenario(load_scenario(path), opts, read_file(path));
}

std::size_t count_lines(const std::string &text) {
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

ConfigIssue first_issue(std::string_view text) {
    try {
        (void)parse_scenario(text);
    } catch (const ConfigError &e) {
        return e.issues().front();
    }
    ADD_FAILURE() << "expected ConfigError";
    return {};
}

int run_cli(const std::string &args) {
    const std::string cmd = std::string(COHSWAP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char *kMinimal = R"(name: tiny
modes: [x, y]
sources:
  - {mode: x, photons: 1}
elements:
  - {type: beam_splitter, name: bs, inputs: [x, y], outputs: [x, y]}
)";

TEST(PhaseLiteral, Forms) {
    using std::numbers::pi;
    EXPECT_NEAR(*parse_phase_literal("pi"), pi, 1e-15);
    EXPECT_NEAR(*parse_phase_literal("-pi/2"), -pi / 2, 1e-15);
    EXPECT_NEAR(*parse_phase_literal("3*pi/4"), 3 * pi / 4, 1e-15);
    EXPECT_NEAR(*parse_phase_literal("0.8"), 0.8, 1e-15);
    EXPECT_NEAR(*parse_phase_literal("1e-3"), 1e-3, 1e-18);
    EXPECT_FALSE(parse_phase_literal("pie").has_value());
    EXPECT_FALSE(parse_phase_literal("2pi").has_value());
    EXPECT_FALSE(parse_phase_literal("pi/0").has_value());
    EXPECT_FALSE(parse_phase_literal("").has_value());
}

TEST(ParseScenario, BuiltInsLoad) {
    const ScenarioConfig fig1 = load_scenario(kScenarios / "fig1.scenario");
    ASSERT_TRUE(fig1.circuit.has_value());
    EXPECT_EQ(fig1.circuit->elements.size(), 7u);
    ASSERT_TRUE(fig1.scan.has_value());
    EXPECT_EQ(fig1.scan->grid_size, 64u);
    const ScenarioConfig flux = load_scenario(kScenarios / "fig1_flux.scenario");
    EXPECT_EQ(flux.flux.loops.size(), 1u);
    EXPECT_EQ(flux.flux.segment_phases.at("a"), 0.8);
    const ScenarioConfig pdc = load_scenario(kScenarios / "pdc_sweep.scenario");
    ASSERT_TRUE(pdc.spectral.has_value());
    EXPECT_EQ(pdc.spectral->sigma_f, (std::vector<double>{0.5, 1.0, 2.0}));
    EXPECT_FALSE(pdc.circuit.has_value());
}

TEST(ParseScenario, Defaults) {
    const ScenarioConfig c = parse_scenario(kMinimal);
    EXPECT_EQ(c.circuit->truncation.max_photons, 4u);
    const auto &bs = std::get<BeamSplitterSpec>(c.circuit->elements[0]);
    EXPECT_EQ(bs.transmissivity, 0.5);
    EXPECT_EQ(bs.convention, BeamSplitterConvention::RealHadamard);
    EXPECT_EQ(c.outputs.fringe_csv, "fringe.csv");
}

TEST(ParseScenario, UnknownKeyHasLine) {
    const ConfigIssue i = first_issue(std::string(kMinimal) + "colour: blue\n");
    EXPECT_EQ(i.line, 7);
    EXPECT_EQ(i.field, "colour");
}

TEST(ParseScenario, UnknownModeOnElementLine) {
    std::string text = kMinimal;
    text += "  - {type: phase, name: p, mode: ghost, phi: pi/2}\n";
    const ConfigIssue i = first_issue(text);
    EXPECT_EQ(i.line, 7);
    EXPECT_EQ(i.field, "elements[1]");
    EXPECT_NE(i.message.find("ghost"), std::string::npos);
}

TEST(ParseScenario, AllIssuesAreReported) {
    std::string text = kMinimal;
    text += "  - {type: phase, name: p, mode: ghost}\n";
    text += "  - {type: mirror, name: m, mode: phantom}\n";
    try {
        (void)parse_scenario(text);
        FAIL();
    } catch (const ConfigError &e) {
        EXPECT_EQ(e.issues().size(), 2u);
    }
}

TEST(ParseScenario, TypeErrors) {
    EXPECT_EQ(first_issue("name: x\nmodes: [a]\nsources: [{mode: a, photons: two}]\n").field,
              "sources[0].photons");
    EXPECT_EQ(first_issue(std::string(kMinimal) +
                          "  - {type: laser, mode: x}\n")
                  .field,
              "elements[1].type");
    EXPECT_EQ(first_issue("spectral: {sigma_f: [1, -2]}\n").field, "spectral.sigma_f[1]");
    EXPECT_EQ(first_issue("spectral: {sigma_f: 1, placement: sideways}\n").field,
              "spectral.placement");
    EXPECT_EQ(first_issue("name: [unclosed\n").line, 2);
    EXPECT_EQ(first_issue("just text").line, 1);
    EXPECT_EQ(first_issue("name: nothing\n").field, "");
}

TEST(ParseScenario, ScanChecks) {
    const std::string base = std::string(kMinimal) + "herald: {demands: {y: 0}}\n";
    EXPECT_EQ(first_issue(base + "scan: {mode: x, grid: 2, patterns: [{id: p, demands: {x: 1}}]}\n")
                  .field,
              "scan.grid");
    EXPECT_EQ(first_issue(base + "scan: {mode: x, patterns: [{id: p, demands: {y: 1}}]}\n").field,
              "scan.patterns[0]");
    EXPECT_EQ(first_issue(base + "scan: {mode: q, patterns: [{id: p, demands: {x: 1}}]}\n").field,
              "scan.mode");
}

TEST(RunScenario, Fig1) {
    const fs::path dir = fresh_dir("fig1");
    const RunReport r = run_file("fig1", dir);
    ASSERT_EQ(r.fits.size(), 2u);
    for (const auto &f : r.fits) {
        EXPECT_NEAR(f.fit.visibility, 1.0, 1e-9);
    }
    const std::string csv = read_file(r.fringe_path);
    EXPECT_EQ(count_lines(csv), 1u + 64u * 2u);
    EXPECT_EQ(csv.rfind("phi_radians,pattern_id,probability\n", 0), 0u);
    EXPECT_EQ(csv.find('\r'), std::string::npos);
}

TEST(RunScenario, FluxShiftsOffsetByPointEight) {
    const RunReport base = run_file("fig1", fresh_dir("base"));
    const RunReport flux = run_file("fig1_flux", fresh_dir("flux"));
    for (std::size_t k = 0; k < 2; ++k) {
        EXPECT_NEAR(wrap_phase(flux.fits[k].fit.phase_offset - base.fits[k].fit.phase_offset),
                    0.8, 1e-9);
    }
    ASSERT_EQ(flux.loop_fluxes.size(), 1u);
    EXPECT_NEAR(flux.loop_fluxes[0].second, 0.8, 1e-15);
}

TEST(RunScenario, PdcSweep) {
    const fs::path dir = fresh_dir("pdc");
    const RunReport r = run_file("pdc_sweep", dir);
    const auto json = nlohmann::json::parse(read_file(r.visibility_path));
    const std::vector<double> expected = {0.8944, 0.7071, 0.4472};
    ASSERT_EQ(json["spectral"].size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(json["spectral"][i]["V_closed"].get<double>(), expected[i], 1e-4);
        EXPECT_NEAR(json["spectral"][i]["V_quad"].get<double>(), expected[i], 1e-3);
    }
    EXPECT_EQ(count_lines(read_file(r.fringe_path)), 1u);
}

TEST(RunScenario, GridOverride) {
    RunOptions opts;
    opts.grid = 16;
    const RunReport r = run_file("fig1", fresh_dir("grid"), opts);
    EXPECT_EQ(count_lines(read_file(r.fringe_path)), 1u + 16u * 2u);
    opts.grid = 2;
    EXPECT_THROW((void)run_file("fig1", fresh_dir("grid2"), opts), ConfigError);
}

TEST(RunScenario, ByteIdenticalReruns) {
    for (const std::string name : {"fig1", "fig1_flux", "pdc_sweep"}) {
        const RunReport a = run_file(name, fresh_dir(name + "_a"));
        const RunReport b = run_file(name, fresh_dir(name + "_b"));
        EXPECT_EQ(read_file(a.fringe_path), read_file(b.fringe_path));
        EXPECT_EQ(read_file(a.visibility_path), read_file(b.visibility_path));
        EXPECT_EQ(read_file(a.manifest_path), read_file(b.manifest_path));
    }
}

TEST(RunScenario, ManifestRoundTrip) {
    for (const std::string name : {"fig1", "fig1_flux", "pdc_sweep"}) {
        const RunReport r = run_file(name, fresh_dir(name + "_m"));
        const auto manifest = nlohmann::json::parse(read_file(r.manifest_path));
        EXPECT_EQ(manifest["config_sha256"].get<std::string>(),
                  sha256_hex(read_file(kScenarios / (name + ".scenario"))));
        const ScenarioConfig replay = parse_scenario(manifest["config"].dump());
        EXPECT_EQ(scenario_to_json(replay), manifest["config"]);
        EXPECT_EQ(scenario_to_json(replay),
                  scenario_to_json(load_scenario(kScenarios / (name + ".scenario"))));
        EXPECT_TRUE(manifest["versions"].contains("cohswap"));
    }
}

TEST(Sha256, KnownDigest) {
    EXPECT_EQ(sha256_hex("abc"),
              "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(FringeCsv, FailedPointsAreNan) {
    FringeData d;
    d.phase_grid = {0.0, 1.0};
    d.pattern_ids = {"p"};
    d.probabilities = {{0.5}, {0.0}};
    d.herald_probability = {0.25, 0.0};
    d.herald_failed = {false, true};
    EXPECT_EQ(fringe_csv(d), "phi_radians,pattern_id,probability\n0,p,0.5\n1,p,nan\n");
}

TEST(Cli, ExitCodes) {
    const fs::path dir = fresh_dir("cli");
    const std::string fig1 = (kScenarios / "fig1.scenario").string();
    const std::string pdc = (kScenarios / "pdc_sweep.scenario").string();
    EXPECT_EQ(run_cli("run " + fig1 + " --out-dir " + dir.string()), 0);
    EXPECT_TRUE(fs::exists(dir / "fringe.csv"));
    EXPECT_EQ(run_cli("run --config " + fig1 + " --out-dir " + dir.string()), 0);

    const fs::path bad = dir / "bad.scenario";
    std::ofstream(bad) << "name: broken\nmodes: [a]\nwhat: 1\n";
    EXPECT_EQ(run_cli("run " + bad.string() + " --out-dir " + dir.string()), 2);
    EXPECT_EQ(run_cli("run " + fig1 + " --grid 1 --out-dir " + dir.string()), 2);
    EXPECT_EQ(run_cli("run"), 2);
    EXPECT_EQ(run_cli("run " + pdc + " --quad-tol 1e-15 --out-dir " + dir.string()), 3);
    EXPECT_EQ(run_cli("run " + (dir / "missing.scenario").string()), 1);
    EXPECT_EQ(run_cli("run " + fig1 + " --out-dir " + (dir / "fringe.csv").string()), 1);
}

TEST(Cli, OutDirFromEnvironment) {
    const fs::path dir = fresh_dir("cli_env");
    const std::string fig1 = (kScenarios / "fig1.scenario").string();
    const std::string cmd = "COHSWAP_OUT_DIR=" + dir.string() + " " +
                            std::string(COHSWAP_CLI_PATH) + " run " + fig1 + " >/dev/null";
    EXPECT_EQ(std::system(cmd.c_str()), 0);
    EXPECT_TRUE(fs::exists(dir / "manifest.json"));
}

} // namespace
} // namespace cohswap
