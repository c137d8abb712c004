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

/**
 * @file
 * Scenario files and the runner behind the `cohswap` command line tool.
 *
 * A scenario is a single YAML document; docs/scenario-format.md describes
 * the grammar. Running a scenario writes three files into the output
 * directory: the conditional fringe CSV, a visibility JSON and a manifest
 * that embeds the normalized scenario so it can be replayed.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cohswap/circuit.hpp"
#include "cohswap/conditioning.hpp"
#include "cohswap/spectral.hpp"

namespace cohswap {

inline constexpr std::string_view kVersion = "0.1.0";

struct ScanConfig {
    ModeId mode;
    std::size_t grid_size = 64;
    bool apply_correction = false;
    std::vector<NamedPattern> final_patterns;
};

struct SpectralConfig {
    double sigma_p = 1.0;
    std::vector<double> sigma_f;
    /// Pump central frequency for the carrier-structured profiles.
    double carrier = 0.0;
    FilterPlacement placement = FilterPlacement::TriggerBeams;
    double quad_tolerance = 1e-3;
};

struct OutputNames {
    std::string fringe_csv = "fringe.csv";
    std::string visibility_json = "visibility.json";
    std::string manifest = "manifest.json";
};

struct ScenarioConfig {
    std::string name;
    std::optional<Circuit> circuit;
    FluxAssignment flux;
    std::optional<HeraldRule> herald;
    std::optional<ScanConfig> scan;
    std::optional<SpectralConfig> spectral;
    OutputNames outputs;
};

struct ConfigIssue {
    /// 1-based; 0 when unknown.
    int line = 0;
    int column = 0;
    /// Dotted path of the offending field, e.g. "elements[2].inputs".
    std::string field;
    std::string message;
};

class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(std::vector<ConfigIssue> issues);
    [[nodiscard]] const std::vector<ConfigIssue> &issues() const noexcept {
        return issues_;
    }

  private:
    std::vector<ConfigIssue> issues_;
};

/// Parses and validates a scenario. Throws ConfigError.
[[nodiscard]] ScenarioConfig parse_scenario(std::string_view text);
[[nodiscard]] ScenarioConfig load_scenario(const std::filesystem::path &path);

/// Normalized form with every default spelled out. Parsing its dump()
/// yields an equivalent scenario.
[[nodiscard]] nlohmann::json scenario_to_json(const ScenarioConfig &config);

struct RunOptions {
    std::filesystem::path out_dir = ".";
    std::optional<std::size_t> grid;
    std::optional<double> quad_tolerance;
    /// Reserved; every computation is deterministic.
    std::optional<std::int64_t> seed;
};

struct SpectralRecord {
    double sigma_p = 0.0;
    double sigma_f = 0.0;
    double v_closed = 0.0;
    double v_quad = 0.0;
    double error = 0.0;
};

struct FringeFitRecord {
    std::string pattern_id;
    FringeFit fit;
};

struct RunReport {
    std::optional<FringeData> fringe;
    std::vector<FringeFitRecord> fits;
    std::vector<std::pair<std::string, double>> loop_fluxes;
    std::vector<SpectralRecord> spectral;
    std::filesystem::path fringe_path;
    std::filesystem::path visibility_path;
    std::filesystem::path manifest_path;
};

/// Applies the option overrides to a copy of the scenario. Throws
/// ConfigError for an override that breaks an invariant (grid < 3, ...).
[[nodiscard]] ScenarioConfig apply_overrides(ScenarioConfig config,
                                             const RunOptions &options);

/// Runs everything the scenario describes and writes the output files.
/// `source_text` is the raw scenario file, hashed into the manifest.
/// Throws NonConvergenceError when a quadrature misses its tolerance.
RunReport run_scenario(const ScenarioConfig &config, const RunOptions &options,
                       std::string_view source_text);

/// CSV with header phi_radians,pattern_id,probability; one row per grid
/// point and pattern, 15 significant digits, LF line endings.
[[nodiscard]] std::string fringe_csv(const FringeData &data);
void emit_fringe_csv(const FringeData &data, const std::filesystem::path &path);

/// Hex SHA-256 of `bytes`.
[[nodiscard]] std::string sha256_hex(std::string_view bytes);

/// Parses a phase literal: a number, or [-][k*]pi[/m] such as "pi/2".
[[nodiscard]] std::optional<double> parse_phase_literal(std::string_view text);

} // namespace cohswap
