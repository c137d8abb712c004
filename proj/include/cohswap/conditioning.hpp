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
 * Heralding on ideal photon-number-resolving detectors, conditional fringe
 * scans, and fringe visibility extraction.
 */

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cohswap/circuit.hpp"
#include "cohswap/fock.hpp"

namespace cohswap {

/// A detection pattern with a stable identifier.
struct NamedPattern {
    std::string id;
    DetectionPattern pattern;
};

/// A heralding pattern plus the feed-forward phase to apply when it fires.
/// The standard mapping is 0 for the b-click and pi for the c-click.
struct HeraldRule {
    std::string id;
    DetectionPattern pattern;
    double correction_phase = 0.0;
};

struct HeraldOutcome {
    double probability = 0.0;
    /// Normalized conditional state; empty when probability is zero.
    std::optional<FockState> conditional_state;
    double correction_phase = 0.0;

    [[nodiscard]] bool vanished() const noexcept { return !conditional_state; }
};

[[nodiscard]] HeraldOutcome herald(const FockState &state, const HeraldRule &rule);
[[nodiscard]] HeraldOutcome herald(const FockState &state,
                                   const DetectionPattern &pattern);

namespace fig1 {
/// b-click with correction 0 and c-click with correction pi.
[[nodiscard]] HeraldRule b_click_rule();
[[nodiscard]] HeraldRule c_click_rule();
/// One photon leaving BS4 at a_out, or at d_out.
[[nodiscard]] std::vector<NamedPattern> output_patterns();
} // namespace fig1

struct ScanSettings {
    /// Mode that receives the scanned phase.
    ModeId scan_mode;
    std::vector<double> grid;
    std::vector<NamedPattern> final_patterns;
    /// Adds the herald's correction phase to the scanned phase.
    bool apply_correction = false;
};

struct FringeData {
    std::vector<double> phase_grid;
    std::vector<std::string> pattern_ids;
    /// probabilities[grid point][pattern], conditioned on the herald.
    std::vector<std::vector<double>> probabilities;
    std::vector<double> herald_probability;
    /// Set where the herald has zero probability; that row holds zeros.
    std::vector<bool> herald_failed;

    [[nodiscard]] std::size_t pattern_index(std::string_view id) const;
    [[nodiscard]] std::vector<double> series(std::string_view id) const;
    [[nodiscard]] bool any_failed() const;
};

/// n uniform points on [0, 2 pi). Defaults to 64.
[[nodiscard]] std::vector<double> uniform_phase_grid(std::size_t n = 64);

/// Index at which the scanned phase is injected: just before the last beam
/// splitter taking `mode` as an input, or the end of the circuit if none.
[[nodiscard]] std::size_t scan_injection_point(const Circuit &circuit,
                                               std::string_view mode);

/// For each grid phase: inject a phase shifter on the scan mode, simulate,
/// herald, and record the conditional probability of each final pattern.
/// The herald and final patterns are evaluated jointly on the output state,
/// which is equivalent to heralding first whenever the herald modes are not
/// touched after the injection point.
///
/// Throws std::invalid_argument for an empty or non-increasing grid.
[[nodiscard]] FringeData fringe_scan(const Circuit &circuit,
                                     const HeraldRule &herald_rule,
                                     const ScanSettings &settings);

struct FringeFit {
    /// Visibility V of p(phi) = mean * (1 - V cos(phi - offset)).
    double visibility = 0.0;
    /// Wrapped to (-pi, pi]; meaningless when offset_defined is false.
    double phase_offset = 0.0;
    bool offset_defined = false;
    double mean = 0.0;
    double residual_rms = 0.0;
};

/// Linear least squares on the {1, cos, sin} basis followed by amplitude and
/// phase recovery. Needs at least three distinct phases.
[[nodiscard]] FringeFit fit_fringe(std::span<const double> phases,
                                   std::span<const double> probabilities);

/// fit_fringe over one pattern's series, skipping failed herald points.
[[nodiscard]] FringeFit extract_visibility(const FringeData &data,
                                           std::string_view pattern_id);

} // namespace cohswap
