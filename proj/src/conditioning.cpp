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

#include "cohswap/conditioning.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>

namespace cohswap {

HeraldOutcome herald(const FockState &state, const HeraldRule &rule) {
    Projection p = project(state, rule.pattern);
    HeraldOutcome outcome;
    outcome.probability = p.probability;
    outcome.correction_phase = rule.correction_phase;
    outcome.conditional_state = std::move(p.remainder);
    if (outcome.vanished()) {
        outcome.probability = 0.0;
    }
    return outcome;
}

HeraldOutcome herald(const FockState &state, const DetectionPattern &pattern) {
    return herald(state, HeraldRule{"", pattern, 0.0});
}

namespace fig1 {

HeraldRule b_click_rule() { return {"b-click", b_click(), 0.0}; }

HeraldRule c_click_rule() { return {"c-click", c_click(), std::numbers::pi}; }

std::vector<NamedPattern> output_patterns() {
    return {{"a_out", {{{"a_out", 1}, {"d_out", 0}}}},
            {"d_out", {{{"a_out", 0}, {"d_out", 1}}}}};
}

} // namespace fig1

std::size_t FringeData::pattern_index(std::string_view id) const {
    auto it = std::find(pattern_ids.begin(), pattern_ids.end(), id);
    if (it == pattern_ids.end()) {
        throw std::invalid_argument("no pattern '" + std::string(id) + "' in fringe data");
    }
    return static_cast<std::size_t>(it - pattern_ids.begin());
}

std::vector<double> FringeData::series(std::string_view id) const {
    const std::size_t k = pattern_index(id);
    std::vector<double> out;
    out.reserve(probabilities.size());
    for (const auto &row : probabilities) {
        out.push_back(row[k]);
    }
    return out;
}

bool FringeData::any_failed() const {
    return std::find(herald_failed.begin(), herald_failed.end(), true) !=
           herald_failed.end();
}

std::vector<double> uniform_phase_grid(std::size_t n) {
    std::vector<double> grid(n);
    for (std::size_t k = 0; k < n; ++k) {
        grid[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    }
    return grid;
}

std::size_t scan_injection_point(const Circuit &circuit, std::string_view mode) {
    for (std::size_t i = circuit.elements.size(); i-- > 0;) {
        const auto *bs = std::get_if<BeamSplitterSpec>(&circuit.elements[i]);
        if (bs != nullptr && (bs->input_1 == mode || bs->input_2 == mode)) {
            return i;
        }
    }
    return circuit.elements.size();
}

FringeData fringe_scan(const Circuit &circuit, const HeraldRule &herald_rule,
                       const ScanSettings &settings) {
    if (settings.grid.empty()) {
        throw std::invalid_argument("fringe_scan: phase grid is empty");
    }
    if (std::adjacent_find(settings.grid.begin(), settings.grid.end(),
                           std::greater_equal<>()) != settings.grid.end()) {
        throw std::invalid_argument("fringe_scan: phase grid must be strictly increasing");
    }
    if (!ModeRegistry(circuit.modes).contains(settings.scan_mode)) {
        throw UnknownModeError(settings.scan_mode);
    }
    for (const auto &[mode, n] : herald_rule.pattern.demands) {
        for (const auto &fp : settings.final_patterns) {
            if (fp.pattern.demands.contains(mode)) {
                throw std::invalid_argument("fringe_scan: final pattern '" + fp.id +
                                            "' overlaps herald mode '" + mode + "'");
            }
        }
    }

    const std::size_t inject_at = scan_injection_point(circuit, settings.scan_mode);
    const double correction = settings.apply_correction ? herald_rule.correction_phase : 0.0;

    FringeData data;
    data.phase_grid = settings.grid;
    for (const auto &fp : settings.final_patterns) {
        data.pattern_ids.push_back(fp.id);
    }

    // Points are independent; evaluated in grid order.
    for (double phi : settings.grid) {
        Circuit scanned = circuit;
        scanned.elements.insert(
            scanned.elements.begin() + static_cast<std::ptrdiff_t>(inject_at),
            PhaseShifterSpec{"scan", settings.scan_mode, phi + correction});
        const FockState out = simulate(scanned);
        const HeraldOutcome h = herald(out, herald_rule);

        std::vector<double> row(settings.final_patterns.size(), 0.0);
        data.herald_probability.push_back(h.probability);
        data.herald_failed.push_back(h.vanished());
        if (!h.vanished()) {
            for (std::size_t k = 0; k < settings.final_patterns.size(); ++k) {
                row[k] = project(*h.conditional_state, settings.final_patterns[k].pattern)
                             .probability;
            }
        }
        data.probabilities.push_back(std::move(row));
    }
    return data;
}

FringeFit fit_fringe(std::span<const double> phases,
                     std::span<const double> probabilities) {
    if (phases.size() != probabilities.size()) {
        throw std::invalid_argument("fit_fringe: phase and probability counts differ");
    }
    std::set<double> distinct;
    for (double p : phases) {
        distinct.insert(wrap_phase(p));
    }
    if (distinct.size() < 3) {
        throw std::invalid_argument("fit_fringe: need at least three distinct phases");
    }

    const auto n = static_cast<Eigen::Index>(phases.size());
    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        design(i, 0) = 1.0;
        design(i, 1) = std::cos(phases[i]);
        design(i, 2) = std::sin(phases[i]);
        y(i) = probabilities[i];
    }
    const Eigen::Vector3d c = design.colPivHouseholderQr().solve(y);

    // mean * (1 - V cos(phi - offset)) = mean - mean V cos(offset) cos(phi)
    //                                         - mean V sin(offset) sin(phi)
    FringeFit fit;
    fit.mean = c(0);
    const double amplitude = std::hypot(c(1), c(2));
    const double scale = std::max(1.0, std::abs(fit.mean));
    if (amplitude > 1e-12 * scale && std::abs(fit.mean) > 1e-15) {
        fit.visibility = amplitude / std::abs(fit.mean);
        fit.phase_offset = wrap_phase(std::atan2(-c(2), -c(1)) +
                                      (fit.mean < 0 ? std::numbers::pi : 0.0));
        fit.offset_defined = true;
    }
    const Eigen::VectorXd residual = design * c - y;
    fit.residual_rms = std::sqrt(residual.squaredNorm() / static_cast<double>(n));
    return fit;
}

FringeFit extract_visibility(const FringeData &data, std::string_view pattern_id) {
    const std::size_t k = data.pattern_index(pattern_id);
    std::vector<double> phases;
    std::vector<double> values;
    for (std::size_t i = 0; i < data.phase_grid.size(); ++i) {
        if (i < data.herald_failed.size() && data.herald_failed[i]) {
            continue;
        }
        phases.push_back(data.phase_grid[i]);
        values.push_back(data.probabilities[i][k]);
    }
    return fit_fringe(phases, values);
}

} // namespace cohswap
