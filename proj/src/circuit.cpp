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

#include "cohswap/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace cohswap {

namespace {

std::vector<ModeId> element_inputs(const Element &element) {
    return std::visit(
        [](const auto &spec) -> std::vector<ModeId> {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, BeamSplitterSpec>) {
                return {spec.input_1, spec.input_2};
            } else {
                return {spec.mode};
            }
        },
        element);
}

std::vector<ModeId> element_outputs(const Element &element) {
    return std::visit(
        [](const auto &spec) -> std::vector<ModeId> {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, BeamSplitterSpec>) {
                return {spec.output_1, spec.output_2};
            } else {
                return {spec.mode};
            }
        },
        element);
}

bool is_renamed_output(const Element &element, const ModeId &mode) {
    const auto *bs = std::get_if<BeamSplitterSpec>(&element);
    return bs != nullptr && mode != bs->input_1 && mode != bs->input_2 &&
           (mode == bs->output_1 || mode == bs->output_2);
}

std::string describe(const Element &element, std::size_t index) {
    return "element #" + std::to_string(index) + " (" + element_label(element) + ")";
}

} // namespace

std::string_view to_string(Diagnostic::Kind kind) {
    switch (kind) {
    case Diagnostic::Kind::UnknownMode:
        return "unknown-mode";
    case Diagnostic::Kind::Ordering:
        return "ordering";
    case Diagnostic::Kind::Truncation:
        return "truncation";
    case Diagnostic::Kind::InvalidElement:
        return "invalid-element";
    case Diagnostic::Kind::InvalidRegistry:
        return "invalid-registry";
    }
    return "unknown";
}

CircuitError::CircuitError(std::vector<Diagnostic> diagnostics)
    : std::invalid_argument([&] {
          std::string msg = "invalid circuit:";
          for (const auto &d : diagnostics) {
              msg += "\n  [" + std::string(to_string(d.kind)) + "] " + d.message;
          }
          return msg;
      }()),
      diagnostics_(std::move(diagnostics)) {}

std::vector<Diagnostic> validate(const Circuit &circuit) {
    std::vector<Diagnostic> out;
    try {
        ModeRegistry registry(circuit.modes);
        if (registry.empty()) {
            out.push_back({Diagnostic::Kind::InvalidRegistry,
                           "circuit declares no modes", "", std::nullopt});
        }
    } catch (const std::invalid_argument &e) {
        out.push_back({Diagnostic::Kind::InvalidRegistry, e.what(), "", std::nullopt});
    }
    const std::set<ModeId> registered(circuit.modes.begin(), circuit.modes.end());

    // Modes created later by a renaming splitter start out absent.
    std::set<ModeId> pending;
    for (const auto &element : circuit.elements) {
        for (const auto &mode : element_outputs(element)) {
            if (is_renamed_output(element, mode)) {
                pending.insert(mode);
            }
        }
    }
    std::set<ModeId> live;
    for (const auto &mode : registered) {
        if (!pending.contains(mode)) {
            live.insert(mode);
        }
    }

    std::uint64_t photons = 0;
    for (const auto &source : circuit.sources) {
        photons += source.photons;
        if (!registered.contains(source.mode)) {
            out.push_back({Diagnostic::Kind::UnknownMode,
                           "source references unregistered mode '" + source.mode + "'",
                           source.mode, std::nullopt});
        } else if (!live.contains(source.mode)) {
            out.push_back({Diagnostic::Kind::Ordering,
                           "source mode '" + source.mode +
                               "' is only created later by a beam splitter",
                           source.mode, std::nullopt});
        }
    }
    if (photons > circuit.truncation.max_photons) {
        out.push_back({Diagnostic::Kind::Truncation,
                       std::to_string(photons) + " source photons exceed N_max = " +
                           std::to_string(circuit.truncation.max_photons),
                       "", std::nullopt});
    }

    for (std::size_t i = 0; i < circuit.elements.size(); ++i) {
        const Element &element = circuit.elements[i];
        if (const auto *bs = std::get_if<BeamSplitterSpec>(&element)) {
            try {
                check_spec(*bs);
            } catch (const std::invalid_argument &e) {
                out.push_back({Diagnostic::Kind::InvalidElement, e.what(), "", i});
            }
        }
        bool known = true;
        for (const auto &mode : element_inputs(element)) {
            if (!registered.contains(mode)) {
                known = false;
                out.push_back({Diagnostic::Kind::UnknownMode,
                               describe(element, i) + " references unregistered mode '" +
                                   mode + "'",
                               mode, i});
            } else if (!live.contains(mode)) {
                out.push_back({Diagnostic::Kind::Ordering,
                               describe(element, i) + " uses mode '" + mode +
                                   "' before it exists or after it was consumed",
                               mode, i});
            }
        }
        for (const auto &mode : element_outputs(element)) {
            if (!registered.contains(mode)) {
                known = false;
                if (std::ranges::count(element_inputs(element), mode) == 0) {
                    out.push_back({Diagnostic::Kind::UnknownMode,
                                   describe(element, i) +
                                       " references unregistered mode '" + mode + "'",
                                   mode, i});
                }
            } else if (is_renamed_output(element, mode) && live.contains(mode)) {
                out.push_back({Diagnostic::Kind::Ordering,
                               describe(element, i) + " emits into mode '" + mode +
                                   "' which already exists",
                               mode, i});
            }
        }
        if (!known) {
            continue;
        }
        if (const auto *bs = std::get_if<BeamSplitterSpec>(&element)) {
            for (const auto &mode : {bs->input_1, bs->input_2}) {
                if (mode != bs->output_1 && mode != bs->output_2) {
                    live.erase(mode);
                }
            }
            live.insert(bs->output_1);
            live.insert(bs->output_2);
        }
    }
    return out;
}

FockState prepare_sources(const Circuit &circuit) {
    auto diagnostics = validate(circuit);
    if (!diagnostics.empty()) {
        throw CircuitError(std::move(diagnostics));
    }
    FockState state = vacuum(make_registry(circuit.modes), circuit.truncation);
    for (const auto &source : circuit.sources) {
        for (std::uint32_t k = 0; k < source.photons; ++k) {
            state = apply_creation(state, source.mode);
        }
    }
    return state.normalized();
}

FockState simulate_prefix(const Circuit &circuit, std::size_t element_count) {
    if (element_count > circuit.elements.size()) {
        throw std::out_of_range("simulate_prefix: element count out of range");
    }
    FockState state = prepare_sources(circuit);
    for (std::size_t i = 0; i < element_count; ++i) {
        state = apply_element(state, circuit.elements[i]);
    }
    return state;
}

FockState simulate(const Circuit &circuit) {
    return simulate_prefix(circuit, circuit.elements.size());
}

double wrap_phase(double angle) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::remainder(angle, two_pi);  // in [-pi, pi]
    if (r <= -std::numbers::pi) {
        r += two_pi;
    }
    return r;
}

double enclosed_flux(const FluxAssignment &assignment, std::size_t loop_index) {
    if (loop_index >= assignment.loops.size()) {
        throw std::out_of_range("enclosed_flux: loop index " +
                                std::to_string(loop_index) + " not declared");
    }
    const FluxLoop &loop = assignment.loops[loop_index];
    double sum = 0.0;
    for (const auto &segment : loop.path) {
        auto it = assignment.segment_phases.find(segment.mode);
        if (it != assignment.segment_phases.end()) {
            sum += segment.orientation * it->second;
        }
    }
    return wrap_phase(loop.winding * sum);
}

Circuit attach_flux(Circuit circuit, const FluxAssignment &assignment) {
    const ModeRegistry registry(circuit.modes);
    // Insert from the back so earlier insertion points stay valid.
    std::vector<std::pair<std::size_t, FluxSegmentSpec>> insertions;
    for (const auto &[mode, phase] : assignment.segment_phases) {
        (void)registry.index(mode);
        std::size_t at = 0;
        for (std::size_t i = 0; i < circuit.elements.size(); ++i) {
            const auto *bs = std::get_if<BeamSplitterSpec>(&circuit.elements[i]);
            if (bs != nullptr && (bs->output_1 == mode || bs->output_2 == mode)) {
                at = i + 1;
                break;
            }
        }
        insertions.emplace_back(at, FluxSegmentSpec{mode, phase});
    }
    std::stable_sort(insertions.begin(), insertions.end(),
                     [](const auto &l, const auto &r) { return l.first > r.first; });
    for (const auto &[at, spec] : insertions) {
        circuit.elements.insert(circuit.elements.begin() + static_cast<std::ptrdiff_t>(at),
                                spec);
    }
    return circuit;
}

namespace fig1 {

Circuit circuit(double scan_phase) {
    using enum BeamSplitterConvention;
    Circuit c;
    c.modes = {"a", "b", "c", "d", "b_out", "c_out", "a_out", "d_out"};
    c.truncation = Truncation{};
    c.sources = {{"a", 1}, {"c", 1}};
    c.elements = {
        BeamSplitterSpec{"BS1", "a", "b", "a", "b", RealHadamard, 0.5},
        BeamSplitterSpec{"BS2", "c", "d", "c", "d", RealHadamard, 0.5},
        MirrorSpec{"M1", "a", 0.0},
        MirrorSpec{"M2", "d", 0.0},
        BeamSplitterSpec{"BS3", "b", "c", "b_out", "c_out", RealHadamard, 0.5},
        PhaseShifterSpec{"PS", "d", scan_phase},
        BeamSplitterSpec{"BS4", "a", "d", "a_out", "d_out", RealHadamard, 0.5},
    };
    return c;
}

FluxLoop internal_loop() {
    return FluxLoop{"internal", {{"a", +1}, {"d", -1}, {"c", +1}, {"b", -1}}, +1};
}

DetectionPattern b_click() { return {{{"b_out", 1}, {"c_out", 0}}}; }

DetectionPattern c_click() { return {{{"b_out", 0}, {"c_out", 1}}}; }

} // namespace fig1

} // namespace cohswap
