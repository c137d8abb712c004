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
 * Declarative interferometer circuits, validation, simulation and
 * Aharonov-Bohm loop bookkeeping.
 *
 * Mode lifetime rule used by validate(): a mode that appears as a *renamed*
 * beam-splitter output (an output name that is not one of that splitter's
 * inputs) does not exist until that splitter fires. A renamed splitter
 * consumes its input modes; they may not be used afterwards. All other
 * registered modes exist from the start, holding vacuum unless sourced.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cohswap/elements.hpp"
#include "cohswap/fock.hpp"

namespace cohswap {

struct Source {
    ModeId mode;
    std::uint32_t photons = 1;
};

struct Circuit {
    std::vector<ModeId> modes;
    Truncation truncation;
    std::vector<Source> sources;
    std::vector<Element> elements;
};

struct Diagnostic {
    enum class Kind { UnknownMode, Ordering, Truncation, InvalidElement, InvalidRegistry };

    Kind kind;
    std::string message;
    /// Offending mode, when there is one.
    std::string mode;
    std::optional<std::size_t> element_index;
};

[[nodiscard]] std::string_view to_string(Diagnostic::Kind kind);

/// Thrown by simulate() on a circuit that does not validate.
class CircuitError : public std::invalid_argument {
  public:
    explicit CircuitError(std::vector<Diagnostic> diagnostics);
    [[nodiscard]] const std::vector<Diagnostic> &diagnostics() const noexcept {
        return diagnostics_;
    }

  private:
    std::vector<Diagnostic> diagnostics_;
};

/// Empty iff the circuit is well formed. Never throws.
[[nodiscard]] std::vector<Diagnostic> validate(const Circuit &circuit);

/// Vacuum, then creation operators for each source, then every element in
/// order. Throws CircuitError when validate() reports problems.
[[nodiscard]] FockState simulate(const Circuit &circuit);

/// As simulate(), stopping after the first `element_count` elements.
[[nodiscard]] FockState simulate_prefix(const Circuit &circuit,
                                        std::size_t element_count);

/// Returns the state after the source creation operators only.
[[nodiscard]] FockState prepare_sources(const Circuit &circuit);

/// One directed path segment of a closed loop. orientation is +1 when the
/// loop runs along the photon's direction of travel in that mode, -1 when
/// it runs against it.
struct LoopSegment {
    ModeId mode;
    int orientation = +1;
};

struct FluxLoop {
    std::string name;
    std::vector<LoopSegment> path;
    /// Overall winding sign of the loop (+1 counter-clockwise).
    int winding = +1;
};

struct FluxAssignment {
    /// (e / hbar c) * integral of A.dx along each mode's path, in radians.
    std::map<ModeId, double> segment_phases;
    std::vector<FluxLoop> loops;
};

/// Maps any angle into (-pi, pi].
[[nodiscard]] double wrap_phase(double angle);

/// winding * sum(orientation * segment_phase) over the loop, wrapped to
/// (-pi, pi]. Throws std::out_of_range for an undeclared loop.
[[nodiscard]] double enclosed_flux(const FluxAssignment &assignment,
                                   std::size_t loop_index);

/// Inserts one FluxSegmentSpec per assigned mode immediately after the
/// first element that emits that mode (or at the start if none does).
/// Throws UnknownModeError for unregistered modes.
[[nodiscard]] Circuit attach_flux(Circuit circuit,
                                  const FluxAssignment &assignment);

/**
 * Built-in two-source coherence-swapping interferometer.
 *
 * Sources a^dag and c^dag feed BS1 (a, b -> a, b) and BS2 (c, d -> c, d).
 * Mirrors M1, M2 fold beams a and d, BS3 mixes b and c into b_out, c_out,
 * a phase shifter sits on d, and BS4 recombines a and d into a_out, d_out.
 * The last splitter is called BS4 throughout (other texts also use BM4 or
 * BSX for it). All splitters use the real-hadamard 50:50 convention.
 */
namespace fig1 {

inline constexpr std::size_t kBs3Index = 4;  ///< BS1, BS2, M1, M2, BS3
inline constexpr std::size_t kBs4Index = 6;

[[nodiscard]] Circuit circuit(double scan_phase = 0.0);

/// Internal loop a -> (BS4) <- d <- (BS2) -> c -> (BS3) <- b <- (BS1).
/// Photons travel along a and c with the loop and against it on b and d.
[[nodiscard]] FluxLoop internal_loop();

/// Single photon in b_out, none in c_out.
[[nodiscard]] DetectionPattern b_click();
/// Single photon in c_out, none in b_out.
[[nodiscard]] DetectionPattern c_click();

} // namespace fig1

} // namespace cohswap
