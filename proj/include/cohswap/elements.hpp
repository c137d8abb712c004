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
 * Linear optical elements acting on FockState by substitution of creation
 * operators.
 *
 * A two-mode element with transfer matrix U maps annihilation operators as
 * out_i = sum_j U[i][j] in_j. For unitary U the creation operators of the
 * input ports are replaced by in_j^dag = sum_i U[i][j] out_i^dag, which is
 * what apply_two_mode expands term by term.
 */

#pragma once

#include <array>
#include <string>
#include <string_view>
#include <variant>

#include "cohswap/fock.hpp"

namespace cohswap {

using TransferMatrix = std::array<std::array<Amplitude, 2>, 2>;

enum class BeamSplitterConvention {
    /// [[sqrt(t), sqrt(1-t)], [sqrt(1-t), -sqrt(t)]]
    RealHadamard,
    /// [[sqrt(t), i sqrt(1-t)], [i sqrt(1-t), sqrt(t)]]
    SymmetricI,
};

[[nodiscard]] std::string_view to_string(BeamSplitterConvention convention);
/// Accepts "real-hadamard" and "symmetric-i".
[[nodiscard]] BeamSplitterConvention
parse_convention(std::string_view text);

/// Output names may repeat the input names (transmitted beams keep their
/// letter) or introduce new modes such as b_out.
struct BeamSplitterSpec {
    std::string name;
    ModeId input_1;
    ModeId input_2;
    ModeId output_1;
    ModeId output_2;
    BeamSplitterConvention convention = BeamSplitterConvention::RealHadamard;
    double transmissivity = 0.5;
};

struct PhaseShifterSpec {
    std::string name;
    ModeId mode;
    double phi = 0.0;
};

/// Aharonov-Bohm phase (e / hbar c) * integral of A.dx along one path
/// segment. Acts on the state exactly like a phase shifter; the distinct
/// type keeps flux bookkeeping separate from tunable phases.
struct FluxSegmentSpec {
    ModeId mode;
    double segment_phase = 0.0;
};

/// Plain mirror: identity, or a configurable reflection phase (0 or pi).
struct MirrorSpec {
    std::string name;
    ModeId mode;
    double phase = 0.0;
};

using Element =
    std::variant<BeamSplitterSpec, PhaseShifterSpec, FluxSegmentSpec, MirrorSpec>;

/// Throws std::invalid_argument for transmissivity outside [0, 1] or
/// repeated input / output modes.
void check_spec(const BeamSplitterSpec &spec);

[[nodiscard]] TransferMatrix transfer_matrix(const BeamSplitterSpec &spec);

[[nodiscard]] TransferMatrix adjoint(const TransferMatrix &m);
[[nodiscard]] TransferMatrix multiply(const TransferMatrix &lhs,
                                      const TransferMatrix &rhs);
/// max |(U U^dag - I)_ij|
[[nodiscard]] double unitarity_defect(const TransferMatrix &m);

/// General two-mode linear substitution; see file comment for the convention.
[[nodiscard]] FockState apply_two_mode(const FockState &state,
                                       std::string_view input_1,
                                       std::string_view input_2,
                                       std::string_view output_1,
                                       std::string_view output_2,
                                       const TransferMatrix &matrix);

[[nodiscard]] FockState apply_beam_splitter(const FockState &state,
                                            const BeamSplitterSpec &spec);

/// Each term picks up exp(i * phi * n_mode).
[[nodiscard]] FockState apply_phase(const FockState &state,
                                    const PhaseShifterSpec &spec);

[[nodiscard]] FockState apply_flux_segment(const FockState &state,
                                           const FluxSegmentSpec &spec);

[[nodiscard]] FockState apply_mirror(const FockState &state,
                                     const MirrorSpec &spec);

[[nodiscard]] FockState apply_element(const FockState &state,
                                      const Element &element);

/// Display label: the element's name, or its kind and mode.
[[nodiscard]] std::string element_label(const Element &element);

} // namespace cohswap
