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

#include "cohswap/elements.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace cohswap {

namespace {

constexpr Amplitude kI{0.0, 1.0};

// Binomial coefficients up to the truncation limit are small, so a direct
// table per call is fine.
std::vector<std::vector<double>> binomials(std::uint32_t n_max) {
    std::vector<std::vector<double>> c(n_max + 1);
    for (std::uint32_t n = 0; n <= n_max; ++n) {
        c[n].assign(n + 1, 1.0);
        for (std::uint32_t k = 1; k < n; ++k) {
            c[n][k] = c[n - 1][k - 1] + c[n - 1][k];
        }
    }
    return c;
}

Amplitude int_pow(Amplitude base, std::uint32_t exponent) {
    Amplitude result{1.0, 0.0};
    for (std::uint32_t k = 0; k < exponent; ++k) {
        result *= base;
    }
    return result;
}

double factorial(std::uint32_t n) {
    double f = 1.0;
    for (std::uint32_t k = 2; k <= n; ++k) {
        f *= k;
    }
    return f;
}

FockState phase_on_mode(const FockState &state, std::string_view mode,
                        double phi) {
    const std::size_t k = state.registry().index(mode);
    FockState out(state.registry_ptr(), state.truncation());
    for (const auto &[occ, amp] : state.terms()) {
        out.add(occ, amp * std::polar(1.0, phi * occ[k]));
    }
    return out;
}

} // namespace

std::string_view to_string(BeamSplitterConvention convention) {
    switch (convention) {
    case BeamSplitterConvention::RealHadamard:
        return "real-hadamard";
    case BeamSplitterConvention::SymmetricI:
        return "symmetric-i";
    }
    return "unknown";
}

BeamSplitterConvention parse_convention(std::string_view text) {
    if (text == "real-hadamard") {
        return BeamSplitterConvention::RealHadamard;
    }
    if (text == "symmetric-i") {
        return BeamSplitterConvention::SymmetricI;
    }
    throw std::invalid_argument("unknown beam splitter convention '" +
                                std::string(text) + "'");
}

void check_spec(const BeamSplitterSpec &spec) {
    if (!(spec.transmissivity >= 0.0 && spec.transmissivity <= 1.0)) {
        throw std::invalid_argument("beam splitter '" + spec.name +
                                    "': transmissivity must lie in [0, 1]");
    }
    if (spec.input_1 == spec.input_2) {
        throw std::invalid_argument("beam splitter '" + spec.name +
                                    "': input modes must be distinct");
    }
    if (spec.output_1 == spec.output_2) {
        throw std::invalid_argument("beam splitter '" + spec.name +
                                    "': output modes must be distinct");
    }
}

TransferMatrix transfer_matrix(const BeamSplitterSpec &spec) {
    check_spec(spec);
    const double t = std::sqrt(spec.transmissivity);
    const double r = std::sqrt(1.0 - spec.transmissivity);
    switch (spec.convention) {
    case BeamSplitterConvention::RealHadamard:
        return {{{t, r}, {r, -t}}};
    case BeamSplitterConvention::SymmetricI:
        return {{{t, kI * r}, {kI * r, t}}};
    }
    throw std::logic_error("unhandled beam splitter convention");
}

TransferMatrix adjoint(const TransferMatrix &m) {
    return {{{std::conj(m[0][0]), std::conj(m[1][0])},
             {std::conj(m[0][1]), std::conj(m[1][1])}}};
}

TransferMatrix multiply(const TransferMatrix &lhs, const TransferMatrix &rhs) {
    TransferMatrix out{};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            out[i][j] = lhs[i][0] * rhs[0][j] + lhs[i][1] * rhs[1][j];
        }
    }
    return out;
}

double unitarity_defect(const TransferMatrix &m) {
    const TransferMatrix p = multiply(m, adjoint(m));
    double worst = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            worst = std::max(worst, std::abs(p[i][j] - Amplitude(i == j ? 1.0 : 0.0)));
        }
    }
    return worst;
}

FockState apply_two_mode(const FockState &state, std::string_view input_1,
                         std::string_view input_2, std::string_view output_1,
                         std::string_view output_2,
                         const TransferMatrix &matrix) {
    const ModeRegistry &reg = state.registry();
    const std::size_t in1 = reg.index(input_1);
    const std::size_t in2 = reg.index(input_2);
    const std::size_t out1 = reg.index(output_1);
    const std::size_t out2 = reg.index(output_2);
    if (in1 == in2 || out1 == out2) {
        throw std::invalid_argument("two-mode element needs distinct modes");
    }

    const auto binom = binomials(state.truncation().max_photons);
    FockState result(state.registry_ptr(), state.truncation());

    for (const auto &[occ, amp] : state.terms()) {
        const std::uint32_t n1 = occ[in1];
        const std::uint32_t n2 = occ[in2];
        Occupation base = occ;
        base[in1] = 0;
        base[in2] = 0;
        // |n1, n2> = (in1^dag)^n1 (in2^dag)^n2 / sqrt(n1! n2!) |0>
        const Amplitude prefactor = amp / std::sqrt(factorial(n1) * factorial(n2));

        // (U00 o1 + U10 o2)^n1 (U01 o1 + U11 o2)^n2 in creation operators
        for (std::uint32_t k1 = 0; k1 <= n1; ++k1) {
            const Amplitude c1 = binom[n1][k1] * int_pow(matrix[0][0], k1) *
                                 int_pow(matrix[1][0], n1 - k1);
            for (std::uint32_t k2 = 0; k2 <= n2; ++k2) {
                const Amplitude c2 = binom[n2][k2] * int_pow(matrix[0][1], k2) *
                                     int_pow(matrix[1][1], n2 - k2);
                const std::uint32_t m1 = k1 + k2;
                const std::uint32_t m2 = (n1 - k1) + (n2 - k2);
                Occupation target = base;
                const std::uint32_t b1 = target[out1];
                const std::uint32_t b2 = target[out2];
                target[out1] = b1 + m1;
                target[out2] = b2 + m2;
                // (o^dag)^m |b> = sqrt((b+m)!/b!) |b+m>
                const double ladder =
                    std::sqrt(factorial(b1 + m1) / factorial(b1) *
                              factorial(b2 + m2) / factorial(b2));
                result.add(target, prefactor * c1 * c2 * ladder);
            }
        }
    }
    return result;
}

FockState apply_beam_splitter(const FockState &state,
                              const BeamSplitterSpec &spec) {
    return apply_two_mode(state, spec.input_1, spec.input_2, spec.output_1,
                          spec.output_2, transfer_matrix(spec));
}

FockState apply_phase(const FockState &state, const PhaseShifterSpec &spec) {
    if (!std::isfinite(spec.phi)) {
        throw std::invalid_argument("phase must be finite");
    }
    return phase_on_mode(state, spec.mode, spec.phi);
}

FockState apply_flux_segment(const FockState &state,
                             const FluxSegmentSpec &spec) {
    if (!std::isfinite(spec.segment_phase)) {
        throw std::invalid_argument("segment phase must be finite");
    }
    return phase_on_mode(state, spec.mode, spec.segment_phase);
}

FockState apply_mirror(const FockState &state, const MirrorSpec &spec) {
    if (!std::isfinite(spec.phase)) {
        throw std::invalid_argument("mirror phase must be finite");
    }
    return phase_on_mode(state, spec.mode, spec.phase);
}

FockState apply_element(const FockState &state, const Element &element) {
    return std::visit(
        [&state](const auto &spec) -> FockState {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, BeamSplitterSpec>) {
                return apply_beam_splitter(state, spec);
            } else if constexpr (std::is_same_v<T, PhaseShifterSpec>) {
                return apply_phase(state, spec);
            } else if constexpr (std::is_same_v<T, FluxSegmentSpec>) {
                return apply_flux_segment(state, spec);
            } else {
                return apply_mirror(state, spec);
            }
        },
        element);
}

std::string element_label(const Element &element) {
    return std::visit(
        [](const auto &spec) -> std::string {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, FluxSegmentSpec>) {
                return "flux(" + spec.mode + ")";
            } else if constexpr (std::is_same_v<T, BeamSplitterSpec>) {
                return spec.name.empty() ? "beam_splitter(" + spec.input_1 +
                                               "," + spec.input_2 + ")"
                                         : spec.name;
            } else if constexpr (std::is_same_v<T, PhaseShifterSpec>) {
                return spec.name.empty() ? "phase(" + spec.mode + ")" : spec.name;
            } else {
                return spec.name.empty() ? "mirror(" + spec.mode + ")" : spec.name;
            }
        },
        element);
}

} // namespace cohswap
