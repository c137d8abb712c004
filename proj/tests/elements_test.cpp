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

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "cohswap/elements.hpp"

namespace cohswap {
namespace {

using std::numbers::pi;

FockState one_photon(const RegistryPtr &reg, std::string_view mode) {
    return apply_creation(vacuum(reg), mode);
}

TEST(TransferMatrix, RealHadamardEntries) {
    const TransferMatrix m = transfer_matrix({"bs", "x", "y", "x", "y",
                                              BeamSplitterConvention::RealHadamard, 0.3});
    EXPECT_NEAR(m[0][0].real(), std::sqrt(0.3), 1e-15);
    EXPECT_NEAR(m[0][1].real(), std::sqrt(0.7), 1e-15);
    EXPECT_NEAR(m[1][0].real(), std::sqrt(0.7), 1e-15);
    EXPECT_NEAR(m[1][1].real(), -std::sqrt(0.3), 1e-15);
}

TEST(TransferMatrix, SymmetricEntries) {
    const TransferMatrix m = transfer_matrix({"bs", "x", "y", "x", "y",
                                              BeamSplitterConvention::SymmetricI, 0.5});
    EXPECT_NEAR(std::abs(m[0][1] - Amplitude(0.0, std::sqrt(0.5))), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(m[1][1] - Amplitude(std::sqrt(0.5), 0.0)), 0.0, 1e-15);
}

TEST(TransferMatrix, UnitaryForAllTransmissivities) {
    for (auto conv : {BeamSplitterConvention::RealHadamard, BeamSplitterConvention::SymmetricI}) {
        for (double t : {0.0, 0.1, 0.5, 0.77, 1.0}) {
            EXPECT_LT(unitarity_defect(transfer_matrix({"bs", "x", "y", "x", "y", conv, t})),
                      1e-15);
        }
    }
}

TEST(TransferMatrix, ConventionNames) {
    EXPECT_EQ(parse_convention("real-hadamard"), BeamSplitterConvention::RealHadamard);
    EXPECT_EQ(parse_convention("symmetric-i"), BeamSplitterConvention::SymmetricI);
    EXPECT_EQ(to_string(BeamSplitterConvention::SymmetricI), "symmetric-i");
    EXPECT_THROW((void)parse_convention("cube"), std::invalid_argument);
}

TEST(BeamSplitter, RejectsBadSpecs) {
    const auto reg = make_registry({"x", "y"});
    const FockState s = one_photon(reg, "x");
    BeamSplitterSpec bad{"bs", "x", "y", "x", "y", BeamSplitterConvention::RealHadamard, 1.5};
    EXPECT_THROW((void)apply_beam_splitter(s, bad), std::invalid_argument);
    bad.transmissivity = 0.5;
    bad.input_2 = "x";
    EXPECT_THROW((void)apply_beam_splitter(s, bad), std::invalid_argument);
}

TEST(BeamSplitter, SinglePhotonSplitsEvenly) {
    const auto reg = make_registry({"x", "y"});
    const FockState out = apply_beam_splitter(
        one_photon(reg, "x"), {"bs", "x", "y", "x", "y", BeamSplitterConvention::RealHadamard});
    EXPECT_NEAR(out.amplitude(Occupation{1, 0}).real(), std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(out.amplitude(Occupation{0, 1}).real(), std::sqrt(0.5), 1e-15);
}

TEST(BeamSplitter, FullTransmissionIsIdentity) {
    const auto reg = make_registry({"x", "y"});
    FockState s(reg);
    s.add({2, 1}, 1.0);
    const FockState out = apply_beam_splitter(
        s, {"bs", "x", "y", "x", "y", BeamSplitterConvention::SymmetricI, 1.0});
    EXPECT_EQ(out.size(), 1u);
    EXPECT_NEAR(std::abs(out.amplitude(Occupation{2, 1}) - 1.0), 0.0, 1e-14);
}

TEST(BeamSplitter, RenamesOutputs) {
    const auto reg = make_registry({"x", "y", "u", "v"});
    const FockState out = apply_beam_splitter(
        one_photon(reg, "x"), {"bs", "x", "y", "u", "v", BeamSplitterConvention::RealHadamard});
    EXPECT_NEAR(out.amplitude({{"u", 1}}).real(), std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(out.amplitude({{"v", 1}}).real(), std::sqrt(0.5), 1e-15);
    EXPECT_EQ(out.amplitude({{"x", 1}}), Amplitude(0.0));
}

TEST(BeamSplitter, HongOuMandelDip) {
    for (auto conv : {BeamSplitterConvention::RealHadamard, BeamSplitterConvention::SymmetricI}) {
        const auto reg = make_registry({"x", "y"});
        const FockState in = apply_creation(one_photon(reg, "x"), "y");
        const FockState out = apply_beam_splitter(in, {"bs", "x", "y", "x", "y", conv});
        EXPECT_LT(project(out, {{{"x", 1}, {"y", 1}}}).probability, 1e-12);
        EXPECT_NEAR(project(out, {{{"x", 2}}}).probability, 0.5, 1e-14);
        EXPECT_NEAR(out.norm(), 1.0, 1e-14);
    }
}

TEST(BeamSplitter, InverseRestoresState) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto reg = make_registry({"x", "y", "z"});
    FockState s(reg);
    s.add({1, 1, 0}, {u(rng), u(rng)});
    s.add({2, 0, 1}, {u(rng), u(rng)});
    s.add({0, 3, 0}, {u(rng), u(rng)});
    s.add({0, 0, 4}, {u(rng), u(rng)});
    const BeamSplitterSpec spec{"bs", "x", "y", "x", "y", BeamSplitterConvention::SymmetricI,
                                0.37};
    const TransferMatrix m = transfer_matrix(spec);
    const FockState there = apply_beam_splitter(s, spec);
    EXPECT_NEAR(there.norm(), s.norm(), 1e-13);
    const FockState back = apply_two_mode(there, "x", "y", "x", "y", adjoint(m));
    EXPECT_LT(superpose({{1.0, back}, {-1.0, s}}).norm(), 1e-13);
}

TEST(BeamSplitter, PreservesPhotonNumber) {
    const auto reg = make_registry({"x", "y"});
    FockState s(reg);
    s.add({2, 1}, 0.6);
    s.add({0, 3}, 0.8);
    const FockState out = apply_beam_splitter(
        s, {"bs", "x", "y", "x", "y", BeamSplitterConvention::RealHadamard, 0.2});
    for (const auto &[occ, amp] : out.terms()) {
        EXPECT_EQ(total_photons(occ), 3u);
    }
    EXPECT_NEAR(out.norm(), 1.0, 1e-14);
}

TEST(PhaseShifter, PhasePerPhoton) {
    const auto reg = make_registry({"x"});
    FockState s(reg);
    s.add({2}, 1.0);
    const FockState out = apply_phase(s, {"ps", "x", 0.4});
    EXPECT_NEAR(std::abs(out.amplitude(Occupation{2}) - std::polar(1.0, 0.8)), 0.0, 1e-15);
    EXPECT_THROW((void)apply_phase(s, {"ps", "x", std::nan("")}), std::invalid_argument);
}

TEST(PhaseShifter, MirrorAndFluxActLikePhases) {
    const auto reg = make_registry({"x", "y"});
    const FockState s = one_photon(reg, "x");
    const FockState m = apply_mirror(s, {"m", "x", 0.3});
    const FockState f = apply_flux_segment(s, {"x", 0.3});
    const FockState p = apply_phase(s, {"p", "x", 0.3});
    EXPECT_LT(superpose({{1.0, m}, {-1.0, p}}).norm(), 1e-15);
    EXPECT_LT(superpose({{1.0, f}, {-1.0, p}}).norm(), 1e-15);
}

TEST(MachZehnder, FringeLaw) {
    const auto reg = make_registry({"x", "y"});
    const BeamSplitterSpec bs{"bs", "x", "y", "x", "y", BeamSplitterConvention::RealHadamard};
    for (int k = 0; k < 64; ++k) {
        const double phi = 2.0 * pi * k / 64.0;
        FockState s = apply_beam_splitter(one_photon(reg, "x"), bs);
        s = apply_phase(s, {"ps", "y", phi});
        s = apply_beam_splitter(s, bs);
        EXPECT_NEAR(project(s, {{{"y", 1}}}).probability, std::pow(std::sin(phi / 2), 2), 1e-12);
        EXPECT_NEAR(project(s, {{{"x", 1}}}).probability, std::pow(std::cos(phi / 2), 2), 1e-12);
    }
}

TEST(Element, LabelsAndDispatch) {
    const auto reg = make_registry({"x", "y"});
    const Element e = PhaseShifterSpec{"ps", "x", pi};
    EXPECT_FALSE(element_label(e).empty());
    const FockState out = apply_element(one_photon(reg, "x"), e);
    EXPECT_NEAR(out.amplitude({{"x", 1}}).real(), -1.0, 1e-15);
}

} // namespace
} // namespace cohswap
