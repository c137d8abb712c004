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
 * Sparse bosonic Fock-state algebra over a small, named set of optical modes.
 *
 * A FockState maps occupation vectors (photons per mode, in registry order)
 * to complex amplitudes. Keys are kept in an ordered map so every operation
 * is deterministic and two identical computations produce bit-identical
 * term maps.
 *
 * Amplitudes are stored in the normalized number basis. Creation operators
 * follow the usual ladder rule a^dag |n> = sqrt(n+1) |n+1>, so a monomial
 * written as c * (a^dag)^2 |0> is stored as amplitude c * sqrt(2) on |2>.
 * For example the bunched term 1/4 * (b_out^dag)^2 |0> has normalized-basis
 * coefficient sqrt(2)/4.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cohswap {

using Amplitude = std::complex<double>;
using ModeId = std::string;
using Occupation = std::vector<std::uint32_t>;

/// Thrown when an operation names a mode that is not registered.
class UnknownModeError : public std::invalid_argument {
  public:
    explicit UnknownModeError(const std::string &mode)
        : std::invalid_argument("unknown mode '" + mode + "'"), mode_(mode) {}
    [[nodiscard]] const std::string &mode() const noexcept { return mode_; }

  private:
    std::string mode_;
};

/// Thrown when a creation would push the total photon number past N_max.
class TruncationError : public std::out_of_range {
  public:
    using std::out_of_range::out_of_range;
};

/// Thrown when two states built on different registries are combined.
class RegistryMismatchError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Ordered set of unique, non-empty mode names.
class ModeRegistry {
  public:
    ModeRegistry() = default;
    explicit ModeRegistry(std::vector<ModeId> names);

    [[nodiscard]] std::size_t size() const noexcept { return names_.size(); }
    [[nodiscard]] bool empty() const noexcept { return names_.empty(); }
    [[nodiscard]] const std::vector<ModeId> &names() const noexcept {
        return names_;
    }
    [[nodiscard]] bool contains(std::string_view name) const;
    [[nodiscard]] std::optional<std::size_t>
    find(std::string_view name) const;
    /// Index of `name`; throws UnknownModeError.
    [[nodiscard]] std::size_t index(std::string_view name) const;

    friend bool operator==(const ModeRegistry &,
                           const ModeRegistry &) = default;

  private:
    std::vector<ModeId> names_;
};

using RegistryPtr = std::shared_ptr<const ModeRegistry>;

RegistryPtr make_registry(std::vector<ModeId> names);

struct Truncation {
    /// Maximum total photon number over all modes.
    std::uint32_t max_photons = 4;
    /// Amplitudes with magnitude below this are dropped after each operation.
    double prune_threshold = 1e-14;

    friend bool operator==(const Truncation &, const Truncation &) = default;
};

class FockState {
  public:
    using TermMap = std::map<Occupation, Amplitude>;

    explicit FockState(RegistryPtr registry, Truncation truncation = {});

    [[nodiscard]] const ModeRegistry &registry() const noexcept {
        return *registry_;
    }
    [[nodiscard]] const RegistryPtr &registry_ptr() const noexcept {
        return registry_;
    }
    [[nodiscard]] const Truncation &truncation() const noexcept {
        return truncation_;
    }
    [[nodiscard]] const TermMap &terms() const noexcept { return terms_; }
    [[nodiscard]] bool empty() const noexcept { return terms_.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }

    /// Amplitude on a basis ket; zero when absent.
    [[nodiscard]] Amplitude amplitude(const Occupation &occupation) const;
    /// Convenience lookup by per-mode counts, e.g. {{"a", 1}, {"d", 1}}.
    /// Unlisted modes are taken to hold zero photons.
    [[nodiscard]] Amplitude
    amplitude(const std::map<ModeId, std::uint32_t> &counts) const;

    [[nodiscard]] double norm_squared() const;
    [[nodiscard]] double norm() const;

    /// Accumulates `value` onto the ket `occupation`. Validates length and
    /// truncation. The term is pruned if the sum falls below the threshold.
    void add(const Occupation &occupation, Amplitude value);

    [[nodiscard]] FockState scaled(Amplitude factor) const;
    /// Returns the state divided by its norm; throws on a zero state.
    [[nodiscard]] FockState normalized() const;

    /// True when both states share registry contents and truncation.
    [[nodiscard]] bool compatible_with(const FockState &other) const;

    /// Human-readable ket listing, e.g. "0.5|a:1 d:1> + ...".
    [[nodiscard]] std::string to_string() const;

  private:
    RegistryPtr registry_;
    Truncation truncation_;
    TermMap terms_;
};

[[nodiscard]] std::uint32_t total_photons(const Occupation &occupation);

/// Single all-zeros term with amplitude 1. Throws on an empty registry.
[[nodiscard]] FockState vacuum(RegistryPtr registry, Truncation truncation = {});

/// Applies a^dag on `mode` to every term with the sqrt(n+1) ladder factor.
[[nodiscard]] FockState apply_creation(const FockState &state,
                                       std::string_view mode);

/// Applies a on `mode` with the sqrt(n) ladder factor; vacuum terms vanish.
[[nodiscard]] FockState apply_annihilation(const FockState &state,
                                           std::string_view mode);

/// Term-wise linear combination sum_k c_k |s_k>. Parts must share a registry.
[[nodiscard]] FockState
superpose(std::span<const std::pair<Amplitude, FockState>> parts);
[[nodiscard]] FockState
superpose(std::initializer_list<std::pair<Amplitude, FockState>> parts);

/// <lhs|rhs>, conjugate-linear in the left argument.
[[nodiscard]] Amplitude inner_product(const FockState &lhs,
                                      const FockState &rhs);

/// Exact photon counts demanded on a subset of modes.
struct DetectionPattern {
    std::map<ModeId, std::uint32_t> demands;

    friend bool operator==(const DetectionPattern &,
                           const DetectionPattern &) = default;
};

struct Projection {
    double probability = 0.0;
    /// Renormalized post-measurement state on the modes not named in the
    /// pattern. Empty when the pattern has zero probability.
    std::optional<FockState> remainder;

    [[nodiscard]] bool vanished() const noexcept { return !remainder; }
};

/// Keeps the terms whose counts on the pattern modes equal the demands.
/// probability = ||kept||^2 / ||state||^2. The remainder lives on a fresh
/// registry holding the unmeasured modes in their original order.
[[nodiscard]] Projection project(const FockState &state,
                                 const DetectionPattern &pattern);

} // namespace cohswap
