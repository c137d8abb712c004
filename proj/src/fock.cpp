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

#include "cohswap/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace cohswap {

ModeRegistry::ModeRegistry(std::vector<ModeId> names) : names_(std::move(names)) {
    std::set<std::string_view> seen;
    for (const auto &name : names_) {
        if (name.empty()) {
            throw std::invalid_argument("mode names must be non-empty");
        }
        if (!seen.insert(name).second) {
            throw std::invalid_argument("duplicate mode '" + name + "'");
        }
    }
}

bool ModeRegistry::contains(std::string_view name) const {
    return find(name).has_value();
}

std::optional<std::size_t> ModeRegistry::find(std::string_view name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - names_.begin());
}

std::size_t ModeRegistry::index(std::string_view name) const {
    if (auto idx = find(name)) {
        return *idx;
    }
    throw UnknownModeError(std::string(name));
}

RegistryPtr make_registry(std::vector<ModeId> names) {
    return std::make_shared<const ModeRegistry>(std::move(names));
}

std::uint32_t total_photons(const Occupation &occupation) {
    return std::accumulate(occupation.begin(), occupation.end(),
                           std::uint32_t{0});
}

FockState::FockState(RegistryPtr registry, Truncation truncation)
    : registry_(std::move(registry)), truncation_(truncation) {
    if (!registry_) {
        throw std::invalid_argument("FockState requires a registry");
    }
}

Amplitude FockState::amplitude(const Occupation &occupation) const {
    auto it = terms_.find(occupation);
    return it == terms_.end() ? Amplitude{} : it->second;
}

Amplitude
FockState::amplitude(const std::map<ModeId, std::uint32_t> &counts) const {
    Occupation occ(registry_->size(), 0);
    for (const auto &[mode, n] : counts) {
        occ[registry_->index(mode)] = n;
    }
    return amplitude(occ);
}

double FockState::norm_squared() const {
    double sum = 0.0;
    for (const auto &[occ, amp] : terms_) {
        sum += std::norm(amp);
    }
    return sum;
}

double FockState::norm() const { return std::sqrt(norm_squared()); }

void FockState::add(const Occupation &occupation, Amplitude value) {
    if (occupation.size() != registry_->size()) {
        throw std::invalid_argument("occupation length does not match registry");
    }
    if (total_photons(occupation) > truncation_.max_photons) {
        throw TruncationError("total photon number exceeds N_max = " +
                              std::to_string(truncation_.max_photons));
    }
    auto [it, inserted] = terms_.try_emplace(occupation, value);
    if (!inserted) {
        it->second += value;
    }
    if (std::abs(it->second) < truncation_.prune_threshold) {
        terms_.erase(it);
    }
}

FockState FockState::scaled(Amplitude factor) const {
    FockState out(registry_, truncation_);
    for (const auto &[occ, amp] : terms_) {
        out.add(occ, amp * factor);
    }
    return out;
}

FockState FockState::normalized() const {
    const double n = norm();
    if (n == 0.0) {
        throw std::domain_error("cannot normalize a zero state");
    }
    return scaled(1.0 / n);
}

bool FockState::compatible_with(const FockState &other) const {
    return truncation_ == other.truncation_ &&
           (registry_ == other.registry_ || *registry_ == *other.registry_);
}

std::string FockState::to_string() const {
    if (terms_.empty()) {
        return "0";
    }
    std::ostringstream os;
    bool first = true;
    for (const auto &[occ, amp] : terms_) {
        if (!first) {
            os << " + ";
        }
        first = false;
        os << "(" << amp.real() << (amp.imag() < 0 ? "-" : "+")
           << std::abs(amp.imag()) << "i)|";
        bool any = false;
        for (std::size_t k = 0; k < occ.size(); ++k) {
            if (occ[k] != 0) {
                os << (any ? " " : "") << registry_->names()[k] << ":" << occ[k];
                any = true;
            }
        }
        os << ">";
    }
    return os.str();
}

FockState vacuum(RegistryPtr registry, Truncation truncation) {
    if (!registry || registry->empty()) {
        throw std::invalid_argument("vacuum requires a non-empty registry");
    }
    FockState state(registry, truncation);
    state.add(Occupation(registry->size(), 0), 1.0);
    return state;
}

FockState apply_creation(const FockState &state, std::string_view mode) {
    const std::size_t k = state.registry().index(mode);
    FockState out(state.registry_ptr(), state.truncation());
    for (const auto &[occ, amp] : state.terms()) {
        Occupation raised = occ;
        raised[k] += 1;
        out.add(raised, amp * std::sqrt(static_cast<double>(raised[k])));
    }
    return out;
}

FockState apply_annihilation(const FockState &state, std::string_view mode) {
    const std::size_t k = state.registry().index(mode);
    FockState out(state.registry_ptr(), state.truncation());
    for (const auto &[occ, amp] : state.terms()) {
        if (occ[k] == 0) {
            continue;
        }
        Occupation lowered = occ;
        lowered[k] -= 1;
        out.add(lowered, amp * std::sqrt(static_cast<double>(occ[k])));
    }
    return out;
}

FockState superpose(std::span<const std::pair<Amplitude, FockState>> parts) {
    if (parts.empty()) {
        throw std::invalid_argument("superpose needs at least one part");
    }
    const FockState &reference = parts.front().second;
    FockState out(reference.registry_ptr(), reference.truncation());
    for (const auto &[coeff, part] : parts) {
        if (!part.compatible_with(reference)) {
            throw RegistryMismatchError("superpose: parts use different registries");
        }
        for (const auto &[occ, amp] : part.terms()) {
            out.add(occ, coeff * amp);
        }
    }
    return out;
}

FockState
superpose(std::initializer_list<std::pair<Amplitude, FockState>> parts) {
    return superpose(std::span(parts.begin(), parts.size()));
}

Amplitude inner_product(const FockState &lhs, const FockState &rhs) {
    if (!lhs.compatible_with(rhs)) {
        throw RegistryMismatchError("inner_product: states use different registries");
    }
    const auto &small = lhs.size() <= rhs.size() ? lhs : rhs;
    const auto &large = lhs.size() <= rhs.size() ? rhs : lhs;
    Amplitude sum{};
    for (const auto &[occ, amp] : small.terms()) {
        auto it = large.terms().find(occ);
        if (it == large.terms().end()) {
            continue;
        }
        sum += (&small == &lhs) ? std::conj(amp) * it->second
                                : std::conj(it->second) * amp;
    }
    return sum;
}

Projection project(const FockState &state, const DetectionPattern &pattern) {
    const ModeRegistry &registry = state.registry();
    std::vector<std::pair<std::size_t, std::uint32_t>> demands;
    demands.reserve(pattern.demands.size());
    for (const auto &[mode, count] : pattern.demands) {
        demands.emplace_back(registry.index(mode), count);
    }

    std::vector<std::size_t> kept_modes;
    std::vector<ModeId> kept_names;
    for (std::size_t k = 0; k < registry.size(); ++k) {
        if (!pattern.demands.contains(registry.names()[k])) {
            kept_modes.push_back(k);
            kept_names.push_back(registry.names()[k]);
        }
    }

    const double total = state.norm_squared();
    Projection result;
    if (total == 0.0) {
        return result;
    }

    FockState remainder(make_registry(std::move(kept_names)),
                        state.truncation());
    for (const auto &[occ, amp] : state.terms()) {
        const bool matches =
            std::all_of(demands.begin(), demands.end(), [&occ](const auto &d) {
                return occ[d.first] == d.second;
            });
        if (!matches) {
            continue;
        }
        Occupation reduced;
        reduced.reserve(kept_modes.size());
        for (std::size_t k : kept_modes) {
            reduced.push_back(occ[k]);
        }
        remainder.add(reduced, amp);
    }

    const double kept = remainder.norm_squared();
    result.probability = kept / total;
    if (kept > 0.0) {
        result.remainder = remainder.scaled(1.0 / std::sqrt(kept));
    }
    return result;
}

} // namespace cohswap
