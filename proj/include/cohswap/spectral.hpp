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
 * Temporal model of pulsed down-conversion pairs seen through Gaussian
 * filters, and the conditioned four-fold fringe visibility.
 *
 * Spectral profiles are amplitude Gaussians h(w) = exp(-(w - W)^2 / (2 s^2)).
 * Time-domain functions use H(t) = (2 pi)^(-1/2) Int dw exp(i w t) h(w), so
 * H(t) = s exp(i W t) exp(-s^2 t^2 / 2), shifted by the profile's delay.
 *
 * Phase matching is taken in its infinitely-long-crystal limit (exact energy
 * conservation), so a pair emitted by pump G and seen through filters F_x,
 * F_y has the two-time detection amplitude
 *
 *     A_xy(t_x, t_y) = (2 pi)^(-1/2) Int dt G(t) F_x(t_x - t) F_y(t_y - t).
 *
 * An unfiltered beam has F = sqrt(2 pi) delta(t), giving
 * A_xy = G(t_y) F_x(t_x - t_y).
 *
 * Units are dimensionless with the pump width as the natural scale; every
 * visibility depends only on the ratio sigma_f / sigma_p.
 */

#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string_view>

namespace cohswap {

enum class ProfileKind { Pump, Filter };

struct SpectralProfile {
    /// Center angular frequency W.
    double center = 0.0;
    /// Amplitude width sigma, strictly positive.
    double width = 1.0;
    ProfileKind kind = ProfileKind::Filter;
    /// Time offset of H(t); zero unless modelling a delayed pulse.
    double delay = 0.0;

    static SpectralProfile pump(double width, double center = 0.0) {
        return {center, width, ProfileKind::Pump, 0.0};
    }
    static SpectralProfile filter(double width, double center = 0.0) {
        return {center, width, ProfileKind::Filter, 0.0};
    }
};

/// Throws std::invalid_argument unless width > 0 and all fields are finite.
void check_profile(const SpectralProfile &profile);

/// H(t) for a Gaussian profile.
[[nodiscard]] std::complex<double> time_profile(const SpectralProfile &profile,
                                                double t);

/// Closed-form two-time detection amplitude. A filter given as std::nullopt
/// means the beam is unfiltered; at most one side may be unfiltered.
class JointAmplitude {
  public:
    JointAmplitude(SpectralProfile pump, std::optional<SpectralProfile> filter_x,
                   std::optional<SpectralProfile> filter_y);

    [[nodiscard]] std::complex<double> operator()(double t_x, double t_y) const;

    /// |A(t_x, t_y)| = |A(0,0)| exp(-[t_x t_y] K [t_x t_y]^T) with
    /// K = [[k_xx, k_xy], [k_xy, k_yy]]. Independent of centers and delays
    /// only up to the delay shift; returned for zero delays.
    struct Envelope {
        double k_xx;
        double k_xy;
        double k_yy;
    };
    [[nodiscard]] Envelope envelope() const noexcept { return envelope_; }

    /// RMS width of |A|^2 along t_x - t_y at fixed t_x + t_y: the pair's
    /// detection-time correlation.
    [[nodiscard]] double correlation_time() const;

    [[nodiscard]] const SpectralProfile &pump() const noexcept { return pump_; }

  private:
    SpectralProfile pump_;
    std::optional<SpectralProfile> filter_x_;
    std::optional<SpectralProfile> filter_y_;
    Envelope envelope_{};
};

[[nodiscard]] JointAmplitude joint_amplitude(const SpectralProfile &pump,
                                             const SpectralProfile &filter_x,
                                             const SpectralProfile &filter_y);

enum class VisibilityMethod { ClosedForm, Quadrature };

[[nodiscard]] std::string_view to_string(VisibilityMethod method);

struct VisibilityResult {
    double visibility = 0.0;
    VisibilityMethod method = VisibilityMethod::ClosedForm;
    double estimated_error = 0.0;
};

/// Which beams carry the identical filters in the four-fold integral.
enum class FilterPlacement {
    /// Filters on the trigger beams only; the other photon of each pair
    /// reaches its detector unfiltered. Matches the Gaussian closed form.
    TriggerBeams,
    /// The same filter on every beam.
    AllBeams,
};

struct QuadratureOptions {
    /// Points per axis of the primary tensor grid.
    int points = 41;
    /// Points per axis of the refinement grid used for the error estimate.
    int refine_points = 61;
    /// Half-width of each axis in units of the integrand's marginal RMS.
    double sigmas = 6.0;
    /// Maximum tolerated |V(points) - V(refine_points)|.
    double tolerance = 1e-3;
    FilterPlacement placement = FilterPlacement::TriggerBeams;
};

class NonConvergenceError : public std::runtime_error {
  public:
    NonConvergenceError(const std::string &what, VisibilityResult partial)
        : std::runtime_error(what), partial_(partial) {}
    [[nodiscard]] const VisibilityResult &partial() const noexcept { return partial_; }

  private:
    VisibilityResult partial_;
};

/// Four-fold visibility
///
///   V = Int d^4t |A_ad(t_a,t_d) A_bc(t_b,t_c) A_bd(t_b,t_d) A_ac(t_a,t_c)|
///       / Int d^4t |A_ad(t_a,t_d) A_bc(t_b,t_c)|^2
///
/// by trapezoid sums on a direct tensor grid over (t_a, t_b, t_c, t_d),
/// where a, b are the trigger beams and c, d the signal beams. Each axis
/// spans +-sigmas times the larger marginal RMS of the two integrands.
/// Returns the primary-grid value with |V(points) - V(refine_points)| as the
/// error estimate; throws NonConvergenceError when it exceeds the tolerance.
[[nodiscard]] VisibilityResult
visibility_quadrature(const SpectralProfile &pump, const SpectralProfile &filter,
                      const QuadratureOptions &options = {});

/// Tensor-grid value at a single grid size, without refinement.
[[nodiscard]] double visibility_on_grid(const SpectralProfile &pump,
                                        const SpectralProfile &filter, int points,
                                        const QuadratureOptions &options = {});

/// sqrt(sigma_p^2 / (sigma_p^2 + sigma_f^2)); sigma_f = 0 is the perfect
/// filtering limit and gives 1.
[[nodiscard]] VisibilityResult visibility_closed_form(double sigma_p, double sigma_f);
[[nodiscard]] VisibilityResult visibility_closed_form(const SpectralProfile &pump,
                                                      const SpectralProfile &filter);

/// Pump and filter with the carrier structure G(t) = exp(-i w0 t)|G(t)| and
/// F(t) = exp(-i w0 t / 2)|F(t)| for pump central frequency w0.
[[nodiscard]] SpectralProfile carrier_pump(double sigma_p, double omega0);
[[nodiscard]] SpectralProfile carrier_filter(double sigma_f, double omega0);

} // namespace cohswap
