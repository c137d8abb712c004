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

#include "cohswap/spectral.hpp"

#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace cohswap {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

// Amplitude of two Gaussian filters with zero delays.
std::complex<double> gaussian_pair(const SpectralProfile &p, const SpectralProfile &x,
                                   const SpectralProfile &y, double tx, double ty) {
    const double sp2 = p.width * p.width;
    const double sx2 = x.width * x.width;
    const double sy2 = y.width * y.width;
    const double s = sp2 + sx2 + sy2;
    const double detuning = p.center - x.center - y.center;
    const std::complex<double> b = sx2 * tx + sy2 * ty + kI * detuning;
    const std::complex<double> exponent = b * b / (2.0 * s) +
                                          kI * (x.center * tx + y.center * ty) -
                                          0.5 * sx2 * tx * tx - 0.5 * sy2 * ty * ty;
    return p.width * x.width * y.width / std::sqrt(s) * std::exp(exponent);
}

// Adds w * K(i, j) to the precision matrix of a 4-variable Gaussian.
void add_pair(Eigen::Matrix4d &precision, int i, int j,
              const JointAmplitude::Envelope &k, double w) {
    precision(i, i) += w * k.k_xx;
    precision(j, j) += w * k.k_yy;
    precision(i, j) += w * k.k_xy;
    precision(j, i) += w * k.k_xy;
}

// Marginal RMS of exp(-t^T P t) along each axis.
Eigen::Vector4d marginal_rms(const Eigen::Matrix4d &precision) {
    const Eigen::Matrix4d covariance = (2.0 * precision).inverse();
    return covariance.diagonal().cwiseSqrt();
}

JointAmplitude make_amplitude(const SpectralProfile &pump, const SpectralProfile &filter,
                              FilterPlacement placement) {
    if (placement == FilterPlacement::AllBeams) {
        return JointAmplitude(pump, filter, filter);
    }
    return JointAmplitude(pump, filter, std::nullopt);
}

// Variable order: 0 = t_a, 1 = t_b (trigger beams), 2 = t_c, 3 = t_d (signal
// beams). Returns half-widths for the trigger and the signal axes.
std::pair<double, double> axis_half_widths(const JointAmplitude &amp, double sigmas) {
    const auto k = amp.envelope();
    Eigen::Matrix4d numerator = Eigen::Matrix4d::Zero();
    add_pair(numerator, 0, 3, k, 1.0);
    add_pair(numerator, 1, 2, k, 1.0);
    add_pair(numerator, 1, 3, k, 1.0);
    add_pair(numerator, 0, 2, k, 1.0);
    Eigen::Matrix4d denominator = Eigen::Matrix4d::Zero();
    add_pair(denominator, 0, 3, k, 2.0);
    add_pair(denominator, 1, 2, k, 2.0);

    const Eigen::Vector4d rn = marginal_rms(numerator);
    const Eigen::Vector4d rd = marginal_rms(denominator);
    const double trigger = std::max({rn(0), rn(1), rd(0), rd(1)});
    const double signal = std::max({rn(2), rn(3), rd(2), rd(3)});
    return {sigmas * trigger, sigmas * signal};
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    }
    return out;
}

double trapezoid_weight(int i, int n) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; }

} // namespace

void check_profile(const SpectralProfile &profile) {
    if (!(profile.width > 0.0) || !std::isfinite(profile.width)) {
        throw std::invalid_argument("spectral width must be positive and finite");
    }
    if (!std::isfinite(profile.center) || !std::isfinite(profile.delay)) {
        throw std::invalid_argument("spectral center and delay must be finite");
    }
}

std::complex<double> time_profile(const SpectralProfile &profile, double t) {
    const double s = t - profile.delay;
    return profile.width * std::exp(kI * profile.center * s -
                                    0.5 * profile.width * profile.width * s * s);
}

JointAmplitude::JointAmplitude(SpectralProfile pump, std::optional<SpectralProfile> filter_x,
                               std::optional<SpectralProfile> filter_y)
    : pump_(pump), filter_x_(filter_x), filter_y_(filter_y) {
    check_profile(pump_);
    if (filter_x_) {
        check_profile(*filter_x_);
    }
    if (filter_y_) {
        check_profile(*filter_y_);
    }
    const double sp2 = pump_.width * pump_.width;
    if (filter_x_ && filter_y_) {
        const double sx2 = filter_x_->width * filter_x_->width;
        const double sy2 = filter_y_->width * filter_y_->width;
        const double s = sp2 + sx2 + sy2;
        envelope_ = {0.5 * sx2 - 0.5 * sx2 * sx2 / s, -0.5 * sx2 * sy2 / s,
                     0.5 * sy2 - 0.5 * sy2 * sy2 / s};
    } else if (filter_x_) {
        const double sx2 = filter_x_->width * filter_x_->width;
        envelope_ = {0.5 * sx2, -0.5 * sx2, 0.5 * (sp2 + sx2)};
    } else if (filter_y_) {
        const double sy2 = filter_y_->width * filter_y_->width;
        envelope_ = {0.5 * (sp2 + sy2), -0.5 * sy2, 0.5 * sy2};
    } else {
        throw std::invalid_argument(
            "joint amplitude needs at least one filtered beam; with both unfiltered it "
            "is not a function");
    }
}

std::complex<double> JointAmplitude::operator()(double t_x, double t_y) const {
    if (filter_x_ && filter_y_) {
        SpectralProfile p = pump_;
        SpectralProfile x = *filter_x_;
        SpectralProfile y = *filter_y_;
        // A(t_x, t_y) = A_0(t_x - d_p - d_x, t_y - d_p - d_y)
        return gaussian_pair(p, x, y, t_x - p.delay - x.delay, t_y - p.delay - y.delay);
    }
    if (filter_x_) {
        return time_profile(pump_, t_y) * time_profile(*filter_x_, t_x - t_y);
    }
    return time_profile(pump_, t_x) * time_profile(*filter_y_, t_y - t_x);
}

double JointAmplitude::correlation_time() const {
    const double curvature = envelope_.k_xx + envelope_.k_yy - 2.0 * envelope_.k_xy;
    return 1.0 / std::sqrt(curvature);
}

JointAmplitude joint_amplitude(const SpectralProfile &pump, const SpectralProfile &filter_x,
                               const SpectralProfile &filter_y) {
    return JointAmplitude(pump, filter_x, filter_y);
}

std::string_view to_string(VisibilityMethod method) {
    return method == VisibilityMethod::ClosedForm ? "closed-form" : "quadrature";
}

double visibility_on_grid(const SpectralProfile &pump, const SpectralProfile &filter,
                          int points, const QuadratureOptions &options) {
    if (points < 3) {
        throw std::invalid_argument("quadrature grid needs at least 3 points per axis");
    }
    const JointAmplitude amp = make_amplitude(pump, filter, options.placement);
    const auto [trigger_half, signal_half] = axis_half_widths(amp, options.sigmas);
    const auto trigger = linspace(-trigger_half, trigger_half, points);
    const auto signal = linspace(-signal_half, signal_half, points);
    const auto n = static_cast<std::size_t>(points);

    // table[x * n + y] = |A(trigger_x, signal_y)| * sqrt(w_x w_y); each time
    // variable appears in exactly two factors of either integrand, so the
    // square-root weights reproduce the full trapezoid weight.
    std::vector<double> table(n * n);
    for (int x = 0; x < points; ++x) {
        for (int y = 0; y < points; ++y) {
            const double w = std::sqrt(trapezoid_weight(x, points) * trapezoid_weight(y, points));
            table[static_cast<std::size_t>(x) * n + static_cast<std::size_t>(y)] =
                std::abs(amp(trigger[static_cast<std::size_t>(x)],
                             signal[static_cast<std::size_t>(y)])) *
                w;
        }
    }
    auto at = [&](std::size_t x, std::size_t y) { return table[x * n + y]; };

    // Direct sum over the full (t_a, t_b, t_c, t_d) tensor grid.
    double numerator = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            double inner = 0.0;
            for (std::size_t c = 0; c < n; ++c) {
                const double bc_ac = at(b, c) * at(a, c);
                for (std::size_t d = 0; d < n; ++d) {
                    inner += at(a, d) * at(b, d) * bc_ac;
                }
            }
            numerator += inner;
        }
    }
    double pair = 0.0;
    for (double v : table) {
        pair += v * v;
    }
    return numerator / (pair * pair);
}

VisibilityResult visibility_quadrature(const SpectralProfile &pump,
                                       const SpectralProfile &filter,
                                       const QuadratureOptions &options) {
    const double coarse = visibility_on_grid(pump, filter, options.points, options);
    const double fine = visibility_on_grid(pump, filter, options.refine_points, options);
    VisibilityResult result{coarse, VisibilityMethod::Quadrature, std::abs(fine - coarse)};
    if (!(result.estimated_error <= options.tolerance)) {
        throw NonConvergenceError("visibility quadrature did not converge: |V(" +
                                      std::to_string(options.points) + ") - V(" +
                                      std::to_string(options.refine_points) + ")| = " +
                                      std::to_string(result.estimated_error) +
                                      " exceeds tolerance " +
                                      std::to_string(options.tolerance),
                                  result);
    }
    return result;
}

VisibilityResult visibility_closed_form(double sigma_p, double sigma_f) {
    if (!(sigma_p > 0.0) || !(sigma_f >= 0.0) || !std::isfinite(sigma_p) ||
        !std::isfinite(sigma_f)) {
        throw std::invalid_argument("closed-form visibility needs sigma_p > 0, sigma_f >= 0");
    }
    const double sp2 = sigma_p * sigma_p;
    return {std::sqrt(sp2 / (sp2 + sigma_f * sigma_f)), VisibilityMethod::ClosedForm, 0.0};
}

VisibilityResult visibility_closed_form(const SpectralProfile &pump,
                                        const SpectralProfile &filter) {
    check_profile(pump);
    check_profile(filter);
    return visibility_closed_form(pump.width, filter.width);
}

SpectralProfile carrier_pump(double sigma_p, double omega0) {
    return SpectralProfile::pump(sigma_p, -omega0);
}

SpectralProfile carrier_filter(double sigma_f, double omega0) {
    return SpectralProfile::filter(sigma_f, -0.5 * omega0);
}

} // namespace cohswap
