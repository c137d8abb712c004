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

// Reference computations that share no code with the library: commuting
// polynomials in creation operators, and Gaussian integrals in closed form.

#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using Monomial = std::map<std::string, int>;

/// Polynomial in commuting creation operators acting on the vacuum.
struct Poly {
    std::map<Monomial, Complex> terms;

    static Poly constant(Complex c) {
        Poly p;
        p.terms[{}] = c;
        return p;
    }
    static Poly linear(std::initializer_list<std::pair<std::string, Complex>> parts) {
        Poly p;
        for (const auto &[mode, c] : parts) {
            p.terms[{{mode, 1}}] += c;
        }
        return p;
    }
};

inline Poly operator*(const Poly &lhs, const Poly &rhs) {
    Poly out;
    for (const auto &[m1, c1] : lhs.terms) {
        for (const auto &[m2, c2] : rhs.terms) {
            Monomial m = m1;
            for (const auto &[mode, k] : m2) {
                m[mode] += k;
            }
            out.terms[m] += c1 * c2;
        }
    }
    return out;
}

inline Poly operator+(const Poly &lhs, const Poly &rhs) {
    Poly out = lhs;
    for (const auto &[m, c] : rhs.terms) {
        out.terms[m] += c;
    }
    return out;
}

inline Poly operator*(Complex s, const Poly &p) {
    Poly out;
    for (const auto &[m, c] : p.terms) {
        out.terms[m] = s * c;
    }
    return out;
}

/// Ket coefficients: (a+)^n |0> = sqrt(n!) |n>. Drops exact cancellations.
inline std::map<Monomial, Complex> kets(const Poly &p) {
    std::map<Monomial, Complex> out;
    for (const auto &[m, c] : p.terms) {
        double factor = 1.0;
        for (const auto &[mode, n] : m) {
            factor *= std::sqrt(std::tgamma(n + 1.0));
        }
        if (std::abs(c) > 1e-15) {
            out[m] = c * factor;
        }
    }
    return out;
}

/// a+ c+ pushed through BS1 (a,b), BS2 (c,d) and BS3 (b,c -> b_out,c_out),
/// all 50:50 with the transfer matrix [[1, 1], [1, -1]] / sqrt(2).
inline Poly fig1_after_bs3_by_substitution() {
    const double r = 1.0 / std::sqrt(2.0);
    const Poly b_from_bs3 = Poly::linear({{"b_out", r}, {"c_out", r}});
    const Poly c_from_bs3 = Poly::linear({{"b_out", r}, {"c_out", -r}});
    const Poly a_path = Poly::linear({{"a", r}}) + r * b_from_bs3;
    const Poly c_path = r * c_from_bs3 + Poly::linear({{"d", r}});
    return a_path * c_path;
}

/// The same state written out by hand:
/// 1/2 [a d + B (d + a)/sqrt2 + C (d - a)/sqrt2 + (B^2 - C^2)/2].
inline Poly fig1_after_bs3_by_hand() {
    const double r = 1.0 / std::sqrt(2.0);
    Poly p;
    p.terms[{{"a", 1}, {"d", 1}}] = 0.5;
    p.terms[{{"b_out", 1}, {"d", 1}}] = 0.5 * r;
    p.terms[{{"a", 1}, {"b_out", 1}}] = 0.5 * r;
    p.terms[{{"c_out", 1}, {"d", 1}}] = 0.5 * r;
    p.terms[{{"a", 1}, {"c_out", 1}}] = -0.5 * r;
    p.terms[{{"b_out", 2}}] = 0.25;
    p.terms[{{"c_out", 2}}] = -0.25;
    return p;
}

/// Int exp(-t^T P t) d^4t = pi^2 / sqrt(det P) for symmetric positive P.
/// Both four-fold integrands have |A(0,0)|^4 in front, so their ratio is
/// sqrt(det P_den / det P_num).
struct PairKernel {
    double k_xx;
    double k_xy;
    double k_yy;
};

inline void add_pair(Eigen::Matrix4d &m, int x, int y, const PairKernel &k, double w) {
    m(x, x) += w * k.k_xx;
    m(y, y) += w * k.k_yy;
    m(x, y) += w * k.k_xy;
    m(y, x) += w * k.k_xy;
}

/// Kernel of |A(t_x, t_y)| for Gaussian pump sp, filter sx on x and sy on y
/// (sy = 0 meaning unfiltered), derived from the product of the Gaussians.
inline PairKernel kernel(double sp, double sx, double sy) {
    const double p2 = sp * sp;
    const double x2 = sx * sx;
    if (sy == 0.0) {
        // |G(t_y)| |F(t_x - t_y)|
        return {x2 / 2.0, -x2 / 2.0, (p2 + x2) / 2.0};
    }
    const double y2 = sy * sy;
    const double s = p2 + x2 + y2;
    return {x2 / 2.0 - x2 * x2 / (2.0 * s), -x2 * y2 / (2.0 * s),
            y2 / 2.0 - y2 * y2 / (2.0 * s)};
}

/// Axes: 0 = a, 1 = b (trigger), 2 = c, 3 = d (signal).
inline double visibility_by_determinant(const PairKernel &k) {
    Eigen::Matrix4d num = Eigen::Matrix4d::Zero();
    add_pair(num, 0, 3, k, 1.0);
    add_pair(num, 1, 2, k, 1.0);
    add_pair(num, 1, 3, k, 1.0);
    add_pair(num, 0, 2, k, 1.0);
    Eigen::Matrix4d den = Eigen::Matrix4d::Zero();
    add_pair(den, 0, 3, k, 2.0);
    add_pair(den, 1, 2, k, 2.0);
    return std::sqrt(den.determinant() / num.determinant());
}

/// (2 pi)^(-1/2) Int dt G(t) F_x(t_x - t) F_y(t_y - t) by a plain trapezoid
/// sum over t, with H(t) = s exp(i W t - s^2 t^2 / 2).
inline Complex convolution(double sp, double wp, double sx, double wx, double sy, double wy,
                           double tx, double ty, double half_width = 14.0, int n = 4001) {
    auto h = [](double s, double w, double t) {
        return s * std::exp(Complex(-0.5 * s * s * t * t, w * t));
    };
    const double dt = 2.0 * half_width / (n - 1);
    Complex sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = -half_width + i * dt;
        const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        sum += w * h(sp, wp, t) * h(sx, wx, tx - t) * h(sy, wy, ty - t);
    }
    return sum * dt / std::sqrt(2.0 * M_PI);
}

} // namespace oracle
