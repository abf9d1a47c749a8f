// SPDX-License-Identifier: Apache-2.0
//
// cfma - CFMA achievable rates and sum-capacity checks for the two-user
// Gaussian MIMO multiple access channel
// Copyright (C) 2026 the cfma authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Test-only helpers: deterministic random inputs and independent oracle
// implementations the library code must agree with. Everything here is
// written from the defining formulas, on purpose not calling into the
// library paths under test.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>

#include "cfma/core.hpp"
#include "cfma/montecarlo.hpp"
#include "cfma/polynomial.hpp"

namespace cfma::testing {

/// Sequential view over the counter-based uniform stream of one trial.
struct Stream {
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;
    std::uint64_t draw = 0;

    Stream(std::uint64_t seed_in, std::uint64_t trial_in) : seed(seed_in), trial(trial_in) {}

    double next() { return uniform01(seed, trial, draw++); }
    double range(double lo, double hi) { return lo + (hi - lo) * next(); }
    double log_range(double lo, double hi) {
        return lo * std::exp(std::log(hi / lo) * next());
    }
};

/// Random symmetric PSD matrix A A^T rescaled to the requested trace.
inline Matrix random_psd(Stream& s, int n, double trace_target) {
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = s.range(-1.0, 1.0);
    Matrix k = a * a.transpose();
    const double tr = k.trace();
    if (tr <= 0.0) return Matrix::Zero(n, n);
    return k * (trace_target / tr);
}

/// Scalar-channel oracle: a from-scratch implementation of the single
/// transmit / single receive antenna case. Both users send at full power,
/// the first combination is a = (1, 1) with scalings beta = (gamma, 1) and
/// the second is b = (1, 0).
struct ScalarOracle {
    double h1 = 0.0;
    double h2 = 0.0;
    double P = 0.0;

    ScalarOracle(double h1_in, double h2_in, double power) : h1(h1_in), h2(h2_in), P(power) {}

    double det_s() const { return 1.0 + (h1 * h1 + h2 * h2) * P; }
    double c_sum() const { return 0.5 * std::log2(det_s()); }

    // m(gamma) = (gamma^2 + 1) + P (gamma h2 - h1)^2
    double m(double gamma) const {
        const double d = gamma * h2 - h1;
        return gamma * gamma + 1.0 + P * d * d;
    }

    double r1_first(double gamma) const {
        return 0.5 * std::log2(gamma * gamma * det_s() / m(gamma));
    }
    double r2_first(double gamma) const { return 0.5 * std::log2(det_s() / m(gamma)); }
    // cross = a1~ b2~ - a2~ b1~ = -gamma, so cross^2 = gamma^2.
    double r1_second(double gamma) const { return 0.5 * std::log2(m(gamma)); }
    double r2_second(double gamma) const {
        return 0.5 * std::log2(m(gamma) / (gamma * gamma));
    }

    double rate1(double gamma) const { return std::min(r1_first(gamma), r1_second(gamma)); }
    double rate2(double gamma) const { return r2_first(gamma); }

    double delta() const {
        const double root = std::sqrt(det_s()) + 2.0 * P * h1 * h2;
        return root * root - 4.0 * (1.0 + P * h1 * h1) * (1.0 + P * h2 * h2);
    }
    bool achievable() const { return delta() >= 0.0; }

    /// Roots of (1 + P h2^2) g^2 - (2 P h1 h2 + sqrt(det_s)) g + (1 + P h1^2).
    std::optional<std::pair<double, double>> gamma_range() const {
        const double d = delta();
        if (d < 0.0) return std::nullopt;
        const double a = 1.0 + P * h2 * h2;
        const double b = 2.0 * P * h1 * h2 + std::sqrt(det_s());
        return std::make_pair((b - std::sqrt(d)) / (2.0 * a), (b + std::sqrt(d)) / (2.0 * a));
    }
};

/// Brute-force achievability: dense log-spaced scan of g over (0, bound],
/// declared achievable when the minimum dips below the same near-tangency
/// tolerance the verdict machinery uses.
struct DenseScanResult {
    bool achievable = false;
    double min_value = 0.0;
    double argmin = 0.0;
};

inline DenseScanResult dense_scan_achievable(const RealPolynomial& g, double tol,
                                             int points = 100000) {
    DenseScanResult out;
    const double lo = 1e-6;
    const double hi = std::max(1e4, cauchy_bound(g));
    const double span = std::log(hi / lo);
    out.min_value = g.eval(lo);
    out.argmin = lo;
    for (int i = 0; i < points; ++i) {
        const double x = lo * std::exp(span * i / (points - 1));
        const double v = g.eval(x);
        if (v < out.min_value) {
            out.min_value = v;
            out.argmin = x;
        }
    }
    out.achievable = out.min_value <= tol;
    return out;
}

/// Largest positive root of (25 s^2 - 9 n1 n2) P^2 - 9 (n1 + n2) P - 9,
/// the power threshold for two single-antenna users written directly from
/// the squared form of the discriminant condition. Requires 25 s^2 > 9 n1 n2.
inline double two_user_vector_power_threshold(double n1, double n2, double s) {
    const double qa = 25.0 * s * s - 9.0 * n1 * n2;
    const double qb = -9.0 * (n1 + n2);
    const double qc = -9.0;
    const double disc = std::sqrt(qb * qb - 4.0 * qa * qc);
    return (-qb + disc) / (2.0 * qa);
}

}  // namespace cfma::testing
