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

#pragma once

#include <optional>
#include <utility>

#include "cfma/core.hpp"

namespace cfma {

inline constexpr double kTolCollinear = 1e-10;

/// Single-transmit-antenna user pair: channel vectors h1, h2 and a common
/// power budget. Full power on the single antenna is optimal, so the
/// sum-capacity covariances are simply K_l = P.
struct SimoInstance {
    Vector h1;
    Vector h2;
    double P = 0.0;

    double n1 = 0.0;  // |h1|^2
    double n2 = 0.0;  // |h2|^2
    double s = 0.0;   // h1.h2
    bool collinear = false;

    SimoInstance(Vector h1_in, Vector h2_in, double power);
};

/// Eigenvalues (descending) of the 2x2 Gram matrix of (h1, h2).
std::pair<double, double> simo_lambdas(const SimoInstance& si);

/// det(I + P h1 h1^T + P h2 h2^T) = (1 + P l1)(1 + P l2).
double simo_c_det(const SimoInstance& si);

/// Discriminant of the scaling-ratio quadratic g; sum capacity is
/// achievable exactly when this is non-negative:
///   delta = (sqrt(c_det) + 2 P h1.h2)^2 - 4 (1 + P|h1|^2)(1 + P|h2|^2).
double simo_delta(const SimoInstance& si);

/// Closed interval of scaling ratios achieving sum capacity,
///   (sqrt(c_det) + 2 P s -+ sqrt(delta)) / (2 (1 + P|h2|^2)),
/// or nothing when delta < 0. Both endpoints are positive when present.
std::optional<std::pair<double, double>> simo_gamma_range(const SimoInstance& si);

/// Collinear channels: achievable iff P h1.h2 / sqrt(1 + P(|h1|^2+|h2|^2))
/// is at least 3/4. Throws NotCollinearError on non-collinear input.
bool simo_collinear_achievable(const SimoInstance& si);

/// Non-collinear channels: power-independent alignment test
///   (sqrt(l1 l2) + 2 h1.h2)^2 > 4 |h1|^2 |h2|^2,
/// which guarantees achievability for all large enough P. Throws
/// CollinearError on collinear input.
bool simo_noncollinear_condition(const SimoInstance& si);

/// Smallest power beyond which delta stays positive: the largest positive
/// root of delta(P) = 0, isolated through the polynomialization
///   Q(P) = R(P)^2 - 16 P^2 s^2 c_det(P),  R = c_det + 4 P^2 s^2
///          - 4 (1 + P|h1|^2)(1 + P|h2|^2),
/// filtered against delta itself and polished by bisection. Throws
/// CollinearError on collinear input, NoRootError when delta never
/// turns positive.
double simo_p_star(const SimoInstance& si);

/// Two-user channel where both channel matrices and both input covariances
/// are 2x2 diagonal. c(l, j) = h_lj sqrt(k_lj / P) are the normalized
/// effective gains of user l on antenna j.
struct DiagInstance {
    Matrix H1, H2;
    Matrix K1, K2;
    double P = 0.0;

    DiagInstance(Matrix h1, Matrix h2, Matrix k1, Matrix k2, double power);

    /// Builds the instance from each user's own optimal diagonal power
    /// split at the given power (single-user water-filling against unit
    /// noise, independently per user).
    static DiagInstance from_waterfill(const ChannelPair& ch, double power);

    double c(int l, int j) const;
};

/// The two antenna-anchored achievability tests. Anchoring at antenna j
/// needs both users to put power there, otherwise that test is not
/// evaluable (its gamma ratio would divide by zero).
struct DiagConditionReport {
    bool cond1 = false;
    bool cond2 = false;
    bool cond1_evaluable = false;
    bool cond2_evaluable = false;
    double gamma1 = 0.0;  // c11 / c21, the antenna-1 anchored scaling ratio
    double gamma2 = 0.0;  // c12 / c22

    bool either() const { return (cond1_evaluable && cond1) || (cond2_evaluable && cond2); }
};

DiagConditionReport diag_conditions(const DiagInstance& di);

/// With the power fractions k_lj / P held fixed and gamma pinned to one of
/// the anchored ratios (c11/c21 or c12/c22), the achievability inequality
/// becomes a quadratic in the power P that is positive at P = 0. When its
/// leading coefficient is negative the inequality holds exactly for powers
/// beyond a unique threshold P0; returns P0, verified by sign evaluation
/// at 0.99 P0 and 1.01 P0. Returns nothing when the leading coefficient is
/// non-negative (the anchored test fails at every power). Throws
/// InvalidInputError when gamma does not anchor either antenna.
std::optional<double> diag_power_threshold(const DiagInstance& di, double gamma);

}  // namespace cfma
