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

#include "cfma/core.hpp"

namespace cfma {

inline constexpr double kWaterfillPowerTol = 1e-12;
inline constexpr double kIterWaterfillTolBits = 1e-10;
inline constexpr int kIterWaterfillMaxIter = 10000;

/// Power allocation over parallel subchannels with gains g_i:
/// p_i = max(0, mu - 1/g_i) with sum p_i = P, mu found by bisection.
/// `zero_channel` is set (and p = 0) when every gain is numerically zero.
struct Allocation {
    Vector p;
    double mu = 0.0;
    bool zero_channel = false;
};

Allocation waterfill_power_allocation(const Vector& gains, double power);

/// Single-user water-filling against an effective noise covariance:
/// maximizes log det(N + H K H^T) subject to tr K <= P, K >= 0.
struct WaterfillStep {
    Matrix K;
    double mu = 0.0;
    bool zero_channel = false;
};

WaterfillStep single_user_waterfill(const Matrix& h, const Matrix& n_eff, double power);

/// Same objective restricted to diagonal K; requires square diagonal h and
/// diagonal n_eff.
WaterfillStep single_user_waterfill_diag(const Matrix& h, const Matrix& n_eff, double power);

/// Sum-capacity-achieving input covariances via iterative water-filling,
/// user 1 updated first in every round.
struct SumCapacityResult {
    Matrix K1;
    Matrix K2;
    double c_sum = 0.0;  // 0.5 * log2(c_det), bits
    double c_det = 1.0;  // det(I + H1 K1 H1^T + H2 K2 H2^T)
    int iterations = 0;
    bool converged = false;
    bool diagonal = false;
};

SumCapacityResult iterative_waterfill(const ChannelPair& ch, double power, bool diagonal = false,
                                      double tol_bits = kIterWaterfillTolBits,
                                      int max_iter = kIterWaterfillMaxIter);

}  // namespace cfma
