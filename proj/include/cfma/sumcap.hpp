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

#include <utility>
#include <vector>

#include "cfma/core.hpp"
#include "cfma/polynomial.hpp"
#include "cfma/waterfill.hpp"

namespace cfma {

// Near-tangency threshold, relative to the largest coefficient of g.
inline constexpr double kTangencyRel = 1e-9;
// Witness sum rate must reproduce the sum capacity this closely.
inline constexpr double kWitnessSumTol = 1e-7;
// Polynomial recovery from determinant samples must hit the samples this
// closely (relative), otherwise the system was too ill-conditioned.
inline constexpr double kPolyFitResidualRel = 1e-6;

/// Determinant of the scaled mismatch Gram matrix as a polynomial in the
/// ratio gamma of the two lattice scalings:
///   f(gamma) = det((gamma^2+1) I_t + E(gamma)^T E(gamma)),
///   E(gamma) = gamma H2 B2 - H1 B1,
/// recovered exactly from samples at gamma = 0, 1, ..., 2t. Degree is 2t
/// and the leading coefficient is det(I_t + B2^T H2^T H2 B2) >= 1.
RealPolynomial f_gamma_poly(const ChannelPair& ch, const CovariancePair& cov);

/// g(gamma) = f(gamma) - sqrt(c_det) * gamma^t. Sum capacity is achievable
/// exactly when g dips to zero or below for some gamma > 0.
RealPolynomial g_gamma_poly(const RealPolynomial& f, double c_det, int t);

/// Outcome of the sum-capacity decision for one channel pair and power.
struct SumCapVerdict {
    bool achievable = false;
    /// The minimum of g sits within kTangencyRel of zero: the verdict is a
    /// knife-edge tangency rather than a clear dip.
    bool boundary = false;
    /// The Sturm chain terminated marginally; the verdict was taken from a
    /// dense sampling fallback and deserves less trust.
    bool fragile = false;
    int positive_root_count = 0;

    /// Scaling ratio certifying achievability (meaningful when achievable).
    double gamma_witness = 0.0;
    /// Every closed interval of gamma > 0 where g <= 0, in ascending order;
    /// a tangency appears as a degenerate [r, r] interval. Nonempty exactly
    /// when achievable.
    std::vector<std::pair<double, double>> gamma_intervals;

    /// Sum of the two decoding rates at the witness and how far it is from
    /// the sum capacity. Populated only when achievable.
    double witness_sum_rate = 0.0;
    double cross_check_residual = 0.0;

    SumCapacityResult waterfill;
    RealPolynomial f;
    RealPolynomial g;
};

/// Full pipeline: water-fill to the sum-capacity covariances, build f and
/// g, count positive roots of g by Sturm sequences, pick a witness scaling
/// and confirm the rate pair there adds up to the sum capacity.
SumCapVerdict check_sum_capacity(const ChannelPair& ch, double power, bool diagonal = false);

/// Same decision for caller-supplied input covariances: does the two-step
/// decoding attain the sum rate of the channel at exactly these inputs?
/// The target is log det of the received covariance, not the water-filling
/// optimum, so the verdict concerns the given covariances alone. The
/// returned waterfill field carries the inputs back with iterations = 0.
SumCapVerdict check_sum_rate_at(const ChannelPair& ch, const CovariancePair& cov);

}  // namespace cfma
