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

/// Covariance of the received signal, I_r + H1 K1 H1^T + H2 K2 H2^T.
Matrix received_covariance(const ChannelPair& ch, const CovariancePair& cov);

/// Gram matrix M of the scaled channel mismatch,
///   M = (a1~^2 + a2~^2) I_t + D^T D,  D = a1~ H2 B2 - a2~ H1 B1,
/// whose determinant drives both decoding rates.
Matrix effective_gram(const ChannelPair& ch, const CovariancePair& cov, const CodingChoice& cc);

/// Rate at which user `l` (0 or 1) can participate in decoding the first
/// integer combination: 0.5 * log2(beta_l^(2t) |S| / |M|).
double rate_first(const ChannelPair& ch, const CovariancePair& cov, const CodingChoice& cc, int l);

/// Rate for the second combination, decoded after the first is known:
/// 0.5 * log2(beta_l^(2t) |M| / (a1~ b2~ - a2~ b1~)^(2t)).
double rate_second(const ChannelPair& ch, const CovariancePair& cov, const CodingChoice& cc,
                   int l);

/// Full rate pair with the case split on zero coefficients: a user absent
/// from the second combination is limited by the first-step rate, a user
/// absent from the first by the second-step rate, and a user present in
/// both by the minimum. `valid` means every selected rate is non-negative.
RatePairResult achievable_pair(const ChannelPair& ch, const CovariancePair& cov,
                               const CodingChoice& cc);

/// Optimal equalizers for both decoding steps together with the effective
/// noise covariances they induce and the determinants the rate formulas
/// rely on. Exposed so tests can confirm the closed forms are the minima.
struct EqualizerReport {
    Matrix S;       // received covariance
    Matrix M;       // effective Gram matrix
    Matrix W;       // first-step MMSE equalizer (t x r)
    Matrix Sigma1;  // first-step effective noise covariance at W
    Matrix F;       // second-step channel equalizer (t x r)
    Matrix L;       // second-step combiner applied to the known combination
    Matrix Sigma2;  // second-step effective noise covariance at (F, L)
};

EqualizerReport equalizer_report(const ChannelPair& ch, const CovariancePair& cov,
                                 const CodingChoice& cc);

/// First-step effective noise covariance for an arbitrary equalizer W.
Matrix first_step_noise(const ChannelPair& ch, const CovariancePair& cov, const CodingChoice& cc,
                        const Matrix& W);

/// Second-step effective noise covariance for arbitrary (F, L).
Matrix second_step_noise(const ChannelPair& ch, const CovariancePair& cov, const CodingChoice& cc,
                         const Matrix& F, const Matrix& L);

}  // namespace cfma
