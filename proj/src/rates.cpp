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

#include "cfma/rates.hpp"

#include <cmath>

namespace cfma {

namespace {

void check_dims(const ChannelPair& ch, const CovariancePair& cov) {
    if (cov.K1.rows() != ch.t)
        throw InvalidInputError("covariance dimension does not match the channel");
}

// D = a1~ H2 B2 - a2~ H1 B1, the residual after aligning the two lattices.
Matrix mismatch(const ChannelPair& ch, const CovariancePair& cov, const CodingChoice& cc) {
    return cc.a_tilde(0) * ch.H2 * cov.B2 - cc.a_tilde(1) * ch.H1 * cov.B1;
}

}  // namespace

Matrix received_covariance(const ChannelPair& ch, const CovariancePair& cov) {
    check_dims(ch, cov);
    return Matrix::Identity(ch.r, ch.r) + ch.H1 * cov.K1 * ch.H1.transpose() +
           ch.H2 * cov.K2 * ch.H2.transpose();
}

Matrix effective_gram(const ChannelPair& ch, const CovariancePair& cov, const CodingChoice& cc) {
    check_dims(ch, cov);
    const double a_sq = cc.a_tilde(0) * cc.a_tilde(0) + cc.a_tilde(1) * cc.a_tilde(1);
    const Matrix d = mismatch(ch, cov, cc);
    return a_sq * Matrix::Identity(ch.t, ch.t) + d.transpose() * d;
}

double rate_first(const ChannelPair& ch, const CovariancePair& cov, const CodingChoice& cc,
                  int l) {
    if (l < 0 || l > 1) throw InvalidInputError("rate_first: user index must be 0 or 1");
    const double det_s = det(received_covariance(ch, cov));
    const double det_m = det(effective_gram(ch, cov, cc));
    if (!(det_m > 0.0))
        throw DegenerateError("rate_first: mismatch Gram determinant is not positive");
    return 0.5 * std::log2(std::pow(cc.beta[l], 2 * ch.t) * det_s / det_m);
}

double rate_second(const ChannelPair& ch, const CovariancePair& cov, const CodingChoice& cc,
                   int l) {
    if (l < 0 || l > 1) throw InvalidInputError("rate_second: user index must be 0 or 1");
    const double det_m = det(effective_gram(ch, cov, cc));
    const double cross = cc.a_tilde(0) * cc.b_tilde(1) - cc.a_tilde(1) * cc.b_tilde(0);
    if (cross == 0.0)
        throw DegenerateError("rate_second: combination coefficients are not independent");
    return 0.5 * std::log2(std::pow(cc.beta[l], 2 * ch.t) * det_m /
                           std::pow(cross * cross, ch.t));
}

RatePairResult achievable_pair(const ChannelPair& ch, const CovariancePair& cov,
                               const CodingChoice& cc) {
    RatePairResult res;
    res.r1_first = rate_first(ch, cov, cc, 0);
    res.r2_first = rate_first(ch, cov, cc, 1);
    res.r1_second = rate_second(ch, cov, cc, 0);
    res.r2_second = rate_second(ch, cov, cc, 1);

    const auto select = [&](int l, double first, double second) {
        if (cc.b[l] == 0) return first;
        if (cc.a[l] == 0) return second;
        return std::min(first, second);
    };
    res.R1 = select(0, res.r1_first, res.r1_second);
    res.R2 = select(1, res.r2_first, res.r2_second);
    res.valid = res.R1 >= 0.0 && res.R2 >= 0.0;
    return res;
}

EqualizerReport equalizer_report(const ChannelPair& ch, const CovariancePair& cov,
                                 const CodingChoice& cc) {
    check_dims(ch, cov);
    EqualizerReport rep;
    rep.S = received_covariance(ch, cov);
    rep.M = effective_gram(ch, cov, cc);

    const double a1 = cc.a_tilde(0), a2 = cc.a_tilde(1);
    const double b1 = cc.b_tilde(0), b2 = cc.b_tilde(1);
    const double a_sq = a1 * a1 + a2 * a2;

    const Matrix target = a1 * ch.H1 * cov.B1 + a2 * ch.H2 * cov.B2;  // r x t
    rep.W = target.transpose() * rep.S.llt().solve(Matrix::Identity(ch.r, ch.r));
    rep.Sigma1 = first_step_noise(ch, cov, cc, rep.W);

    const Matrix d = mismatch(ch, cov, cc);
    const Matrix mk =
        Matrix::Identity(ch.r, ch.r) + d * d.transpose() / a_sq;  // r x r
    const double cross = a1 * b2 - a2 * b1;
    rep.F = (cross / a_sq) * d.transpose() * mk.llt().solve(Matrix::Identity(ch.r, ch.r));
    const Matrix i_t = Matrix::Identity(ch.t, ch.t);
    rep.L = (a1 * (b1 * i_t - rep.F * ch.H1 * cov.B1) +
             a2 * (b2 * i_t - rep.F * ch.H2 * cov.B2)) /
            a_sq;
    rep.Sigma2 = second_step_noise(ch, cov, cc, rep.F, rep.L);
    return rep;
}

Matrix first_step_noise(const ChannelPair& ch, const CovariancePair& cov, const CodingChoice& cc,
                        const Matrix& W) {
    check_dims(ch, cov);
    const double a1 = cc.a_tilde(0), a2 = cc.a_tilde(1);
    const Matrix s = received_covariance(ch, cov);
    const Matrix target = a1 * ch.H1 * cov.B1 + a2 * ch.H2 * cov.B2;
    return (a1 * a1 + a2 * a2) * Matrix::Identity(ch.t, ch.t) + W * s * W.transpose() -
           target.transpose() * W.transpose() - W * target;
}

Matrix second_step_noise(const ChannelPair& ch, const CovariancePair& cov, const CodingChoice& cc,
                         const Matrix& F, const Matrix& L) {
    check_dims(ch, cov);
    const double a1 = cc.a_tilde(0), a2 = cc.a_tilde(1);
    const double b1 = cc.b_tilde(0), b2 = cc.b_tilde(1);
    const double a_sq = a1 * a1 + a2 * a2;
    const Matrix s = received_covariance(ch, cov);
    const Matrix i_t = Matrix::Identity(ch.t, ch.t);

    const Matrix g1 = ch.H1 * cov.B1;  // r x t
    const Matrix g2 = ch.H2 * cov.B2;
    const Matrix b_target = b1 * g1 + b2 * g2;
    // Residual of the known first combination after channel equalization.
    const Matrix known = a1 * (b1 * i_t - F * g1) + a2 * (b2 * i_t - F * g2);

    return (b1 * b1 + b2 * b2) * i_t + F * s * F.transpose() -
           b_target.transpose() * F.transpose() - F * b_target + a_sq * L * L.transpose() -
           known * L.transpose() - L * known.transpose();
}

}  // namespace cfma
