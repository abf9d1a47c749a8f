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

#include "cfma/waterfill.hpp"

#include <cmath>

namespace cfma {

namespace {

bool is_diagonal(const Matrix& m, double rel_tol = 1e-12) {
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (i != j && std::abs(m(i, j)) > rel_tol * scale) return false;
    return true;
}

}  // namespace

Allocation waterfill_power_allocation(const Vector& gains, double power) {
    if (!(power > 0.0))
        throw InvalidInputError("waterfill_power_allocation: power must be positive");
    Allocation out;
    out.p = Vector::Zero(gains.size());

    const double g_max = gains.size() ? gains.maxCoeff() : 0.0;
    if (g_max <= 0.0) {
        out.zero_channel = true;
        return out;
    }
    const double g_cut = 1e-14 * g_max;

    const auto total = [&](double mu) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < gains.size(); ++i)
            if (gains[i] > g_cut) s += std::max(0.0, mu - 1.0 / gains[i]);
        return s;
    };

    double lo = 1.0 / g_max;           // total(lo) = 0
    double hi = 1.0 / g_max + power;   // total(hi) >= power
    const double tol = kWaterfillPowerTol * std::max(1.0, power);
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double t = total(mid);
        if (std::abs(t - power) <= tol) break;
        if (t < power)
            lo = mid;
        else
            hi = mid;
    }
    out.mu = mid;
    for (Eigen::Index i = 0; i < gains.size(); ++i)
        if (gains[i] > g_cut) out.p[i] = std::max(0.0, mid - 1.0 / gains[i]);
    return out;
}

WaterfillStep single_user_waterfill(const Matrix& h, const Matrix& n_eff, double power) {
    if (n_eff.rows() != h.rows() || n_eff.cols() != h.rows())
        throw InvalidInputError("single_user_waterfill: noise covariance size mismatch");

    // Whiten the noise, then water-fill over the eigenmodes of the
    // whitened channel Gram matrix.
    const Eigen::LLT<Matrix> llt(n_eff);
    if (llt.info() != Eigen::Success)
        throw NotPsdError("single_user_waterfill: noise covariance is not positive definite");
    const Matrix h_w = llt.matrixL().solve(h);

    Eigen::SelfAdjointEigenSolver<Matrix> es(h_w.transpose() * h_w);
    Vector gains = es.eigenvalues().cwiseMax(0.0);
    const Allocation alloc = waterfill_power_allocation(gains, power);

    WaterfillStep step;
    step.mu = alloc.mu;
    step.zero_channel = alloc.zero_channel;
    const Matrix k = es.eigenvectors() * alloc.p.asDiagonal() * es.eigenvectors().transpose();
    step.K = 0.5 * (k + k.transpose());
    return step;
}

WaterfillStep single_user_waterfill_diag(const Matrix& h, const Matrix& n_eff, double power) {
    if (h.rows() != h.cols())
        throw InvalidInputError("single_user_waterfill_diag: channel must be square");
    if (!is_diagonal(h) || !is_diagonal(n_eff))
        throw InvalidInputError("single_user_waterfill_diag: inputs must be diagonal");

    Vector gains(h.rows());
    for (Eigen::Index i = 0; i < h.rows(); ++i)
        gains[i] = h(i, i) * h(i, i) / n_eff(i, i);
    const Allocation alloc = waterfill_power_allocation(gains, power);

    WaterfillStep step;
    step.mu = alloc.mu;
    step.zero_channel = alloc.zero_channel;
    step.K = alloc.p.asDiagonal();
    return step;
}

SumCapacityResult iterative_waterfill(const ChannelPair& ch, double power, bool diagonal,
                                      double tol_bits, int max_iter) {
    if (!(power > 0.0)) throw InvalidInputError("iterative_waterfill: power must be positive");

    SumCapacityResult res;
    res.diagonal = diagonal;
    res.K1 = Matrix::Zero(ch.t, ch.t);
    res.K2 = Matrix::Zero(ch.t, ch.t);
    const Matrix eye = Matrix::Identity(ch.r, ch.r);

    const auto step = [&](const Matrix& h, const Matrix& n_eff) {
        return diagonal ? single_user_waterfill_diag(h, n_eff, power)
                        : single_user_waterfill(h, n_eff, power);
    };
    const auto c_det_of = [&] {
        return det(eye + ch.H1 * res.K1 * ch.H1.transpose() + ch.H2 * res.K2 * ch.H2.transpose());
    };

    double prev_bits = 0.0;
    bool zero1 = false, zero2 = false;
    for (int it = 1; it <= max_iter; ++it) {
        WaterfillStep s1 = step(ch.H1, eye + ch.H2 * res.K2 * ch.H2.transpose());
        res.K1 = s1.K;
        zero1 = s1.zero_channel;
        WaterfillStep s2 = step(ch.H2, eye + ch.H1 * res.K1 * ch.H1.transpose());
        res.K2 = s2.K;
        zero2 = s2.zero_channel;

        res.iterations = it;
        const double bits = 0.5 * std::log2(c_det_of());
        if (it > 1 && std::abs(bits - prev_bits) <= tol_bits) {
            res.converged = true;
            prev_bits = bits;
            break;
        }
        prev_bits = bits;
        if (zero1 && zero2) {
            res.converged = true;
            break;
        }
    }
    res.c_det = c_det_of();
    res.c_sum = 0.5 * std::log2(res.c_det);
    return res;
}

}  // namespace cfma
