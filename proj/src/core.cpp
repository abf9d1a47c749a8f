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

#include "cfma/core.hpp"

#include <cmath>

namespace cfma {

Matrix cholesky_lower(const Matrix& k, double tol_pivot) {
    const auto n = k.rows();
    if (k.cols() != n) throw InvalidInputError("cholesky_lower: matrix not square");

    const double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
    if ((k - k.transpose()).cwiseAbs().maxCoeff() > kTolSymmetric * scale)
        throw NotSymmetricError("cholesky_lower: input is not symmetric");

    const double tau = tol_pivot * scale;
    Matrix l = Matrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double pivot = k(j, j) - l.row(j).head(j).squaredNorm();
        if (pivot < -tau)
            throw NotPsdError("cholesky_lower: negative pivot, input is not PSD");
        if (pivot <= tau) {
            // Semi-definite direction: keep the whole column at zero so the
            // factor is unique regardless of rounding in the pivot.
            continue;
        }
        const double d = std::sqrt(pivot);
        l(j, j) = d;
        for (Eigen::Index i = j + 1; i < n; ++i)
            l(i, j) = (k(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / d;
    }
    return l;
}

ChannelPair::ChannelPair(Matrix h1, Matrix h2) : H1(std::move(h1)), H2(std::move(h2)) {
    if (H1.rows() != H2.rows() || H1.cols() != H2.cols())
        throw InvalidInputError("ChannelPair: H1 and H2 must have equal dimensions");
    if (H1.rows() < 1 || H1.cols() < 1)
        throw InvalidInputError("ChannelPair: empty channel matrix");
    t = static_cast<int>(H1.cols());
    r = static_cast<int>(H1.rows());
}

CovariancePair CovariancePair::from_covariances(Matrix k1, Matrix k2, double power) {
    if (!(power > 0.0)) throw InvalidInputError("CovariancePair: power must be positive");
    if (k1.rows() != k1.cols() || k2.rows() != k2.cols() || k1.rows() != k2.rows())
        throw InvalidInputError("CovariancePair: covariances must be square, same size");

    const double budget = power * (1.0 + kTolTraceRel);
    if (k1.trace() > budget || k2.trace() > budget)
        throw InvalidInputError("CovariancePair: trace exceeds the power budget");

    CovariancePair c;
    c.K1 = std::move(k1);
    c.K2 = std::move(k2);
    c.P = power;
    c.B1 = cholesky_lower(c.K1);  // also validates symmetry / PSD
    c.B2 = cholesky_lower(c.K2);
    return c;
}

CovariancePair CovariancePair::isotropic(int t, double power) {
    if (t < 1) throw InvalidInputError("CovariancePair: dimension must be at least 1");
    Matrix k = (power / t) * Matrix::Identity(t, t);
    return from_covariances(k, k, power);
}

CodingChoice::CodingChoice(Eigen::Vector2i a_in, Eigen::Vector2i b_in, Eigen::Vector2d beta_in)
    : a(a_in), b(b_in), beta(beta_in) {
    if (a[0] * b[1] - a[1] * b[0] == 0)
        throw InvalidInputError("CodingChoice: (a, b) must be linearly independent");
    if (!(beta[0] > 0.0) || !(beta[1] > 0.0))
        throw InvalidInputError("CodingChoice: beta entries must be positive");
}

}  // namespace cfma
