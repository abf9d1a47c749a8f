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

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace cfma {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Base class for all numerical / validation errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotPsdError : Error {
    using Error::Error;
};
struct NotSymmetricError : Error {
    using Error::Error;
};
struct DegenerateError : Error {
    using Error::Error;
};
struct IllConditionedError : Error {
    using Error::Error;
};
struct NotCollinearError : Error {
    using Error::Error;
};
struct CollinearError : Error {
    using Error::Error;
};
struct NoRootError : Error {
    using Error::Error;
};
struct InvalidInputError : Error {
    using Error::Error;
};

// Default tolerances. Water-filling legitimately produces singular
// covariances (zeroed antennas), so the Cholesky below must accept
// semi-definite inputs; pivot decisions are scaled by the matrix magnitude.
inline constexpr double kTolPivot = 1e-10;
inline constexpr double kTolSymmetric = 1e-9;
inline constexpr double kTolTraceRel = 1e-9;

/// Determinant through pivoted elimination. Returns 0.0 for numerically
/// singular inputs, never throws.
template <typename Derived>
double det(const Eigen::MatrixBase<Derived>& m) {
    Matrix a = m;
    if (a.rows() != a.cols()) throw InvalidInputError("det: matrix not square");
    if (a.rows() == 0) return 1.0;
    if (a.rows() == 1) return a(0, 0);
    double d = a.partialPivLu().determinant();
    return std::isfinite(d) ? d : 0.0;
}

/// Semi-definite Cholesky: returns lower-triangular L with non-negative
/// diagonal such that L * L^T reproduces the input. Pivots below
/// tol_pivot * max(1, |K|_max) are treated as zero and their column is
/// zeroed, which makes the factor deterministic for singular inputs.
Matrix cholesky_lower(const Matrix& k, double tol_pivot = kTolPivot);

/// The two real channel matrices of a two-user MIMO multiple access
/// channel, r receive antennas by t transmit antennas each.
struct ChannelPair {
    int t = 0;
    int r = 0;
    Matrix H1;
    Matrix H2;

    ChannelPair(Matrix h1, Matrix h2);
};

/// Input covariances K1, K2 under a common trace power budget P together
/// with their lower-triangular Cholesky factors B1, B2.
struct CovariancePair {
    Matrix K1;
    Matrix K2;
    double P = 0.0;
    Matrix B1;
    Matrix B2;

    /// Validates symmetry, positive semi-definiteness and the trace budget,
    /// then factors both covariances.
    static CovariancePair from_covariances(Matrix k1, Matrix k2, double power);

    /// Equal power split over all antennas, K_l = (P/t) I.
    static CovariancePair isotropic(int t, double power);
};

/// Integer combination coefficients a, b and the positive lattice scalings
/// beta used by the two decoding steps.
struct CodingChoice {
    Eigen::Vector2i a;
    Eigen::Vector2i b;
    Eigen::Vector2d beta;

    CodingChoice(Eigen::Vector2i a_in, Eigen::Vector2i b_in, Eigen::Vector2d beta_in);

    double a_tilde(int l) const { return a[l] * beta[l]; }
    double b_tilde(int l) const { return b[l] * beta[l]; }

    /// a1*b2 - a2*b1, never zero (enforced at construction).
    int coeff_det() const { return a[0] * b[1] - a[1] * b[0]; }
};

/// Rate pair from the two-step decoding, with the raw first/second
/// combination rates kept around for callers that search over scalings.
/// R1/R2 carry the case-split values even when `valid` is false.
struct RatePairResult {
    double R1 = 0.0;
    double R2 = 0.0;
    double r1_first = 0.0;
    double r2_first = 0.0;
    double r1_second = 0.0;
    double r2_second = 0.0;
    bool valid = false;

    double sum() const { return R1 + R2; }
};

}  // namespace cfma
