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

namespace cfma {

// Tolerances for the Sturm machinery. Chain elements are normalized to unit
// max coefficient, so the zero / fragile cutoffs act as relative thresholds.
inline constexpr double kPolyTrimRel = 1e-12;
inline constexpr double kChainZeroTol = 1e-12;
inline constexpr double kChainFragileTol = 1e-9;
inline constexpr double kRootRefineRel = 1e-12;

/// Dense real polynomial; c[k] is the coefficient of x^k.
struct RealPolynomial {
    std::vector<double> c;

    RealPolynomial() = default;
    explicit RealPolynomial(std::vector<double> coeffs) : c(std::move(coeffs)) {}

    /// Degree after ignoring trailing exact zeros; -1 for the zero polynomial.
    int degree() const;

    /// Horner evaluation.
    double eval(double x) const;

    RealPolynomial derivative() const;

    double max_abs_coeff() const;

    /// Zeroes coefficients below rel_tol * max|c| and drops trailing zeros.
    RealPolynomial trimmed(double rel_tol = kPolyTrimRel) const;
};

RealPolynomial poly_add(const RealPolynomial& a, const RealPolynomial& b);
RealPolynomial poly_sub(const RealPolynomial& a, const RealPolynomial& b);
RealPolynomial poly_mul(const RealPolynomial& a, const RealPolynomial& b);
RealPolynomial poly_scale(const RealPolynomial& a, double s);

/// Remainder of a by b (degree of result < degree of b). b must be nonzero.
RealPolynomial poly_rem(const RealPolynomial& a, const RealPolynomial& b);

/// Sturm sequence of a polynomial. Every element is trimmed and normalized
/// to unit max coefficient. `fragile` is set when the terminating remainder
/// was close to the zero cutoff, meaning root counts should be
/// cross-checked by other means.
struct SturmChain {
    std::vector<RealPolynomial> chain;
    bool fragile = false;

    /// Sign variations just right of zero (from lowest nonzero coefficients).
    int variations_at_zero_plus() const;
    /// Sign variations at +infinity (from leading coefficients).
    int variations_at_infinity() const;
    /// Sign variations at a finite point (exact zeros are skipped).
    int variations_at(double x) const;
};

SturmChain sturm_chain(const RealPolynomial& p);

/// 1 + max_i |c_i| / |c_n|: every real root lies strictly inside [-B, B].
double cauchy_bound(const RealPolynomial& p);

/// Number of distinct roots in (0, inf). Sets *fragile if the chain
/// termination was numerically marginal.
int count_positive_roots(const RealPolynomial& p, bool* fragile = nullptr);

/// (count > 0, count) over the open positive axis; roots exactly at zero
/// are excluded by construction of the variation count.
std::pair<bool, int> sturm_positive_root_exists(const RealPolynomial& p,
                                                bool* fragile = nullptr);

/// All distinct positive roots, sorted ascending, refined to about
/// kRootRefineRel relative accuracy. Works for even-multiplicity roots by
/// bisecting on the Sturm variation count.
std::vector<double> positive_roots(const RealPolynomial& p, bool* fragile = nullptr);

}  // namespace cfma
