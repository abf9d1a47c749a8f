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

#include "cfma/sumcap.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "cfma/rates.hpp"

namespace cfma {

RealPolynomial f_gamma_poly(const ChannelPair& ch, const CovariancePair& cov) {
    const int deg = 2 * ch.t;
    const int n = deg + 1;
    const Matrix g1 = ch.H1 * cov.B1;
    const Matrix g2 = ch.H2 * cov.B2;
    const Matrix eye = Matrix::Identity(ch.t, ch.t);

    Vector vals(n);
    for (int i = 0; i < n; ++i) {
        const double x = static_cast<double>(i);
        const Matrix e = x * g2 - g1;
        vals[i] = det((x * x + 1.0) * eye + e.transpose() * e);
    }

    Matrix vand(n, n);
    for (int i = 0; i < n; ++i) {
        double pw = 1.0;
        for (int j = 0; j < n; ++j) {
            vand(i, j) = pw;
            pw *= static_cast<double>(i);
        }
    }
    Vector coef = vand.colPivHouseholderQr().solve(vals);

    RealPolynomial f(std::vector<double>(coef.data(), coef.data() + n));
    const double scale = vals.cwiseAbs().maxCoeff();
    for (int i = 0; i < n; ++i) {
        if (std::abs(f.eval(static_cast<double>(i)) - vals[i]) > kPolyFitResidualRel * scale)
            throw IllConditionedError("f_gamma_poly: interpolation residual too large");
    }
    return f;
}

RealPolynomial g_gamma_poly(const RealPolynomial& f, double c_det, int t) {
    if (!(c_det > 0.0)) throw InvalidInputError("g_gamma_poly: c_det must be positive");
    std::vector<double> mono(static_cast<std::size_t>(t) + 1, 0.0);
    mono.back() = std::sqrt(c_det);
    return poly_sub(f, RealPolynomial(std::move(mono)));
}

namespace {

struct GridScan {
    double gmin = std::numeric_limits<double>::infinity();
    double argmin = 0.0;
    double lo = 0.0;  // first grid point with g <= tol
    double hi = 0.0;  // last grid point with g <= tol
    bool any_below = false;
};

// Log-spaced scan of g over (0, bound], used when the Sturm chain is not
// trustworthy.
GridScan scan_grid(const RealPolynomial& g, double bound, double tol) {
    constexpr int kPoints = 20001;
    GridScan scan;
    const double lo = 1e-6;
    const double ratio = std::log(bound / lo);
    for (int i = 0; i < kPoints; ++i) {
        const double x = lo * std::exp(ratio * i / (kPoints - 1));
        const double v = g.eval(x);
        if (v < scan.gmin) {
            scan.gmin = v;
            scan.argmin = x;
        }
        if (v <= tol) {
            if (!scan.any_below) scan.lo = x;
            scan.hi = x;
            scan.any_below = true;
        }
    }
    return scan;
}

// Shared back end: given the input covariances and the sum-rate target
// recorded in wf, build f and g and classify the feasible gamma set.
SumCapVerdict verdict_from(const ChannelPair& ch, const CovariancePair& cov,
                           SumCapacityResult wf) {
    SumCapVerdict v;
    v.waterfill = std::move(wf);

    v.f = f_gamma_poly(ch, cov);
    v.g = g_gamma_poly(v.f, v.waterfill.c_det, ch.t);

    bool fragile = false;
    const std::vector<double> roots = positive_roots(v.g, &fragile);
    v.fragile = fragile;
    v.positive_root_count = static_cast<int>(roots.size());

    const double scale = v.g.max_abs_coeff();
    const double tangency_tol = kTangencyRel * scale;

    if (fragile) {
        // Marginal chain: decide from a dense scan instead.
        const GridScan scan = scan_grid(v.g, cauchy_bound(v.g), tangency_tol);
        v.achievable = scan.any_below;
        v.boundary = scan.any_below && std::abs(scan.gmin) <= tangency_tol;
        if (scan.any_below) {
            v.gamma_witness = scan.argmin;
            v.gamma_intervals.push_back({scan.lo, scan.hi});
        }
    } else if (!roots.empty()) {
        v.achievable = true;
        // Classify the sign of g on each gap between consecutive roots
        // (plus the flanks, which are positive in theory since g(0+) > 0
        // and g has positive leading coefficient).
        const std::size_t n = roots.size();
        std::vector<int> gap_neg(n + 1, 0);
        gap_neg[0] = v.g.eval(0.5 * roots.front()) < 0.0;
        gap_neg[n] = v.g.eval(roots.back() + 1.0) < 0.0;
        for (std::size_t k = 1; k < n; ++k)
            gap_neg[k] = v.g.eval(0.5 * (roots[k - 1] + roots[k])) < 0.0;

        // Maximal runs of negative gaps form one closed feasible interval
        // each; a root with non-negative gaps on both sides is a tangency.
        for (std::size_t i = 0; i < n;) {
            if (gap_neg[i + 1]) {
                std::size_t j = i + 1;
                while (j < n && gap_neg[j + 1]) ++j;
                v.gamma_intervals.push_back({roots[i], roots[j]});
                i = j + 1;
            } else {
                if (!gap_neg[i]) v.gamma_intervals.push_back({roots[i], roots[i]});
                ++i;
            }
        }

        // Witness: midpoint of the first open interval if one exists,
        // otherwise the first tangency point.
        bool found_open = false;
        for (const auto& iv : v.gamma_intervals) {
            if (iv.second > iv.first) {
                v.gamma_witness = 0.5 * (iv.first + iv.second);
                found_open = true;
                break;
            }
        }
        if (!found_open) {
            v.gamma_witness = v.gamma_intervals.front().first;
            v.boundary = true;
        } else {
            // Even with an open region the dip may be shallow; measure the
            // depth at the interior critical points.
            double gmin = 0.0;
            for (double c : positive_roots(v.g.derivative().trimmed()))
                gmin = std::min(gmin, v.g.eval(c));
            v.boundary = std::abs(gmin) <= tangency_tol;
        }
    } else {
        // No roots: sum capacity is out of reach unless the minimum of g
        // grazes zero from above within the tangency tolerance.
        double gmin = std::numeric_limits<double>::infinity();
        double argmin = 0.0;
        for (double c : positive_roots(v.g.derivative().trimmed())) {
            const double val = v.g.eval(c);
            if (val < gmin) {
                gmin = val;
                argmin = c;
            }
        }
        if (std::isfinite(gmin) && std::abs(gmin) <= tangency_tol) {
            v.achievable = true;
            v.boundary = true;
            v.gamma_witness = argmin;
            v.gamma_intervals.push_back({argmin, argmin});
        }
    }

    if (v.achievable && v.gamma_witness > 0.0) {
        const CodingChoice cc({1, 1}, {1, 0}, {v.gamma_witness, 1.0});
        const RatePairResult rp = achievable_pair(ch, cov, cc);
        v.witness_sum_rate = rp.sum();
        v.cross_check_residual = std::abs(v.witness_sum_rate - v.waterfill.c_sum);
    }
    return v;
}

}  // namespace

SumCapVerdict check_sum_capacity(const ChannelPair& ch, double power, bool diagonal) {
    SumCapacityResult wf = iterative_waterfill(ch, power, diagonal);
    const CovariancePair cov = CovariancePair::from_covariances(wf.K1, wf.K2, power);
    return verdict_from(ch, cov, std::move(wf));
}

SumCapVerdict check_sum_rate_at(const ChannelPair& ch, const CovariancePair& cov) {
    SumCapacityResult wf;
    wf.K1 = cov.K1;
    wf.K2 = cov.K2;
    wf.c_det = det(received_covariance(ch, cov));
    if (!(wf.c_det > 0.0))
        throw DegenerateError("check_sum_rate_at: received covariance is not positive definite");
    wf.c_sum = 0.5 * std::log2(wf.c_det);
    wf.iterations = 0;
    wf.converged = true;
    wf.diagonal = false;
    return verdict_from(ch, cov, std::move(wf));
}

}  // namespace cfma
