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

#include "cfma/closed_forms.hpp"

#include <cmath>

#include "cfma/polynomial.hpp"
#include "cfma/waterfill.hpp"

namespace cfma {

SimoInstance::SimoInstance(Vector h1_in, Vector h2_in, double power)
    : h1(std::move(h1_in)), h2(std::move(h2_in)), P(power) {
    if (h1.size() != h2.size() || h1.size() < 1)
        throw InvalidInputError("SimoInstance: channel vectors must match and be non-empty");
    // P = 0 is allowed: every closed form degrades gracefully there and the
    // zero-power delta is a useful fixed point (it equals -3 exactly).
    if (!(P >= 0.0)) throw InvalidInputError("SimoInstance: power must be non-negative");
    n1 = h1.squaredNorm();
    n2 = h2.squaredNorm();
    s = h1.dot(h2);
    collinear = (n1 * n2 - s * s) <= kTolCollinear * n1 * n2;
}

std::pair<double, double> simo_lambdas(const SimoInstance& si) {
    const double tr = si.n1 + si.n2;
    const double dt = std::max(0.0, si.n1 * si.n2 - si.s * si.s);
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * dt));
    return {0.5 * (tr + disc), std::max(0.0, 0.5 * (tr - disc))};
}

double simo_c_det(const SimoInstance& si) {
    const auto [l1, l2] = simo_lambdas(si);
    return (1.0 + si.P * l1) * (1.0 + si.P * l2);
}

double simo_delta(const SimoInstance& si) {
    const double root = std::sqrt(simo_c_det(si)) + 2.0 * si.P * si.s;
    return root * root - 4.0 * (1.0 + si.P * si.n1) * (1.0 + si.P * si.n2);
}

std::optional<std::pair<double, double>> simo_gamma_range(const SimoInstance& si) {
    const double delta = simo_delta(si);
    if (delta < 0.0) return std::nullopt;
    const double b = std::sqrt(simo_c_det(si)) + 2.0 * si.P * si.s;
    const double a = 1.0 + si.P * si.n2;
    const double hi = (b + std::sqrt(delta)) / (2.0 * a);
    const double lo = (b - std::sqrt(delta)) / (2.0 * a);
    return std::make_pair(lo, hi);
}

bool simo_collinear_achievable(const SimoInstance& si) {
    if (!si.collinear)
        throw NotCollinearError("simo_collinear_achievable: channels are not collinear");
    return si.P * si.s / std::sqrt(1.0 + si.P * (si.n1 + si.n2)) >= 0.75;
}

bool simo_noncollinear_condition(const SimoInstance& si) {
    if (si.collinear)
        throw CollinearError("simo_noncollinear_condition: channels are collinear");
    const auto [l1, l2] = simo_lambdas(si);
    const double lhs = std::sqrt(l1 * l2) + 2.0 * si.s;
    return lhs * lhs > 4.0 * si.n1 * si.n2;
}

double simo_p_star(const SimoInstance& si) {
    if (si.collinear) throw CollinearError("simo_p_star: channels are collinear");

    const double n1 = si.n1, n2 = si.n2, s = si.s;
    const RealPolynomial cd({1.0, n1 + n2, n1 * n2 - s * s});
    const RealPolynomial cross({4.0, 4.0 * (n1 + n2), 4.0 * n1 * n2});
    const RealPolynomial r_poly =
        poly_sub(poly_add(cd, RealPolynomial({0.0, 0.0, 4.0 * s * s})), cross);
    const RealPolynomial q =
        poly_sub(poly_mul(r_poly, r_poly),
                 poly_mul(RealPolynomial({0.0, 0.0, 16.0 * s * s}), cd));

    const auto delta_at = [&](double p) {
        const double root = std::sqrt(cd.eval(p)) + 2.0 * p * s;
        return root * root - 4.0 * (1.0 + p * n1) * (1.0 + p * n2);
    };
    const auto delta_scale = [&](double p) {
        const double root = std::sqrt(cd.eval(p)) + 2.0 * p * s;
        return std::max({1.0, root * root, 4.0 * (1.0 + p * n1) * (1.0 + p * n2)});
    };

    // The squaring that produced q introduces roots of the wrong branch;
    // keep only those where delta itself vanishes.
    double p_hat = -1.0;
    for (double p : positive_roots(q))
        if (std::abs(delta_at(p)) <= 1e-6 * delta_scale(p)) p_hat = std::max(p_hat, p);
    if (p_hat <= 0.0) throw NoRootError("simo_p_star: delta never turns positive");

    // Polish on delta directly: it crosses from negative to positive here.
    for (double rel = 1e-8; rel <= 0.6; rel *= 2.0) {
        double lo = p_hat * (1.0 - rel);
        double hi = p_hat * (1.0 + rel);
        if (delta_at(lo) < 0.0 && delta_at(hi) >= 0.0) {
            for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                (delta_at(mid) < 0.0 ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
    }
    return p_hat;
}

namespace {

void require_diag2(const Matrix& m, const char* what) {
    if (m.rows() != 2 || m.cols() != 2)
        throw InvalidInputError(std::string("DiagInstance: ") + what + " must be 2x2");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (std::abs(m(0, 1)) > 1e-12 * scale || std::abs(m(1, 0)) > 1e-12 * scale)
        throw InvalidInputError(std::string("DiagInstance: ") + what + " must be diagonal");
}

}  // namespace

DiagInstance::DiagInstance(Matrix h1, Matrix h2, Matrix k1, Matrix k2, double power)
    : H1(std::move(h1)), H2(std::move(h2)), K1(std::move(k1)), K2(std::move(k2)), P(power) {
    if (!(P > 0.0)) throw InvalidInputError("DiagInstance: power must be positive");
    require_diag2(H1, "H1");
    require_diag2(H2, "H2");
    require_diag2(K1, "K1");
    require_diag2(K2, "K2");
    for (Matrix* k : {&K1, &K2}) {
        for (int j = 0; j < 2; ++j) {
            if ((*k)(j, j) < -1e-12 * std::max(1.0, P))
                throw NotPsdError("DiagInstance: negative power allocation");
            (*k)(j, j) = std::max(0.0, (*k)(j, j));
        }
        if (k->trace() > P * (1.0 + kTolTraceRel))
            throw InvalidInputError("DiagInstance: allocation exceeds the power budget");
    }
}

DiagInstance DiagInstance::from_waterfill(const ChannelPair& ch, double power) {
    // Each user water-fills its own diagonal channel against unit noise.
    // The joint update is deliberately avoided here: at high power it parks
    // each user on a single antenna, which zeroes cross coefficients and
    // leaves the diagonal conditions with nothing to say.
    const Matrix eye = Matrix::Identity(ch.t, ch.t);
    const WaterfillStep w1 = single_user_waterfill_diag(ch.H1, eye, power);
    const WaterfillStep w2 = single_user_waterfill_diag(ch.H2, eye, power);
    return DiagInstance(ch.H1, ch.H2, w1.K, w2.K, power);
}

double DiagInstance::c(int l, int j) const {
    if (l < 0 || l > 1 || j < 0 || j > 1)
        throw InvalidInputError("DiagInstance::c: indices must be 0 or 1");
    const Matrix& h = (l == 0) ? H1 : H2;
    const Matrix& k = (l == 0) ? K1 : K2;
    return h(j, j) * std::sqrt(k(j, j) / P);
}

DiagConditionReport diag_conditions(const DiagInstance& di) {
    const double c11 = di.c(0, 0), c12 = di.c(0, 1);
    const double c21 = di.c(1, 0), c22 = di.c(1, 1);
    const double c_max =
        std::max({std::abs(c11), std::abs(c12), std::abs(c21), std::abs(c22)});
    const double cut = 1e-14 * std::max(1.0, c_max);
    const double a1 = c11 * c11 + c21 * c21;
    const double a2 = c12 * c12 + c22 * c22;

    DiagConditionReport rep;
    rep.cond1_evaluable = std::abs(c11) > cut && std::abs(c21) > cut;
    if (rep.cond1_evaluable) {
        rep.gamma1 = c11 / c21;
        const double lhs = c22 / c21 - c12 / c11;
        rep.cond1 = lhs * lhs < std::sqrt(a2 / a1);
    }
    rep.cond2_evaluable = std::abs(c12) > cut && std::abs(c22) > cut;
    if (rep.cond2_evaluable) {
        rep.gamma2 = c12 / c22;
        const double lhs = c21 / c22 - c11 / c12;
        rep.cond2 = lhs * lhs < std::sqrt(a1 / a2);
    }
    return rep;
}

std::optional<double> diag_power_threshold(const DiagInstance& di, double gamma) {
    if (!(gamma > 0.0)) throw InvalidInputError("diag_power_threshold: gamma must be positive");
    const double c11 = di.c(0, 0), c12 = di.c(0, 1);
    const double c21 = di.c(1, 0), c22 = di.c(1, 1);
    const double a1 = c11 * c11 + c21 * c21;
    const double a2 = c12 * c12 + c22 * c22;

    // The quadratic-in-P form requires gamma to cancel one diagonal entry
    // of the scaled mismatch; the other entry's square survives as w.
    const double r1 = gamma * c21 - c11;
    const double r2 = gamma * c22 - c12;
    const double c_scale = std::max({1.0, c11 * c11, c12 * c12, c21 * c21, c22 * c22});
    double w;
    if (r1 * r1 <= 1e-18 * c_scale)
        w = r2 * r2;
    else if (r2 * r2 <= 1e-18 * c_scale)
        w = r1 * r1;
    else
        throw InvalidInputError("diag_power_threshold: gamma does not anchor either antenna");

    const double u = gamma * gamma + 1.0;
    const double g4 = std::pow(gamma, 4.0);
    const double qa = u * u * w * w - g4 * a1 * a2;
    const double qb = 2.0 * u * u * u * w - g4 * (a1 + a2);
    const double qc = u * u * u * u - g4;
    if (qa >= 0.0) return std::nullopt;

    // One sign change: the quadratic is positive at zero power and its
    // leading coefficient is negative, so exactly one positive root.
    const double disc = std::sqrt(qb * qb - 4.0 * qa * qc);
    const double qq = -0.5 * (qb + (qb >= 0.0 ? disc : -disc));
    const double root_a = qq / qa;
    const double root_b = (qq != 0.0) ? qc / qq : 0.0;
    const double p0 = std::max(root_a, root_b);
    if (!(p0 > 0.0)) return std::nullopt;

    const auto q_at = [&](double p) {
        const double lhs = u + p * w;
        return u * u * lhs * lhs - g4 * (1.0 + p * a1) * (1.0 + p * a2);
    };
    if (!(q_at(0.99 * p0) > 0.0) || !(q_at(1.01 * p0) < 0.0))
        throw DegenerateError("diag_power_threshold: threshold failed sign verification");
    return p0;
}

}  // namespace cfma
