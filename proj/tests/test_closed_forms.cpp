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

#include <doctest.h>

#include <cmath>

#include "cfma/closed_forms.hpp"
#include "cfma/montecarlo.hpp"
#include "cfma/rates.hpp"
#include "cfma/sumcap.hpp"
#include "cfma/waterfill.hpp"
#include "support.hpp"

using namespace cfma;

namespace {

Vector vec2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

SimoInstance random_simo(std::uint64_t seed, std::uint64_t trial, double power) {
    testing::Stream s(seed, trial);
    return SimoInstance(vec2(s.next(), s.next()), vec2(s.next(), s.next()), power);
}

}  // namespace

TEST_CASE("single-antenna instance geometry") {
    SimoInstance si(vec2(1.0, 0.0), vec2(1.0, 1.0), 2.0);
    CHECK(si.n1 == 1.0);
    CHECK(si.n2 == 2.0);
    CHECK(si.s == 1.0);
    CHECK_FALSE(si.collinear);

    SimoInstance col(vec2(1.0, 2.0), vec2(2.0, 4.0), 2.0);
    CHECK(col.collinear);

    CHECK_THROWS_AS(SimoInstance(vec2(1, 0), Vector::Ones(3), 1.0), InvalidInputError);
    CHECK_THROWS_AS(SimoInstance(vec2(1, 0), vec2(1, 1), -1.0), InvalidInputError);
}

TEST_CASE("gram eigenvalues and the capacity determinant") {
    for (int trial = 0; trial < 100; ++trial) {
        SimoInstance si = random_simo(101, trial, 1.0 + trial % 7);
        const auto [l1, l2] = simo_lambdas(si);
        CHECK(l1 >= l2);
        CHECK(l1 + l2 == doctest::Approx(si.n1 + si.n2).epsilon(1e-12));
        CHECK(l1 * l2 ==
              doctest::Approx(std::max(0.0, si.n1 * si.n2 - si.s * si.s)).epsilon(1e-9));

        // Determinant identity against the direct receive-side matrix.
        Matrix s_mat = Matrix::Identity(2, 2) +
                       si.P * si.h1 * si.h1.transpose() + si.P * si.h2 * si.h2.transpose();
        CHECK(simo_c_det(si) == doctest::Approx(det(s_mat)).epsilon(1e-10));
    }
}

TEST_CASE("discriminant closed form and hand-computed instances") {
    // Unit collinear channels: c_det = 1 + 2P, delta = 8*sqrt(5) - 15 at P=2
    // and 4*sqrt(3) - 9 at P=1.
    SimoInstance two(vec2(1.0, 0.0), vec2(1.0, 0.0), 2.0);
    CHECK(two.collinear);
    CHECK(simo_delta(two) ==
          doctest::Approx(8.0 * std::sqrt(5.0) - 15.0).epsilon(1e-12));
    CHECK(simo_collinear_achievable(two));  // 2/sqrt(5) >= 3/4

    SimoInstance one(vec2(1.0, 0.0), vec2(1.0, 0.0), 1.0);
    CHECK(simo_delta(one) == doctest::Approx(4.0 * std::sqrt(3.0) - 9.0).epsilon(1e-12));
    CHECK_FALSE(simo_collinear_achievable(one));  // 1/sqrt(3) < 3/4

    // Zero power is the universal failure point: delta is exactly -3.
    SimoInstance rest(vec2(0.3, 0.7), vec2(0.9, 0.2), 0.0);
    CHECK(simo_delta(rest) == -3.0);

    CHECK_THROWS_AS(simo_collinear_achievable(random_simo(103, 0, 1.0)), NotCollinearError);
}

TEST_CASE("achievable scaling interval matches the discriminant") {
    int with_interval = 0;
    for (int trial = 0; trial < 200; ++trial) {
        SimoInstance si = random_simo(107, trial, (trial % 2) ? 100.0 : 5.0);
        const auto range = simo_gamma_range(si);
        CHECK(range.has_value() == (simo_delta(si) >= 0.0));
        if (!range) continue;
        ++with_interval;
        CHECK(range->first > 0.0);
        CHECK(range->second >= range->first);

        // Endpoints are the zeros of the quadratic g built from scratch.
        const double a = 1.0 + si.P * si.n2;
        const double b = std::sqrt(simo_c_det(si)) + 2.0 * si.P * si.s;
        const double c = 1.0 + si.P * si.n1;
        for (double x : {range->first, range->second})
            CHECK(a * x * x - b * x + c ==
                  doctest::Approx(0.0).scale(a + b + c).epsilon(1e-10));
    }
    CHECK(with_interval > 50);
}

TEST_CASE("alignment condition equals the 3/5 angle test") {
    SimoInstance good(vec2(1.0, 0.0), vec2(1.0, 1.0), 1.0);
    CHECK(simo_noncollinear_condition(good));  // (1+2)^2 = 9 > 8

    SimoInstance bad(vec2(1.0, 0.0), vec2(0.0, 1.0), 1.0);
    CHECK_FALSE(simo_noncollinear_condition(bad));  // orthogonal

    SimoInstance col(vec2(1.0, 1.0), vec2(2.0, 2.0), 1.0);
    CHECK_THROWS_AS(simo_noncollinear_condition(col), CollinearError);

    for (int trial = 0; trial < 300; ++trial) {
        SimoInstance si = random_simo(109, trial, 1.0);
        if (si.collinear) continue;
        const double cosine = si.s / std::sqrt(si.n1 * si.n2);
        if (std::abs(cosine - 0.6) < 1e-6) continue;  // knife edge
        CHECK(simo_noncollinear_condition(si) == (cosine > 0.6));
    }
}

TEST_CASE("power threshold certifies the discriminant sign change") {
    int solved = 0;
    for (int trial = 0; trial < 200; ++trial) {
        SimoInstance si = random_simo(113, trial, 1.0);
        if (si.collinear) continue;
        if (!simo_noncollinear_condition(si)) {
            CHECK_THROWS_AS(simo_p_star(si), NoRootError);
            continue;
        }
        ++solved;
        const double p_star = simo_p_star(si);
        CHECK(p_star > 0.0);

        // Against the quadratic derived by squaring the discriminant.
        const double ref = testing::two_user_vector_power_threshold(si.n1, si.n2, si.s);
        CHECK(p_star == doctest::Approx(ref).epsilon(1e-8));

        // The sign change is real.
        SimoInstance below(si.h1, si.h2, 0.99 * p_star);
        SimoInstance above(si.h1, si.h2, 1.01 * p_star);
        CHECK(simo_delta(below) < 1e-9);
        CHECK(simo_delta(above) > -1e-9);
        CHECK(simo_delta(SimoInstance(si.h1, si.h2, 100.0 * p_star)) > 0.0);
    }
    CHECK(solved > 100);

    SimoInstance col(vec2(1.0, 1.0), vec2(2.0, 2.0), 1.0);
    CHECK_THROWS_AS(simo_p_star(col), CollinearError);
}

TEST_CASE("verdicts vary continuously across the collinearity split") {
    // A nearly collinear pair and its exactly collinear limit must agree.
    // The Gram determinant grows like the perturbation squared, so 1e-4
    // sits just past the classification cutoff while every formula still
    // moves by only about 1e-4 relative.
    const double p = 6.0;
    const double eps = 1e-4;
    SimoInstance exact(vec2(1.0, 0.5), vec2(2.0, 1.0), p);
    REQUIRE(exact.collinear);
    SimoInstance near(vec2(1.0, 0.5), vec2(2.0, 1.0 + eps), p);
    REQUIRE_FALSE(near.collinear);

    CHECK(simo_delta(near) == doctest::Approx(simo_delta(exact)).epsilon(1e-3));
    CHECK(simo_c_det(near) == doctest::Approx(simo_c_det(exact)).epsilon(1e-3));

    Matrix h1(2, 1), h2e(2, 1), h2n(2, 1);
    h1 << 1.0, 0.5;
    h2e << 2.0, 1.0;
    h2n << 2.0, 1.0 + eps;
    const bool ach_exact = check_sum_capacity(ChannelPair(h1, h2e), p).achievable;
    const bool ach_near = check_sum_capacity(ChannelPair(h1, h2n), p).achievable;
    CHECK(ach_exact == ach_near);
}

TEST_CASE("diagonal instance bookkeeping and normalized gains") {
    Matrix h1 = Matrix::Zero(2, 2), h2 = Matrix::Zero(2, 2);
    h1.diagonal() << 2.0, 1.0;
    h2.diagonal() << 1.0, 3.0;
    Matrix k1 = Matrix::Zero(2, 2), k2 = Matrix::Zero(2, 2);
    k1.diagonal() << 4.0, 0.0;
    k2.diagonal() << 1.0, 3.0;
    DiagInstance di(h1, h2, k1, k2, 4.0);

    CHECK(di.c(0, 0) == doctest::Approx(2.0).epsilon(1e-12));         // 2*sqrt(4/4)
    CHECK(di.c(0, 1) == 0.0);                                         // no power
    CHECK(di.c(1, 0) == doctest::Approx(0.5).epsilon(1e-12));         // 1*sqrt(1/4)
    CHECK(di.c(1, 1) == doctest::Approx(3.0 * std::sqrt(0.75)).epsilon(1e-12));
    CHECK_THROWS_AS(di.c(2, 0), InvalidInputError);

    Matrix full(2, 2);
    full << 1, 1, 1, 1;
    CHECK_THROWS_AS(DiagInstance(full, h2, k1, k2, 4.0), InvalidInputError);
    Matrix hot = k1;
    hot(0, 0) = 9.0;
    CHECK_THROWS_AS(DiagInstance(h1, h2, hot, k2, 4.0), InvalidInputError);
}

TEST_CASE("per-user splits put low power on the best antenna only") {
    Matrix h1 = Matrix::Zero(2, 2), h2 = Matrix::Zero(2, 2);
    h1.diagonal() << 2.0, 1.0;
    h2.diagonal() << 1.0, 2.0;
    ChannelPair ch(h1, h2);

    DiagInstance low = DiagInstance::from_waterfill(ch, 0.1);
    CHECK(low.K1(0, 0) == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(low.K1(1, 1) == 0.0);
    CHECK(low.K2(0, 0) == 0.0);
    CHECK(low.K2(1, 1) == doctest::Approx(0.1).epsilon(1e-9));

    // Symmetric channels split equally at every power.
    ChannelPair sym(Matrix::Identity(2, 2), Matrix::Identity(2, 2));
    DiagInstance even = DiagInstance::from_waterfill(sym, 10.0);
    CHECK(even.K1(0, 0) == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(even.K2(1, 1) == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("anchored conditions on the fully symmetric instance") {
    const Matrix eye = Matrix::Identity(2, 2);
    DiagInstance di(eye, eye, 5.0 * eye, 5.0 * eye, 10.0);
    DiagConditionReport rep = diag_conditions(di);
    CHECK(rep.cond1_evaluable);
    CHECK(rep.cond2_evaluable);
    CHECK(rep.cond1);
    CHECK(rep.cond2);
    CHECK(rep.either());
    CHECK(rep.gamma1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.gamma2 == doctest::Approx(1.0).epsilon(1e-12));

    // g(1) = 4 - (1 + P): the threshold power is exactly 3.
    auto p0 = diag_power_threshold(di, 1.0);
    REQUIRE(p0.has_value());
    CHECK(*p0 == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("single-antenna allocations make the anchored test non-evaluable") {
    Matrix h1 = Matrix::Zero(2, 2), h2 = Matrix::Zero(2, 2);
    h1.diagonal() << 2.0, 0.1;
    h2.diagonal() << 2.0, 0.1;
    ChannelPair ch(h1, h2);
    DiagInstance di = DiagInstance::from_waterfill(ch, 0.5);
    CHECK(di.K1(1, 1) == 0.0);

    DiagConditionReport rep = diag_conditions(di);
    CHECK(rep.cond1_evaluable);
    CHECK_FALSE(rep.cond2_evaluable);
    CHECK_FALSE(rep.cond2);
}

TEST_CASE("threshold scaling law certifies achievability beyond it") {
    int tested = 0;
    for (int trial = 0; trial < 150; ++trial) {
        ChannelPair ch = draw_channel(ModelKind::Diag2x2, 127, trial);
        const double p_ref = 100.0;
        DiagInstance di = DiagInstance::from_waterfill(ch, p_ref);
        DiagConditionReport rep = diag_conditions(di);
        double gamma = 0.0;
        if (rep.cond1_evaluable && rep.cond1)
            gamma = rep.gamma1;
        else if (rep.cond2_evaluable && rep.cond2)
            gamma = rep.gamma2;
        else
            continue;
        auto p0 = diag_power_threshold(di, gamma);
        REQUIRE(p0.has_value());
        ++tested;

        // Same power fractions, ten times the threshold power: the decoder
        // must reach the sum rate of those inputs.
        const double q = 10.0 * *p0;
        CovariancePair cov = CovariancePair::from_covariances(di.K1 * (q / p_ref),
                                                              di.K2 * (q / p_ref), q);
        SumCapVerdict v = check_sum_rate_at(ch, cov);
        CHECK(v.achievable);
    }
    CHECK(tested > 40);

    // A gamma anchored at neither antenna is rejected.
    const Matrix eye = Matrix::Identity(2, 2);
    DiagInstance di(eye, eye, 5.0 * eye, 5.0 * eye, 10.0);
    CHECK_THROWS_AS(diag_power_threshold(di, 2.0), InvalidInputError);
    CHECK_THROWS_AS(diag_power_threshold(di, -1.0), InvalidInputError);
}

TEST_CASE("condition failure implies no threshold at the anchored ratio") {
    int checked = 0;
    for (int trial = 0; trial < 200 && checked < 40; ++trial) {
        ChannelPair ch = draw_channel(ModelKind::Diag2x2, 131, trial);
        DiagInstance di = DiagInstance::from_waterfill(ch, 100.0);
        DiagConditionReport rep = diag_conditions(di);
        if (!rep.cond1_evaluable || rep.cond1) continue;
        ++checked;
        CHECK_FALSE(diag_power_threshold(di, rep.gamma1).has_value());
    }
    CHECK(checked == 40);
}
