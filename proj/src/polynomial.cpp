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

#include "cfma/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "cfma/core.hpp"

namespace cfma {

namespace {

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

int count_flips(const std::vector<int>& signs) {
    int flips = 0;
    int prev = 0;
    for (int s : signs) {
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++flips;
        prev = s;
    }
    return flips;
}

RealPolynomial normalized(const RealPolynomial& p) {
    const double m = p.max_abs_coeff();
    if (m == 0.0) return p;
    return poly_scale(p, 1.0 / m);
}

}  // namespace

int RealPolynomial::degree() const {
    for (std::size_t i = c.size(); i-- > 0;)
        if (c[i] != 0.0) return static_cast<int>(i);
    return -1;
}

double RealPolynomial::eval(double x) const {
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
}

RealPolynomial RealPolynomial::derivative() const {
    if (c.size() <= 1) return RealPolynomial{{}};
    std::vector<double> d(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = static_cast<double>(i) * c[i];
    return RealPolynomial(std::move(d));
}

double RealPolynomial::max_abs_coeff() const {
    double m = 0.0;
    for (double v : c) m = std::max(m, std::abs(v));
    return m;
}

RealPolynomial RealPolynomial::trimmed(double rel_tol) const {
    const double cut = rel_tol * max_abs_coeff();
    std::vector<double> out = c;
    for (double& v : out)
        if (std::abs(v) <= cut) v = 0.0;
    while (!out.empty() && out.back() == 0.0) out.pop_back();
    return RealPolynomial(std::move(out));
}

RealPolynomial poly_add(const RealPolynomial& a, const RealPolynomial& b) {
    std::vector<double> out(std::max(a.c.size(), b.c.size()), 0.0);
    for (std::size_t i = 0; i < a.c.size(); ++i) out[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) out[i] += b.c[i];
    return RealPolynomial(std::move(out));
}

RealPolynomial poly_sub(const RealPolynomial& a, const RealPolynomial& b) {
    return poly_add(a, poly_scale(b, -1.0));
}

RealPolynomial poly_mul(const RealPolynomial& a, const RealPolynomial& b) {
    if (a.c.empty() || b.c.empty()) return RealPolynomial{{}};
    std::vector<double> out(a.c.size() + b.c.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j) out[i + j] += a.c[i] * b.c[j];
    return RealPolynomial(std::move(out));
}

RealPolynomial poly_scale(const RealPolynomial& a, double s) {
    std::vector<double> out = a.c;
    for (double& v : out) v *= s;
    return RealPolynomial(std::move(out));
}

RealPolynomial poly_rem(const RealPolynomial& a, const RealPolynomial& b) {
    const int db = b.degree();
    if (db < 0) throw InvalidInputError("poly_rem: division by the zero polynomial");
    std::vector<double> rem = a.c;
    const double lead = b.c[static_cast<std::size_t>(db)];
    for (int k = static_cast<int>(rem.size()) - 1; k >= db; --k) {
        const double q = rem[static_cast<std::size_t>(k)] / lead;
        if (q != 0.0)
            for (int i = 0; i < db; ++i)
                rem[static_cast<std::size_t>(k - db + i)] -= q * b.c[static_cast<std::size_t>(i)];
        rem[static_cast<std::size_t>(k)] = 0.0;
    }
    rem.resize(static_cast<std::size_t>(std::max(db, 0)));
    return RealPolynomial(std::move(rem));
}

int SturmChain::variations_at_zero_plus() const {
    std::vector<int> signs;
    for (const auto& p : chain) {
        int s = 0;
        for (double v : p.c) {
            if (v != 0.0) {
                s = sign_of(v);
                break;
            }
        }
        signs.push_back(s);
    }
    return count_flips(signs);
}

int SturmChain::variations_at_infinity() const {
    std::vector<int> signs;
    for (const auto& p : chain) {
        const int d = p.degree();
        signs.push_back(d < 0 ? 0 : sign_of(p.c[static_cast<std::size_t>(d)]));
    }
    return count_flips(signs);
}

int SturmChain::variations_at(double x) const {
    std::vector<int> signs;
    for (const auto& p : chain) signs.push_back(sign_of(p.eval(x)));
    return count_flips(signs);
}

SturmChain sturm_chain(const RealPolynomial& p) {
    SturmChain out;
    RealPolynomial p0 = normalized(p.trimmed());
    if (p0.degree() < 1) {
        out.chain.push_back(p0);
        return out;
    }
    out.chain.push_back(p0);
    out.chain.push_back(normalized(p0.derivative().trimmed()));
    while (true) {
        const auto n = out.chain.size();
        RealPolynomial rem = poly_rem(out.chain[n - 2], out.chain[n - 1]);
        const double m = rem.max_abs_coeff();
        if (m <= kChainZeroTol) break;  // gcd reached (multiple roots end here)
        if (m <= kChainFragileTol) out.fragile = true;
        RealPolynomial next = normalized(poly_scale(rem, -1.0).trimmed());
        if (next.degree() < 0) break;
        out.chain.push_back(std::move(next));
        if (out.chain.back().degree() == 0) break;
    }
    return out;
}

double cauchy_bound(const RealPolynomial& p) {
    const RealPolynomial q = p.trimmed();
    const int d = q.degree();
    if (d < 1) return 1.0;
    const double lead = std::abs(q.c[static_cast<std::size_t>(d)]);
    double m = 0.0;
    for (int i = 0; i < d; ++i) m = std::max(m, std::abs(q.c[static_cast<std::size_t>(i)]));
    return 1.0 + m / lead;
}

int count_positive_roots(const RealPolynomial& p, bool* fragile) {
    const SturmChain s = sturm_chain(p);
    if (fragile) *fragile = s.fragile;
    if (s.chain.front().degree() < 1) return 0;
    return s.variations_at_zero_plus() - s.variations_at_infinity();
}

std::pair<bool, int> sturm_positive_root_exists(const RealPolynomial& p, bool* fragile) {
    const int n = count_positive_roots(p, fragile);
    return {n > 0, n};
}

namespace {

// Count of distinct roots in (lo, hi] given cached variation counts.
struct Segment {
    double lo, hi;
    int vlo, vhi;
    int roots() const { return vlo - vhi; }
};

double refine_root(const RealPolynomial& p, const SturmChain& s, Segment seg) {
    const double width_tol = [&] {
        return kRootRefineRel * std::max(1.0, std::abs(seg.hi));
    }();
    int slo = sign_of(p.eval(seg.lo));
    int shi = sign_of(p.eval(seg.hi));
    if (slo != 0 && shi != 0 && slo != shi) {
        // Odd multiplicity: plain sign bisection.
        double lo = seg.lo, hi = seg.hi;
        for (int it = 0; it < 200 && hi - lo > width_tol; ++it) {
            const double mid = 0.5 * (lo + hi);
            const int sm = sign_of(p.eval(mid));
            if (sm == 0) return mid;
            if (sm == slo)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    }
    // Even multiplicity (or an endpoint landed on the root): bisect on the
    // Sturm variation count instead of the sign.
    Segment cur = seg;
    for (int it = 0; it < 200 && cur.hi - cur.lo > width_tol; ++it) {
        const double mid = 0.5 * (cur.lo + cur.hi);
        const int vm = s.variations_at(mid);
        if (cur.vlo - vm >= 1)
            cur = {cur.lo, mid, cur.vlo, vm};
        else
            cur = {mid, cur.hi, vm, cur.vhi};
    }
    return 0.5 * (cur.lo + cur.hi);
}

}  // namespace

std::vector<double> positive_roots(const RealPolynomial& p, bool* fragile) {
    const SturmChain s = sturm_chain(p);
    if (fragile) *fragile = s.fragile;
    std::vector<double> roots;
    if (s.chain.front().degree() < 1) return roots;

    const double bound = cauchy_bound(p);
    Segment whole{0.0, bound, s.variations_at_zero_plus(), s.variations_at(bound)};
    // The Cauchy bound is strict, so no roots sit beyond it; any variation
    // difference between bound and +inf would be a numerical artifact.
    std::vector<Segment> stack;
    if (whole.roots() > 0) stack.push_back(whole);

    while (!stack.empty()) {
        Segment seg = stack.back();
        stack.pop_back();
        if (seg.roots() == 1 || seg.hi - seg.lo < 1e-14 * std::max(1.0, seg.hi)) {
            roots.push_back(refine_root(p, s, seg));
            continue;
        }
        double mid = 0.5 * (seg.lo + seg.hi);
        if (p.eval(mid) == 0.0) mid += (seg.hi - seg.lo) * 1e-7;
        const int vm = (mid == 0.0) ? seg.vlo : s.variations_at(mid);
        Segment left{seg.lo, mid, seg.vlo, vm};
        Segment right{mid, seg.hi, vm, seg.vhi};
        if (left.roots() > 0) stack.push_back(left);
        if (right.roots() > 0) stack.push_back(right);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace cfma
