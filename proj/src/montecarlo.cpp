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

#include "cfma/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "cfma/rates.hpp"
#include "cfma/sumcap.hpp"
#include "cfma/waterfill.hpp"

namespace cfma {

std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
}

double uniform01(std::uint64_t seed, std::uint64_t trial, std::uint64_t draw) {
    std::uint64_t z = mix64(seed + 0x9e3779b97f4a7c15ull);
    z = mix64(z ^ (trial * 0x9e3779b97f4a7c15ull + 0xbf58476d1ce4e5b9ull));
    z = mix64(z ^ (draw * 0x94d049bb133111ebull + 0x2545f4914f6cdd1dull));
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

ModelKind model_from_string(const std::string& name) {
    if (name == "simo") return ModelKind::Simo;
    if (name == "diag2x2") return ModelKind::Diag2x2;
    if (name == "generic2x2") return ModelKind::Generic2x2;
    throw InvalidInputError("unknown model '" + name + "' (expected simo|diag2x2|generic2x2)");
}

std::string model_name(ModelKind model) {
    switch (model) {
        case ModelKind::Simo: return "simo";
        case ModelKind::Diag2x2: return "diag2x2";
        case ModelKind::Generic2x2: return "generic2x2";
    }
    throw InvalidInputError("model_name: unhandled model");
}

void ExperimentConfig::validate() const {
    if (trials < 1) throw InvalidInputError("ExperimentConfig: trials must be at least 1");
    if (p_grid_db.empty()) throw InvalidInputError("ExperimentConfig: empty power grid");
    for (std::size_t i = 1; i < p_grid_db.size(); ++i)
        if (!(p_grid_db[i] > p_grid_db[i - 1]))
            throw InvalidInputError("ExperimentConfig: power grid must be strictly increasing");
    if (threads < 1) throw InvalidInputError("ExperimentConfig: threads must be at least 1");
}

double wilson_halfwidth(long successes, long n) {
    if (n < 1) throw InvalidInputError("wilson_halfwidth: need at least one trial");
    if (successes < 0 || successes > n)
        throw InvalidInputError("wilson_halfwidth: successes must lie in [0, n]");
    constexpr double z = 1.959963984540054;  // 97.5% normal quantile
    const double nn = static_cast<double>(n);
    const double p_hat = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    return z * std::sqrt(p_hat * (1.0 - p_hat) / nn + z2 / (4.0 * nn * nn)) / (1.0 + z2 / nn);
}

ChannelPair draw_channel(ModelKind model, std::uint64_t seed, std::uint64_t trial) {
    const auto u = [&](std::uint64_t draw) { return uniform01(seed, trial, draw); };
    switch (model) {
        case ModelKind::Simo: {
            Matrix h1(2, 1), h2(2, 1);
            h1 << u(0), u(1);
            h2 << u(2), u(3);
            return ChannelPair(h1, h2);
        }
        case ModelKind::Diag2x2: {
            Matrix h1 = Matrix::Zero(2, 2), h2 = Matrix::Zero(2, 2);
            h1(0, 0) = u(0);
            h1(1, 1) = u(1);
            h2(0, 0) = u(2);
            h2(1, 1) = u(3);
            return ChannelPair(h1, h2);
        }
        case ModelKind::Generic2x2: {
            Matrix h1(2, 2), h2(2, 2);
            h1 << u(0), u(1), u(2), u(3);
            h2 << u(4), u(5), u(6), u(7);
            return ChannelPair(h1, h2);
        }
    }
    throw InvalidInputError("draw_channel: unhandled model");
}

std::vector<CurvePoint> run_montecarlo(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::size_t np = cfg.p_grid_db.size();
    std::vector<double> p_linear(np);
    for (std::size_t i = 0; i < np; ++i) p_linear[i] = std::pow(10.0, cfg.p_grid_db[i] / 10.0);
    const bool diagonal = cfg.model == ModelKind::Diag2x2;

    // For the diagonal model each user keeps its own optimal power split.
    // The joint diagonal update concentrates each user on one antenna at
    // high power, which empties the achievable set; the per-user split is
    // the regime the diagonal conditions describe.
    const auto cell_achievable = [&](const ChannelPair& ch, double p) {
        if (!diagonal) return check_sum_capacity(ch, p, false).achievable;
        const Matrix eye = Matrix::Identity(ch.t, ch.t);
        const Matrix k1 = single_user_waterfill_diag(ch.H1, eye, p).K;
        const Matrix k2 = single_user_waterfill_diag(ch.H2, eye, p).K;
        const CovariancePair cov = CovariancePair::from_covariances(k1, k2, p);
        return check_sum_rate_at(ch, cov).achievable;
    };

    const auto run_range = [&](long t0, long t1, std::vector<long>& ach, std::vector<long>& fail) {
        for (long trial = t0; trial < t1; ++trial) {
            const ChannelPair ch =
                draw_channel(cfg.model, cfg.seed, static_cast<std::uint64_t>(trial));
            for (std::size_t i = 0; i < np; ++i) {
                try {
                    if (cell_achievable(ch, p_linear[i])) ++ach[i];
                } catch (const Error&) {
                    ++fail[i];
                }
            }
        }
    };

    std::vector<long> ach(np, 0), fail(np, 0);
    const int workers = static_cast<int>(
        std::min<long>(cfg.threads, std::max<long>(1, cfg.trials)));
    if (workers == 1) {
        run_range(0, cfg.trials, ach, fail);
    } else {
        // Contiguous trial blocks per worker; integer tallies are summed in
        // block order so the result is identical for any worker count.
        std::vector<std::vector<long>> ach_w(workers, std::vector<long>(np, 0));
        std::vector<std::vector<long>> fail_w(workers, std::vector<long>(np, 0));
        std::vector<std::thread> pool;
        const long chunk = (cfg.trials + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const long t0 = w * chunk;
            const long t1 = std::min<long>(cfg.trials, t0 + chunk);
            if (t0 >= t1) break;
            pool.emplace_back(
                [&, w, t0, t1] { run_range(t0, t1, ach_w[w], fail_w[w]); });
        }
        for (auto& th : pool) th.join();
        for (int w = 0; w < workers; ++w)
            for (std::size_t i = 0; i < np; ++i) {
                ach[i] += ach_w[w][i];
                fail[i] += fail_w[w][i];
            }
    }

    std::vector<CurvePoint> out(np);
    for (std::size_t i = 0; i < np; ++i) {
        CurvePoint& pt = out[i];
        pt.p_db = cfg.p_grid_db[i];
        pt.p_linear = p_linear[i];
        pt.trials = cfg.trials;
        pt.achievable_count = ach[i];
        pt.failure_count = fail[i];
        pt.R_A = static_cast<double>(ach[i]) / static_cast<double>(cfg.trials);
        pt.wilson_halfwidth = wilson_halfwidth(ach[i], cfg.trials);
    }
    return out;
}

std::vector<SweepRow> run_sweep(const ChannelPair& ch, const std::vector<double>& p_values,
                                const std::optional<GammaGridSpec>& gamma_grid) {
    if (p_values.empty()) throw InvalidInputError("run_sweep: empty power list");
    if (gamma_grid) {
        if (!(gamma_grid->lo > 0.0) || !(gamma_grid->hi > gamma_grid->lo) || gamma_grid->n < 2)
            throw InvalidInputError("run_sweep: gamma grid needs 0 < lo < hi and n >= 2");
    }

    std::vector<SweepRow> rows;
    for (double p : p_values) {
        const SumCapVerdict verdict = check_sum_capacity(ch, p);
        const CovariancePair cov =
            CovariancePair::from_covariances(verdict.waterfill.K1, verdict.waterfill.K2, p);

        double lo, hi;
        int n;
        if (gamma_grid) {
            lo = gamma_grid->lo;
            hi = gamma_grid->hi;
            n = gamma_grid->n;
        } else {
            n = 101;
            if (!verdict.gamma_intervals.empty()) {
                lo = verdict.gamma_intervals.front().first * 0.9;
                hi = verdict.gamma_intervals.back().second * 1.1;
            } else {
                // No feasible interval: bracket the minimizer of g instead.
                double argmin = 1.0, gmin = verdict.g.eval(1.0);
                for (double c : positive_roots(verdict.g.derivative().trimmed())) {
                    const double val = verdict.g.eval(c);
                    if (val < gmin) {
                        gmin = val;
                        argmin = c;
                    }
                }
                lo = 0.5 * argmin;
                hi = 2.0 * argmin;
            }
            if (!(lo > 0.0)) lo = 1e-3;
        }

        const double log_lo = std::log(lo);
        const double log_hi = std::log(hi);
        for (int i = 0; i < n; ++i) {
            const double gamma =
                std::exp(log_lo + (log_hi - log_lo) * i / (n - 1));
            const CodingChoice cc({1, 1}, {1, 0}, {gamma, 1.0});
            const RatePairResult rp = achievable_pair(ch, cov, cc);
            SweepRow row;
            row.p = p;
            row.gamma = gamma;
            row.g = verdict.g.eval(gamma);
            row.r1_first = rp.r1_first;
            row.r2_first = rp.r2_first;
            row.r1_second = rp.r1_second;
            row.r2_second = rp.r2_second;
            row.sum_rate = rp.sum();
            row.c_sum = verdict.waterfill.c_sum;
            row.gap = row.c_sum - row.sum_rate;
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace cfma
