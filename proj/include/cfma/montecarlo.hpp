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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cfma/core.hpp"

namespace cfma {

/// SplitMix64-style avalanche of a 64-bit word.
std::uint64_t mix64(std::uint64_t z);

/// Counter-based uniform draw on [0, 1): a pure function of
/// (seed, trial, draw), so any worker can produce any draw independently
/// and results never depend on scheduling.
double uniform01(std::uint64_t seed, std::uint64_t trial, std::uint64_t draw);

enum class ModelKind { Simo, Diag2x2, Generic2x2 };

ModelKind model_from_string(const std::string& name);
std::string model_name(ModelKind model);

struct ExperimentConfig {
    ModelKind model = ModelKind::Simo;
    long trials = 10000;
    std::vector<double> p_grid_db = {0, 5, 10, 15, 20, 25, 30, 35, 40};
    std::uint64_t seed = 0;
    std::string output_path;
    int threads = 1;

    void validate() const;
};

struct CurvePoint {
    double p_db = 0.0;
    double p_linear = 0.0;
    long trials = 0;
    long achievable_count = 0;
    long failure_count = 0;
    double R_A = 0.0;
    double wilson_halfwidth = 0.0;
};

/// Half-width of the 95% Wilson score interval for k successes out of n.
double wilson_halfwidth(long successes, long n);

/// Channel realization for a given trial: entries iid Uniform[0,1].
/// simo: 2x1 vectors; diag2x2: diagonal 2x2; generic2x2: full 2x2.
ChannelPair draw_channel(ModelKind model, std::uint64_t seed, std::uint64_t trial);

/// One sum-capacity achievability curve over the power grid. Channels are
/// drawn once per trial and reused across the whole grid. The simo and
/// generic models water-fill jointly; the diagonal model gives each user
/// its own optimal diagonal split and asks for the sum rate at exactly
/// those inputs (the joint diagonal update degenerates to single-antenna
/// allocations at high power and starves the test). Numerical errors
/// inside a (trial, power) cell are tallied as failures, not propagated.
std::vector<CurvePoint> run_montecarlo(const ExperimentConfig& cfg);

/// One diagnostic row of a scaling-ratio sweep at fixed channel and power.
struct SweepRow {
    double p = 0.0;
    double gamma = 0.0;
    double g = 0.0;
    double r1_first = 0.0;
    double r2_first = 0.0;
    double r1_second = 0.0;
    double r2_second = 0.0;
    double sum_rate = 0.0;
    double c_sum = 0.0;
    double gap = 0.0;
};

struct GammaGridSpec {
    double lo = 0.0;
    double hi = 0.0;
    int n = 0;
};

/// Evaluates g and the a=(1,1), b=(1,0) rate pair at beta=(gamma, 1) over
/// a gamma grid for each power, always under the water-filled covariances.
/// Without an explicit grid, 101 log-spaced points spanning the feasible
/// interval padded by 10% (or bracketing the minimizer of g when there is
/// no feasible interval).
std::vector<SweepRow> run_sweep(const ChannelPair& ch, const std::vector<double>& p_values,
                                const std::optional<GammaGridSpec>& gamma_grid = std::nullopt);

}  // namespace cfma
