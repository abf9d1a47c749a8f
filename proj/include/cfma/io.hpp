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
#include "cfma/montecarlo.hpp"

namespace cfma {

/// Channel description as carried by the JSON interchange format:
/// {"t":int,"r":int,"H1":[[...]],"H2":[[...]],"P":float,
///  "K1":[[...]] (optional),"K2":[[...]] (optional)}, row-major matrices.
struct ChannelSpec {
    ChannelPair ch;
    double P = 0.0;
    std::optional<Matrix> K1;
    std::optional<Matrix> K2;

    ChannelSpec(ChannelPair ch_in, double power) : ch(std::move(ch_in)), P(power) {}

    bool has_covariances() const { return K1.has_value() && K2.has_value(); }
    /// The provided covariances, validated and factored.
    CovariancePair covariances() const;
};

ChannelSpec parse_channel_json(const std::string& text);
ChannelSpec load_channel_json(const std::string& path);
std::string channel_to_json(const ChannelSpec& spec);
void save_channel_json(const ChannelSpec& spec, const std::string& path);

/// Shortest decimal form with up to 12 significant digits (printf %.12g).
std::string format_sig12(double x);

/// "start:step:stop" inclusive arithmetic grid, e.g. "0:5:40".
std::vector<double> parse_db_grid(const std::string& text);

/// "lo:hi:n" log-spaced gamma grid bounds and point count.
GammaGridSpec parse_gamma_grid(const std::string& text);

/// CSV with header model,p_db,trials,achievable_count,R_A,wilson_halfwidth,
/// seed; 12 significant digits, LF line endings.
void write_montecarlo_csv(const std::vector<CurvePoint>& points, ModelKind model,
                          std::uint64_t seed, const std::string& path);

/// CSV with header p,gamma,g,r1_first,r2_first,r1_second,r2_second,
/// sum_rate,c_sum,gap; 12 significant digits, LF line endings.
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

}  // namespace cfma
