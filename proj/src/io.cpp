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

#include "cfma/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cfma {

namespace {

using nlohmann::json;

Matrix matrix_from_json(const json& j, int rows, int cols, const std::string& name) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows)
        throw InvalidInputError("channel json: " + name + " must have " + std::to_string(rows) +
                                " rows");
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            throw InvalidInputError("channel json: " + name + " row " + std::to_string(i) +
                                    " must have " + std::to_string(cols) + " entries");
        for (int k = 0; k < cols; ++k) {
            const json& v = row[static_cast<std::size_t>(k)];
            if (!v.is_number())
                throw InvalidInputError("channel json: " + name + " entries must be numbers");
            m(i, k) = v.get<double>();
            if (!std::isfinite(m(i, k)))
                throw InvalidInputError("channel json: " + name + " entries must be finite");
        }
    }
    return m;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

CovariancePair ChannelSpec::covariances() const {
    if (!has_covariances())
        throw InvalidInputError("channel spec carries no covariances");
    return CovariancePair::from_covariances(*K1, *K2, P);
}

ChannelSpec parse_channel_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidInputError(std::string("channel json: parse error: ") + e.what());
    }
    if (!j.is_object()) throw InvalidInputError("channel json: top level must be an object");
    for (const char* key : {"t", "r", "H1", "H2", "P"})
        if (!j.contains(key))
            throw InvalidInputError(std::string("channel json: missing field '") + key + "'");

    if (!j["t"].is_number_integer() || !j["r"].is_number_integer())
        throw InvalidInputError("channel json: t and r must be integers");
    const int t = j["t"].get<int>();
    const int r = j["r"].get<int>();
    if (t < 1 || r < 1) throw InvalidInputError("channel json: t and r must be positive");

    Matrix h1 = matrix_from_json(j["H1"], r, t, "H1");
    Matrix h2 = matrix_from_json(j["H2"], r, t, "H2");
    if (!j["P"].is_number()) throw InvalidInputError("channel json: P must be a number");
    const double power = j["P"].get<double>();
    if (!(power > 0.0)) throw InvalidInputError("channel json: P must be positive");

    ChannelSpec spec(ChannelPair(std::move(h1), std::move(h2)), power);
    if (j.contains("K1") != j.contains("K2"))
        throw InvalidInputError("channel json: K1 and K2 must be given together");
    if (j.contains("K1")) {
        spec.K1 = matrix_from_json(j["K1"], t, t, "K1");
        spec.K2 = matrix_from_json(j["K2"], t, t, "K2");
        spec.covariances();  // validate PSD / trace here, with path-free message
    }
    return spec;
}

ChannelSpec load_channel_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInputError("cannot open channel file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_channel_json(buf.str());
    } catch (const Error& e) {
        throw InvalidInputError(std::string(e.what()) + " (file: " + path + ")");
    }
}

std::string channel_to_json(const ChannelSpec& spec) {
    json j;
    j["t"] = spec.ch.t;
    j["r"] = spec.ch.r;
    j["H1"] = matrix_to_json(spec.ch.H1);
    j["H2"] = matrix_to_json(spec.ch.H2);
    j["P"] = spec.P;
    if (spec.K1) j["K1"] = matrix_to_json(*spec.K1);
    if (spec.K2) j["K2"] = matrix_to_json(*spec.K2);
    return j.dump(2) + "\n";
}

void save_channel_json(const ChannelSpec& spec, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInputError("cannot write channel file: " + path);
    out << channel_to_json(spec);
    if (!out) throw Error("write failed: " + path);
}

std::string format_sig12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::vector<double> parse_db_grid(const std::string& text) {
    double start = 0.0, step = 0.0, stop = 0.0;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &start, &step, &stop, &extra) != 3)
        throw InvalidInputError("grid must look like start:step:stop, got '" + text + "'");
    if (!(step > 0.0)) throw InvalidInputError("grid step must be positive");
    if (stop < start) throw InvalidInputError("grid stop must not precede start");
    std::vector<double> grid;
    // Half-step slack keeps the endpoint inclusive under rounding.
    for (double v = start; v <= stop + 0.5 * step; v += step) grid.push_back(v);
    while (!grid.empty() && grid.back() > stop + 1e-9) grid.pop_back();
    return grid;
}

GammaGridSpec parse_gamma_grid(const std::string& text) {
    double lo = 0.0, hi = 0.0;
    int n = 0;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &lo, &hi, &n, &extra) != 3)
        throw InvalidInputError("gamma grid must look like lo:hi:n, got '" + text + "'");
    GammaGridSpec spec{lo, hi, n};
    if (!(spec.lo > 0.0) || !(spec.hi > spec.lo) || spec.n < 2)
        throw InvalidInputError("gamma grid needs 0 < lo < hi and n >= 2");
    return spec;
}

void write_montecarlo_csv(const std::vector<CurvePoint>& points, ModelKind model,
                          std::uint64_t seed, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInputError("cannot write csv: " + path);
    out << "model,p_db,trials,achievable_count,R_A,wilson_halfwidth,seed\n";
    const std::string name = model_name(model);
    for (const CurvePoint& pt : points) {
        out << name << ',' << format_sig12(pt.p_db) << ',' << pt.trials << ','
            << pt.achievable_count << ',' << format_sig12(pt.R_A) << ','
            << format_sig12(pt.wilson_halfwidth) << ',' << seed << '\n';
    }
    if (!out) throw Error("write failed: " + path);
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInputError("cannot write csv: " + path);
    out << "p,gamma,g,r1_first,r2_first,r1_second,r2_second,sum_rate,c_sum,gap\n";
    for (const SweepRow& r : rows) {
        out << format_sig12(r.p) << ',' << format_sig12(r.gamma) << ',' << format_sig12(r.g)
            << ',' << format_sig12(r.r1_first) << ',' << format_sig12(r.r2_first) << ','
            << format_sig12(r.r1_second) << ',' << format_sig12(r.r2_second) << ','
            << format_sig12(r.sum_rate) << ',' << format_sig12(r.c_sum) << ','
            << format_sig12(r.gap) << '\n';
    }
    if (!out) throw Error("write failed: " + path);
}

}  // namespace cfma
