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
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cfma/io.hpp"
#include "cli.hpp"

using namespace cfma;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

ChannelSpec awkward_spec() {
    // Entries chosen to stress the shortest-round-trip printer.
    Matrix h1(2, 2), h2(2, 2);
    h1 << 1.0 / 3.0, std::sqrt(2.0), -0.1, 7.25;
    h2 << 0.3, 1e-7, 2e8, -1.0 / 7.0;
    ChannelSpec spec(ChannelPair(h1, h2), 12.5);
    Matrix k1(2, 2), k2(2, 2);
    k1 << 5.0, 0.5, 0.5, 1.0 / 7.0;
    k2 << 2.0, -0.25, -0.25, 3.0;
    spec.K1 = k1;
    spec.K2 = k2;
    return spec;
}

}  // namespace

TEST_CASE("channel json round-trips bit for bit") {
    const ChannelSpec spec = awkward_spec();
    const std::string text = channel_to_json(spec);
    const ChannelSpec back = parse_channel_json(text);

    CHECK(back.ch.t == 2);
    CHECK(back.ch.r == 2);
    CHECK(back.P == spec.P);
    CHECK((back.ch.H1 - spec.ch.H1).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.ch.H2 - spec.ch.H2).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(back.has_covariances());
    CHECK((*back.K1 - *spec.K1).cwiseAbs().maxCoeff() == 0.0);
    CHECK((*back.K2 - *spec.K2).cwiseAbs().maxCoeff() == 0.0);

    // A second serialization is byte-identical.
    CHECK(channel_to_json(back) == text);

    // Covariances are optional as a pair.
    ChannelSpec bare(spec.ch, spec.P);
    const ChannelSpec bare_back = parse_channel_json(channel_to_json(bare));
    CHECK_FALSE(bare_back.has_covariances());
    CHECK_THROWS_AS(bare_back.covariances(), InvalidInputError);
}

TEST_CASE("channel json rejects malformed input") {
    const char* good = R"({"t":1,"r":2,"H1":[[1.0],[0.5]],"H2":[[2.0],[1.0]],"P":4.0})";
    CHECK_NOTHROW(parse_channel_json(good));

    // Not JSON at all / wrong top level.
    CHECK_THROWS_AS(parse_channel_json("not json"), InvalidInputError);
    CHECK_THROWS_AS(parse_channel_json("[1,2,3]"), InvalidInputError);

    // Missing and wrongly typed fields.
    CHECK_THROWS_AS(parse_channel_json(R"({"r":2,"H1":[[1],[1]],"H2":[[1],[1]],"P":1})"),
                    InvalidInputError);
    CHECK_THROWS_AS(
        parse_channel_json(R"({"t":1.5,"r":2,"H1":[[1],[1]],"H2":[[1],[1]],"P":1})"),
        InvalidInputError);
    CHECK_THROWS_AS(parse_channel_json(R"({"t":0,"r":2,"H1":[],"H2":[],"P":1})"),
                    InvalidInputError);

    // Shape mismatches: H1 must be r x t.
    CHECK_THROWS_AS(parse_channel_json(R"({"t":1,"r":2,"H1":[[1]],"H2":[[1],[1]],"P":1})"),
                    InvalidInputError);
    CHECK_THROWS_AS(
        parse_channel_json(R"({"t":1,"r":2,"H1":[[1,2],[1,2]],"H2":[[1],[1]],"P":1})"),
        InvalidInputError);

    // Entries must be finite numbers.
    CHECK_THROWS_AS(
        parse_channel_json(R"({"t":1,"r":2,"H1":[["x"],[1]],"H2":[[1],[1]],"P":1})"),
        InvalidInputError);

    // Power must be positive.
    CHECK_THROWS_AS(parse_channel_json(R"({"t":1,"r":2,"H1":[[1],[1]],"H2":[[1],[1]],"P":0})"),
                    InvalidInputError);
    CHECK_THROWS_AS(
        parse_channel_json(R"({"t":1,"r":2,"H1":[[1],[1]],"H2":[[1],[1]],"P":-2})"),
        InvalidInputError);

    // K1 without K2, and covariances that break the budget.
    CHECK_THROWS_AS(
        parse_channel_json(
            R"({"t":1,"r":2,"H1":[[1],[1]],"H2":[[1],[1]],"P":1,"K1":[[1]]})"),
        InvalidInputError);
    CHECK_THROWS_AS(
        parse_channel_json(
            R"({"t":1,"r":2,"H1":[[1],[1]],"H2":[[1],[1]],"P":1,"K1":[[5]],"K2":[[1]]})"),
        InvalidInputError);
}

TEST_CASE("channel files load and save through the filesystem") {
    const std::string path = "/tmp/cfma_test_channel.json";
    const ChannelSpec spec = awkward_spec();
    save_channel_json(spec, path);

    const ChannelSpec back = load_channel_json(path);
    CHECK((back.ch.H1 - spec.ch.H1).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.ch.H2 - spec.ch.H2).cwiseAbs().maxCoeff() == 0.0);
    CHECK(back.P == spec.P);

    CHECK_THROWS_AS(load_channel_json("/tmp/cfma_no_such_file.json"), InvalidInputError);
    std::remove(path.c_str());
}

TEST_CASE("twelve significant digit formatting") {
    CHECK(format_sig12(0.88) == "0.88");
    CHECK(format_sig12(1.0 / 3.0) == "0.333333333333");
    CHECK(format_sig12(5.0) == "5");
    CHECK(format_sig12(0.0) == "0");
    CHECK(format_sig12(-2.5e-7) == "-2.5e-07");
    CHECK(format_sig12(123456789012345.0) == "1.23456789012e+14");
}

TEST_CASE("power grids parse inclusively") {
    const std::vector<double> grid = parse_db_grid("0:5:40");
    REQUIRE(grid.size() == 9);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(grid[i] == 5.0 * i);

    const std::vector<double> tail = parse_db_grid("30:5:40");
    REQUIRE(tail.size() == 3);
    CHECK(tail[0] == 30.0);
    CHECK(tail[2] == 40.0);

    const std::vector<double> single = parse_db_grid("5:5:5");
    REQUIRE(single.size() == 1);
    CHECK(single[0] == 5.0);

    CHECK_THROWS_AS(parse_db_grid("garbage"), InvalidInputError);
    CHECK_THROWS_AS(parse_db_grid("0:5"), InvalidInputError);
    CHECK_THROWS_AS(parse_db_grid("0:-5:40"), InvalidInputError);
    CHECK_THROWS_AS(parse_db_grid("40:5:0"), InvalidInputError);
    CHECK_THROWS_AS(parse_db_grid("0:5:40x"), InvalidInputError);
}

TEST_CASE("gamma grids parse with bounds checks") {
    const GammaGridSpec g = parse_gamma_grid("0.5:2:101");
    CHECK(g.lo == 0.5);
    CHECK(g.hi == 2.0);
    CHECK(g.n == 101);

    CHECK_THROWS_AS(parse_gamma_grid("0:2:101"), InvalidInputError);
    CHECK_THROWS_AS(parse_gamma_grid("2:1:5"), InvalidInputError);
    CHECK_THROWS_AS(parse_gamma_grid("1:2:1"), InvalidInputError);
    CHECK_THROWS_AS(parse_gamma_grid("1:2"), InvalidInputError);
    CHECK_THROWS_AS(parse_gamma_grid("x"), InvalidInputError);
}

TEST_CASE("curve csv format is stable") {
    const std::string path = "/tmp/cfma_test_curve.csv";

    // Header-only file for an empty curve.
    write_montecarlo_csv({}, ModelKind::Simo, 7, path);
    CHECK(slurp(path) == "model,p_db,trials,achievable_count,R_A,wilson_halfwidth,seed\n");

    CurvePoint pt;
    pt.p_db = 25.0;
    pt.p_linear = std::pow(10.0, 2.5);
    pt.trials = 10000;
    pt.achievable_count = 8794;
    pt.R_A = 0.8794;
    pt.wilson_halfwidth = wilson_halfwidth(8794, 10000);
    write_montecarlo_csv({pt}, ModelKind::Diag2x2, 42, path);

    const std::string text = slurp(path);
    CHECK(text.find('\r') == std::string::npos);
    CHECK(text.back() == '\n');

    const std::vector<std::string> rows = lines_of(text);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == "model,p_db,trials,achievable_count,R_A,wilson_halfwidth,seed");
    const std::vector<std::string> fields = split_csv(rows[1]);
    REQUIRE(fields.size() == 7);
    CHECK(fields[0] == "diag2x2");
    CHECK(fields[1] == "25");
    CHECK(fields[2] == "10000");
    CHECK(fields[3] == "8794");
    CHECK(fields[4] == "0.8794");
    CHECK(fields[5] == format_sig12(pt.wilson_halfwidth));
    CHECK(fields[6] == "42");
    std::remove(path.c_str());
}

TEST_CASE("sweep csv format is stable") {
    const std::string path = "/tmp/cfma_test_sweep.csv";
    SweepRow row;
    row.p = 2.0;
    row.gamma = 1.0;
    row.g = -0.25;
    row.r1_first = 0.5;
    row.r2_first = 0.25;
    row.r1_second = 0.75;
    row.r2_second = 0.5;
    row.sum_rate = 1.0;
    row.c_sum = 1.25;
    row.gap = 0.25;
    write_sweep_csv({row}, path);

    const std::string text = slurp(path);
    CHECK(text.find('\r') == std::string::npos);
    const std::vector<std::string> rows = lines_of(text);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == "p,gamma,g,r1_first,r2_first,r1_second,r2_second,sum_rate,c_sum,gap");
    CHECK(rows[1] == "2,1,-0.25,0.5,0.25,0.75,0.5,1,1.25,0.25");
    std::remove(path.c_str());
}

TEST_CASE("command line end to end") {
    // A scalar channel file shared by the subcommand probes.
    const std::string chan_path = "/tmp/cfma_test_cli_channel.json";
    {
        Matrix h(1, 1);
        h << 1.0;
        ChannelSpec spec(ChannelPair(h, h), 2.0);
        save_channel_json(spec, chan_path);
    }

    SUBCASE("rate prints the pair and is selective about inputs") {
        std::ostringstream out, err;
        const int rc = cli::run({"rate", "--channel", chan_path}, out, err);
        CHECK(rc == 0);
        const std::string text = out.str();
        CHECK(text.find("R1 = ") != std::string::npos);
        CHECK(text.find("R2 = ") != std::string::npos);
        CHECK(text.find("valid = ") != std::string::npos);

        std::ostringstream out2, err2;
        CHECK(cli::run({"rate", "--channel", chan_path, "--a", "nonsense"}, out2, err2) == 1);
        CHECK(err2.str().find("error") != std::string::npos);
    }

    SUBCASE("check reports the verdict fields") {
        std::ostringstream out, err;
        const int rc = cli::run({"check", "--channel", chan_path}, out, err);
        CHECK(rc == 0);
        const std::string text = out.str();
        CHECK(text.find("achievable = true") != std::string::npos);
        CHECK(text.find("c_sum = ") != std::string::npos);
        CHECK(text.find("gamma_interval = [") != std::string::npos);

        // Power override: below threshold the verdict flips.
        std::ostringstream out2, err2;
        CHECK(cli::run({"check", "--channel", chan_path, "--power", "1"}, out2, err2) == 0);
        CHECK(out2.str().find("achievable = false") != std::string::npos);
    }

    SUBCASE("montecarlo writes the curve csv") {
        const std::string csv_path = "/tmp/cfma_test_cli_curve.csv";
        std::ostringstream out, err;
        const int rc = cli::run({"montecarlo", "--model", "simo", "--trials", "10", "--seed",
                                 "1", "--p-grid-db", "10:10:20", "--out", csv_path},
                                out, err);
        CHECK(rc == 0);
        const std::vector<std::string> rows = lines_of(slurp(csv_path));
        REQUIRE(rows.size() == 3);
        CHECK(split_csv(rows[1])[0] == "simo");
        CHECK(split_csv(rows[1])[2] == "10");
        std::remove(csv_path.c_str());
    }

    SUBCASE("sweep writes the diagnostic csv") {
        const std::string csv_path = "/tmp/cfma_test_cli_sweep.csv";
        std::ostringstream out, err;
        const int rc = cli::run({"sweep", "--channel", chan_path, "--gamma-grid", "0.8:1.3:5",
                                 "--out", csv_path},
                                out, err);
        CHECK(rc == 0);
        const std::vector<std::string> rows = lines_of(slurp(csv_path));
        REQUIRE(rows.size() == 6);
        CHECK(rows[0] ==
              "p,gamma,g,r1_first,r2_first,r1_second,r2_second,sum_rate,c_sum,gap");
        std::remove(csv_path.c_str());
    }

    SUBCASE("bad invocations exit with the input-error code") {
        std::ostringstream out, err;
        CHECK(cli::run({"rate", "--no-such-flag"}, out, err) == 1);
        CHECK(cli::run({"frobnicate"}, out, err) == 1);
        CHECK(cli::run({"montecarlo", "--model", "simo"}, out, err) == 1);  // missing --out
        CHECK(cli::run({"check", "--channel", "/tmp/cfma_absent.json"}, out, err) == 1);
    }

    SUBCASE("help exits cleanly") {
        std::ostringstream out, err;
        CHECK(cli::run({"--help"}, out, err) == 0);
        CHECK(out.str().find("rate") != std::string::npos);
    }

    std::remove(chan_path.c_str());
}
