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

#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cfma/io.hpp"
#include "cfma/montecarlo.hpp"
#include "cfma/rates.hpp"
#include "cfma/sumcap.hpp"
#include "cfma/waterfill.hpp"

namespace cfma::cli {

namespace {

using nlohmann::json;

Eigen::Vector2i parse_int_pair(const std::string& text, const char* flag) {
    int x = 0, y = 0;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%d,%d%c", &x, &y, &extra) != 2)
        throw InvalidInputError(std::string(flag) + " must look like i,j, got '" + text + "'");
    return {x, y};
}

Eigen::Vector2d parse_double_pair(const std::string& text, const char* flag) {
    double x = 0.0, y = 0.0;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%lf,%lf%c", &x, &y, &extra) != 2)
        throw InvalidInputError(std::string(flag) + " must look like x,y, got '" + text + "'");
    return {x, y};
}

json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInputError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::exception& e) {
        throw InvalidInputError("config parse error in " + path + ": " + e.what());
    }
}

const json& require_field(const json& j, const char* key) {
    if (!j.contains(key))
        throw InvalidInputError(std::string("config: missing field '") + key + "'");
    return j[key];
}

ChannelSpec channel_from_json_value(const json& v) {
    if (v.is_string()) return load_channel_json(v.get<std::string>());
    if (v.is_object()) return parse_channel_json(v.dump());
    throw InvalidInputError("config: 'channel' must be a path or an inline channel object");
}

Eigen::Vector2i int_pair_from_json(const json& v, const char* key) {
    if (v.is_string()) return parse_int_pair(v.get<std::string>(), key);
    if (v.is_array() && v.size() == 2)
        return {v[0].get<int>(), v[1].get<int>()};
    throw InvalidInputError(std::string("config: '") + key + "' must be [i,j] or \"i,j\"");
}

Eigen::Vector2d double_pair_from_json(const json& v, const char* key) {
    if (v.is_string()) return parse_double_pair(v.get<std::string>(), key);
    if (v.is_array() && v.size() == 2)
        return {v[0].get<double>(), v[1].get<double>()};
    throw InvalidInputError(std::string("config: '") + key + "' must be [x,y] or \"x,y\"");
}

std::vector<double> grid_from_json(const json& v) {
    if (v.is_string()) return parse_db_grid(v.get<std::string>());
    if (v.is_array()) {
        std::vector<double> grid;
        for (const auto& e : v) grid.push_back(e.get<double>());
        return grid;
    }
    throw InvalidInputError("config: 'p_grid_db' must be \"start:step:stop\" or an array");
}

GammaGridSpec gamma_grid_from_json(const json& v) {
    if (v.is_string()) return parse_gamma_grid(v.get<std::string>());
    if (v.is_object())
        return {require_field(v, "lo").get<double>(), require_field(v, "hi").get<double>(),
                require_field(v, "n").get<int>()};
    throw InvalidInputError("config: 'gamma_grid' must be \"lo:hi:n\" or {lo,hi,n}");
}

const char* bool_name(bool b) { return b ? "true" : "false"; }

CovariancePair resolve_covariances(const ChannelSpec& spec, std::ostream& err) {
    if (spec.has_covariances()) return spec.covariances();
    const SumCapacityResult wf = iterative_waterfill(spec.ch, spec.P);
    if (!wf.converged) err << "warning: water-filling did not converge\n";
    return CovariancePair::from_covariances(wf.K1, wf.K2, spec.P);
}

struct RateArgs {
    std::string channel_path;
    std::string a_text = "1,1";
    std::string b_text = "1,0";
    std::string beta_text = "1.0,1.0";
    std::string config_path;
};

int do_rate(const RateArgs& args, std::ostream& out, std::ostream& err) {
    std::optional<ChannelSpec> spec;
    Eigen::Vector2i a = parse_int_pair(args.a_text, "--a");
    Eigen::Vector2i b = parse_int_pair(args.b_text, "--b");
    Eigen::Vector2d beta = parse_double_pair(args.beta_text, "--beta");

    if (!args.config_path.empty()) {
        const json cfg = load_json_file(args.config_path);
        spec = channel_from_json_value(require_field(cfg, "channel"));
        if (cfg.contains("a")) a = int_pair_from_json(cfg["a"], "a");
        if (cfg.contains("b")) b = int_pair_from_json(cfg["b"], "b");
        if (cfg.contains("beta")) beta = double_pair_from_json(cfg["beta"], "beta");
    } else {
        if (args.channel_path.empty())
            throw InvalidInputError("rate: --channel (or --config) is required");
        spec = load_channel_json(args.channel_path);
    }

    const CodingChoice cc(a, b, beta);
    const CovariancePair cov = resolve_covariances(*spec, err);
    const RatePairResult rp = achievable_pair(spec->ch, cov, cc);

    out << "R1 = " << format_sig12(rp.R1) << '\n';
    out << "R2 = " << format_sig12(rp.R2) << '\n';
    out << "sum = " << format_sig12(rp.sum()) << '\n';
    out << "valid = " << bool_name(rp.valid) << '\n';
    out << "r1_first = " << format_sig12(rp.r1_first) << '\n';
    out << "r2_first = " << format_sig12(rp.r2_first) << '\n';
    out << "r1_second = " << format_sig12(rp.r1_second) << '\n';
    out << "r2_second = " << format_sig12(rp.r2_second) << '\n';
    return 0;
}

struct CheckArgs {
    std::string channel_path;
    double power = 0.0;
    bool power_given = false;
    bool diagonal = false;
    std::string config_path;
};

int do_check(const CheckArgs& args, std::ostream& out, std::ostream& err) {
    std::optional<ChannelSpec> spec;
    double power = args.power;
    bool power_given = args.power_given;
    bool diagonal = args.diagonal;

    if (!args.config_path.empty()) {
        const json cfg = load_json_file(args.config_path);
        spec = channel_from_json_value(require_field(cfg, "channel"));
        if (cfg.contains("power")) {
            power = cfg["power"].get<double>();
            power_given = true;
        }
        if (cfg.contains("diagonal")) diagonal = cfg["diagonal"].get<bool>();
    } else {
        if (args.channel_path.empty())
            throw InvalidInputError("check: --channel (or --config) is required");
        spec = load_channel_json(args.channel_path);
    }
    if (!power_given) power = spec->P;
    if (spec->has_covariances())
        err << "warning: provided covariances are ignored; the check water-fills\n";

    const SumCapVerdict v = check_sum_capacity(spec->ch, power, diagonal);
    if (!v.waterfill.converged) err << "warning: water-filling did not converge\n";

    out << "achievable = " << bool_name(v.achievable) << '\n';
    out << "boundary = " << bool_name(v.boundary) << '\n';
    out << "fragile = " << bool_name(v.fragile) << '\n';
    out << "positive_root_count = " << v.positive_root_count << '\n';
    out << "c_sum = " << format_sig12(v.waterfill.c_sum) << '\n';
    out << "c_det = " << format_sig12(v.waterfill.c_det) << '\n';
    if (v.achievable) {
        out << "gamma_witness = " << format_sig12(v.gamma_witness) << '\n';
        for (const auto& iv : v.gamma_intervals)
            out << "gamma_interval = [" << format_sig12(iv.first) << ", "
                << format_sig12(iv.second) << "]\n";
        out << "witness_sum_rate = " << format_sig12(v.witness_sum_rate) << '\n';
    }
    return 0;
}

struct MonteCarloArgs {
    std::string model_text;
    long trials = 10000;
    std::uint64_t seed = 0;
    std::string grid_text = "0:5:40";
    std::string out_path;
    int threads = 1;
    std::string config_path;
};

int do_montecarlo(const MonteCarloArgs& args, std::ostream& out, std::ostream& err) {
    ExperimentConfig cfg;
    cfg.trials = args.trials;
    cfg.seed = args.seed;
    cfg.threads = args.threads;
    cfg.output_path = args.out_path;
    std::string model_text = args.model_text;
    std::string grid_text = args.grid_text;

    if (!args.config_path.empty()) {
        const json j = load_json_file(args.config_path);
        model_text = require_field(j, "model").get<std::string>();
        if (j.contains("trials")) cfg.trials = j["trials"].get<long>();
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("p_grid_db")) cfg.p_grid_db = grid_from_json(j["p_grid_db"]);
        if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
        cfg.output_path = require_field(j, "out").get<std::string>();
    } else {
        if (model_text.empty())
            throw InvalidInputError("montecarlo: --model (or --config) is required");
        if (cfg.output_path.empty())
            throw InvalidInputError("montecarlo: --out (or --config) is required");
        cfg.p_grid_db = parse_db_grid(grid_text);
    }
    cfg.model = model_from_string(model_text);
    cfg.validate();

    const std::vector<CurvePoint> points = run_montecarlo(cfg);
    write_montecarlo_csv(points, cfg.model, cfg.seed, cfg.output_path);

    long failures = 0;
    for (const CurvePoint& pt : points) failures += pt.failure_count;
    if (failures > 0)
        err << "warning: " << failures << " (trial, power) cells failed numerically\n";
    out << "wrote " << cfg.output_path << " (" << points.size() << " grid points, "
        << cfg.trials << " trials each)\n";
    return 0;
}

struct SweepArgs {
    std::string channel_path;
    double power = 0.0;
    bool power_given = false;
    std::string gamma_text;
    std::string out_path;
    std::string config_path;
};

int do_sweep(const SweepArgs& args, std::ostream& out, std::ostream&) {
    std::optional<ChannelSpec> spec;
    double power = args.power;
    bool power_given = args.power_given;
    std::optional<GammaGridSpec> gamma;
    std::string out_path = args.out_path;

    if (!args.config_path.empty()) {
        const json cfg = load_json_file(args.config_path);
        spec = channel_from_json_value(require_field(cfg, "channel"));
        if (cfg.contains("p")) {
            power = cfg["p"].get<double>();
            power_given = true;
        }
        if (cfg.contains("gamma_grid")) gamma = gamma_grid_from_json(cfg["gamma_grid"]);
        out_path = require_field(cfg, "out").get<std::string>();
    } else {
        if (args.channel_path.empty())
            throw InvalidInputError("sweep: --channel (or --config) is required");
        spec = load_channel_json(args.channel_path);
        if (!args.gamma_text.empty()) gamma = parse_gamma_grid(args.gamma_text);
        if (out_path.empty()) throw InvalidInputError("sweep: --out (or --config) is required");
    }
    if (!power_given) power = spec->P;

    const std::vector<SweepRow> rows = run_sweep(spec->ch, {power}, gamma);
    write_sweep_csv(rows, out_path);
    out << "wrote " << out_path << " (" << rows.size() << " rows)\n";
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"CFMA rate pairs and sum-capacity checks for the two-user Gaussian MIMO "
                 "multiple access channel"};
    app.require_subcommand(1);

    RateArgs rate_args;
    CLI::App* rate_cmd = app.add_subcommand("rate", "Rate pair for one coding choice");
    rate_cmd->add_option("--channel", rate_args.channel_path, "Channel JSON file");
    rate_cmd->add_option("--a", rate_args.a_text, "First combination coefficients i,j");
    rate_cmd->add_option("--b", rate_args.b_text, "Second combination coefficients i,j");
    rate_cmd->add_option("--beta", rate_args.beta_text, "Lattice scalings x,y");
    rate_cmd->add_option("--config", rate_args.config_path,
                         "JSON file with all options (other flags ignored)");

    CheckArgs check_args;
    CLI::App* check_cmd = app.add_subcommand("check", "Sum-capacity achievability check");
    check_cmd->add_option("--channel", check_args.channel_path, "Channel JSON file");
    CLI::Option* power_opt =
        check_cmd->add_option("--power", check_args.power, "Power budget (defaults to JSON P)");
    check_cmd->add_flag("--diagonal", check_args.diagonal,
                        "Restrict water-filling to diagonal covariances");
    check_cmd->add_option("--config", check_args.config_path,
                          "JSON file with all options (other flags ignored)");

    MonteCarloArgs mc_args;
    CLI::App* mc_cmd = app.add_subcommand("montecarlo", "Achievability curve over random channels");
    mc_cmd->add_option("--model", mc_args.model_text, "simo|diag2x2|generic2x2");
    mc_cmd->add_option("--trials", mc_args.trials, "Realizations per grid point");
    mc_cmd->add_option("--seed", mc_args.seed, "RNG seed");
    mc_cmd->add_option("--p-grid-db", mc_args.grid_text, "Power grid start:step:stop in dB");
    mc_cmd->add_option("--out", mc_args.out_path, "Output CSV path");
    mc_cmd->add_option("--threads", mc_args.threads, "Worker threads");
    mc_cmd->add_option("--config", mc_args.config_path,
                       "JSON file with all options (other flags ignored)");

    SweepArgs sweep_args;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Scaling-ratio diagnostic sweep");
    sweep_cmd->add_option("--channel", sweep_args.channel_path, "Channel JSON file");
    CLI::Option* p_opt =
        sweep_cmd->add_option("--p", sweep_args.power, "Power budget (defaults to JSON P)");
    sweep_cmd->add_option("--gamma-grid", sweep_args.gamma_text, "Gamma grid lo:hi:n");
    sweep_cmd->add_option("--out", sweep_args.out_path, "Output CSV path");
    sweep_cmd->add_option("--config", sweep_args.config_path,
                          "JSON file with all options (other flags ignored)");

    std::vector<const char*> argv;
    argv.push_back("cfma");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    check_args.power_given = power_opt->count() > 0;
    sweep_args.power_given = p_opt->count() > 0;

    try {
        if (rate_cmd->parsed()) return do_rate(rate_args, out, err);
        if (check_cmd->parsed()) return do_check(check_args, out, err);
        if (mc_cmd->parsed()) return do_montecarlo(mc_args, out, err);
        if (sweep_cmd->parsed()) return do_sweep(sweep_args, out, err);
        err << "error: no subcommand given\n";
        return 1;
    } catch (const InvalidInputError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        err << "numerical error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace cfma::cli
