// Command-line front end: seeded experiment runs, risk bound reports,
// sample-complexity sweeps and fixed-point/Perron summaries.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "markov_sa/complexity.hpp"
#include "markov_sa/config_json.hpp"
#include "markov_sa/errors.hpp"
#include "markov_sa/log.hpp"
#include "markov_sa/spectral.hpp"
#include "markov_sa/tdcore.hpp"

namespace {

using markov_sa::ConfigError;
using markov_sa::IoError;
using nlohmann::json;

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    out << text;
    if (!out) throw IoError("failed writing output file: " + path);
}

std::string sibling_csv_path(const std::string& path) {
    const auto dot = path.find_last_of('.');
    const auto slash = path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + ".csv";
    return path.substr(0, dot) + ".csv";
}

int cmd_run(const std::string& config_path, const std::string& out_path, long seed_override,
            long reps_override, bool serial) {
    const json j = markov_sa::config::load_json_file(config_path);
    markov_sa::runner::ExperimentConfig cfg = markov_sa::config::parse_experiment(j);
    if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
    if (reps_override > 0) cfg.replications = static_cast<int>(reps_override);
    std::string out = out_path.empty() ? cfg.output_path : out_path;
    if (out.empty()) throw ConfigError("output_path", "no output path given (config or --out)");

    const markov_sa::runner::RunRecord record = markov_sa::runner::run_experiment(cfg, !serial);
    markov_sa::runner::write_csv(record, out);
    std::printf("wrote %s (%d replications, %ld steps, %d diverged)\n", out.c_str(),
                cfg.replications, cfg.steps, record.diverged_total);
    return 0;
}

int cmd_bounds(const std::string& config_path, const std::string& out_path) {
    const json j = markov_sa::config::load_json_file(config_path);
    const markov_sa::risk::RiskModel model = markov_sa::config::parse_risk_model(j);
    const markov_sa::risk::BoundReport report = markov_sa::risk::bound_report(model);
    const std::string text = markov_sa::config::bound_report_to_json(report).dump(2) + "\n";
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        write_text_file(out_path, text);
        write_text_file(sibling_csv_path(out_path),
                        markov_sa::config::bound_report_to_csv(report));
        std::printf("wrote %s and %s\n", out_path.c_str(), sibling_csv_path(out_path).c_str());
    }
    return 0;
}

int cmd_complexity(const std::string& config_path, const std::string& grid_spec,
                   const std::string& out_path) {
    const json j = markov_sa::config::load_json_file(config_path);
    const markov_sa::complexity::Inputs inputs = markov_sa::config::parse_complexity_inputs(j);
    std::vector<double> grid;
    if (grid_spec.empty())
        grid.push_back(inputs.k);
    else
        grid = markov_sa::config::parse_grid(grid_spec);

    const auto rows = markov_sa::complexity::n0_sweep(inputs, grid);
    std::string text = "# inputs: " + markov_sa::config::complexity_inputs_to_json(inputs).dump() + "\n";
    text += "k,n0,n0_prime\n";
    char buf[128];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", row.k, row.n0, row.n0_prime);
        text += buf;
    }
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        write_text_file(out_path, text);
        std::printf("wrote %s (%zu rows)\n", out_path.c_str(), rows.size());
    }
    return 0;
}

json fixed_point_summary(const markov_sa::Environment& env) {
    const markov_sa::tdcore::FixedPoint fp(env.mdp, env.behavior, env.target, env.features);
    json out;
    out["env"] = env.name;
    out["theta_star"] = fp.theta_star();
    out["b"] = fp.system().b;
    out["stationary"] = fp.stationary();
    auto cond = [](const markov_sa::Matrix& m) -> json {
        try {
            return markov_sa::spectral::condition_number_l1(m);
        } catch (const markov_sa::SingularMatrixError&) {
            return nullptr;  // singular; no finite condition number
        }
    };
    out["A_cond"] = cond(fp.system().A);
    out["C_cond"] = cond(fp.system().C);
    return out;
}

json risk_summary(const markov_sa::risk::RiskModel& model) {
    const markov_sa::risk::RiskCost rc = markov_sa::risk::risk_cost(model);
    const markov_sa::risk::ProjectedMu proj = markov_sa::risk::projected_mu(model);
    json out;
    out["lambda"] = rc.lambda;
    out["log_cost"] = rc.log_cost;
    out["V"] = rc.V;
    out["poisson_residual"] = rc.poisson_residual;
    out["mu"] = proj.mu;
    return out;
}

int cmd_solve(const std::string& env_name, const std::string& config_path,
              const std::string& out_path) {
    json result;
    if (!env_name.empty()) {
        if (env_name == "baird")
            result = fixed_point_summary(markov_sa::baird_env());
        else if (env_name == "theta2theta")
            result = fixed_point_summary(markov_sa::theta_two_theta_env());
        else
            throw ConfigError("env", "unknown environment '" + env_name + "'");
    } else if (!config_path.empty()) {
        const json j = markov_sa::config::load_json_file(config_path);
        if (markov_sa::config::looks_like_risk_model(j)) {
            result = risk_summary(markov_sa::config::parse_risk_model(j));
        } else if (j.contains("env")) {
            const auto cfg = markov_sa::config::parse_experiment(j);
            result = fixed_point_summary(cfg.build_environment());
        } else {
            throw ConfigError("config", "expected a risk model or an experiment config");
        }
    } else {
        throw ConfigError("solve", "needs --env or --config");
    }
    const std::string text = result.dump(2) + "\n";
    if (out_path.empty())
        std::fputs(text.c_str(), stdout);
    else
        write_text_file(out_path, text);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochastic-approximation toolkit for finite MDPs"};
    app.require_subcommand(1);

    std::string config_path, out_path, grid_spec, env_name;
    long seed_override = -1, reps_override = -1;
    bool serial = false;

    auto* run = app.add_subcommand("run", "run a seeded multi-replication experiment");
    run->add_option("--config", config_path, "experiment config JSON")->required();
    run->add_option("--out", out_path, "output CSV path (overrides config)");
    run->add_option("--seed", seed_override, "seed override");
    run->add_option("--replications", reps_override, "replication count override");
    run->add_flag("--serial", serial, "use the serial reference path");

    auto* bounds = app.add_subcommand("bounds", "risk-sensitive bound report for a model file");
    bounds->add_option("--config", config_path, "risk model JSON")->required();
    bounds->add_option("--out", out_path, "report JSON path (CSV row written alongside)");

    auto* complexity = app.add_subcommand("complexity", "sample-complexity sweep");
    complexity->add_option("--config", config_path, "inputs JSON")->required();
    complexity->add_option("--grid", grid_spec, "k grid as A:B:N");
    complexity->add_option("--out", out_path, "sweep CSV path");

    auto* solve = app.add_subcommand("solve", "fixed-point / Perron summary");
    solve->add_option("--env", env_name, "built-in environment (baird, theta2theta)");
    solve->add_option("--config", config_path, "environment or risk model JSON");
    solve->add_option("--out", out_path, "summary JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return cmd_run(config_path, out_path, seed_override, reps_override, serial);
        if (bounds->parsed()) return cmd_bounds(config_path, out_path);
        if (complexity->parsed()) return cmd_complexity(config_path, grid_spec, out_path);
        if (solve->parsed()) return cmd_solve(env_name, config_path, out_path);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return 2;
    } catch (const IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        // numeric precondition failures: singular systems, reducible kernels,
        // divergence guards, out-of-range parameters
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
