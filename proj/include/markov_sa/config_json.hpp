#pragma once

#include <string>

#include <json.hpp>

#include "markov_sa/complexity.hpp"
#include "markov_sa/risk.hpp"
#include "markov_sa/runner.hpp"

namespace markov_sa::config {

using nlohmann::json;

json load_json_file(const std::string& path);  // IoError / json parse errors

// Experiment config schema (see README). Throws ConfigError with the failing
// field path.
runner::ExperimentConfig parse_experiment(const json& j);

StepSchedule parse_schedule(const json& j, const std::string& field);

// {"P": [[..]], "cost": [[..]], "features": [[..]], "i0": 0}
risk::RiskModel parse_risk_model(const json& j);
bool looks_like_risk_model(const json& j);

complexity::Inputs parse_complexity_inputs(const json& j);
json complexity_inputs_to_json(const complexity::Inputs& in);

json bound_report_to_json(const risk::BoundReport& report);
// Flat two-line CSV (header + row) for sweep plots.
std::string bound_report_to_csv(const risk::BoundReport& report);

// "A:B:N" -> N evenly spaced points from A to B inclusive.
std::vector<double> parse_grid(const std::string& spec);

}  // namespace markov_sa::config
