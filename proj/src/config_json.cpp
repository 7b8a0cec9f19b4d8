#include "markov_sa/config_json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "markov_sa/errors.hpp"

namespace markov_sa::config {

namespace {

double require_number(const json& j, const std::string& field) {
    if (!j.is_number()) throw ConfigError(field, "expected a number");
    return j.get<double>();
}

long require_integer(const json& j, const std::string& field) {
    if (!j.is_number_integer()) throw ConfigError(field, "expected an integer");
    return j.get<long>();
}

Vec parse_vector(const json& j, const std::string& field) {
    if (!j.is_array()) throw ConfigError(field, "expected an array of numbers");
    Vec out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(require_number(j[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

Matrix parse_matrix(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) throw ConfigError(field, "expected a nonempty nested array");
    Matrix m;
    m.rows = static_cast<int>(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        const Vec row = parse_vector(j[i], field + "[" + std::to_string(i) + "]");
        if (i == 0) m.cols = static_cast<int>(row.size());
        if (static_cast<int>(row.size()) != m.cols)
            throw ConfigError(field, "rows have unequal lengths");
        m.a.insert(m.a.end(), row.begin(), row.end());
    }
    return m;
}

StochasticPolicy parse_policy(const json& j, const std::string& field, int n_states, int n_actions) {
    const Matrix m = parse_matrix(j, field);
    if (m.rows != n_states || m.cols != n_actions)
        throw ConfigError(field, "expected shape [n_states][n_actions]");
    StochasticPolicy p;
    p.n_states = n_states;
    p.n_actions = n_actions;
    p.probs = m.a;
    return p;
}

Environment parse_inline_env(const json& j) {
    if (!j.contains("mdp")) throw ConfigError("env.mdp", "missing");
    const json& jm = j["mdp"];
    if (!jm.contains("kernel") || !jm["kernel"].is_array())
        throw ConfigError("env.mdp.kernel", "expected [s][a][s'] nested arrays");

    Environment env;
    env.name = "inline";
    const json& jk = jm["kernel"];
    const int n_states = static_cast<int>(jk.size());
    if (n_states < 1 || !jk[0].is_array() || jk[0].empty())
        throw ConfigError("env.mdp.kernel", "expected [s][a][s'] nested arrays");
    const int n_actions = static_cast<int>(jk[0].size());
    env.mdp = FiniteMdp::zeros(n_states, n_actions, require_number(jm.value("discount", json(0.99)),
                                                                   "env.mdp.discount"));
    for (int s = 0; s < n_states; ++s) {
        if (!jk[s].is_array() || static_cast<int>(jk[s].size()) != n_actions)
            throw ConfigError("env.mdp.kernel", "expected [s][a][s'] nested arrays");
        for (int a = 0; a < n_actions; ++a) {
            const Vec row = parse_vector(jk[s][a], "env.mdp.kernel");
            if (static_cast<int>(row.size()) != n_states)
                throw ConfigError("env.mdp.kernel", "inner rows must have n_states entries");
            for (int s2 = 0; s2 < n_states; ++s2) env.mdp.p(s, a, s2) = row[s2];
        }
    }
    if (jm.contains("reward")) {
        const json& jr = jm["reward"];
        if (!jr.is_array() || static_cast<int>(jr.size()) != n_states)
            throw ConfigError("env.mdp.reward", "expected [s][a][s'] nested arrays");
        for (int s = 0; s < n_states; ++s)
            for (int a = 0; a < n_actions; ++a) {
                const Vec row = parse_vector(jr[s][a], "env.mdp.reward");
                for (int s2 = 0; s2 < n_states; ++s2) env.mdp.r(s, a, s2) = row[s2];
            }
    }
    if (!j.contains("behavior")) throw ConfigError("env.behavior", "missing");
    if (!j.contains("target")) throw ConfigError("env.target", "missing");
    env.behavior = parse_policy(j["behavior"], "env.behavior", n_states, n_actions);
    env.target = parse_policy(j["target"], "env.target", n_states, n_actions);
    if (!j.contains("features")) throw ConfigError("env.features", "missing");
    env.features = parse_matrix(j["features"], "env.features");
    if (j.contains("theta_init"))
        env.theta_init = parse_vector(j["theta_init"], "env.theta_init");
    else
        env.theta_init.assign(env.features.cols, 0.0);
    if (j.contains("w_init"))
        env.w_init = parse_vector(j["w_init"], "env.w_init");
    else
        env.w_init.assign(env.features.cols, 0.0);
    return env;
}

}  // namespace

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
    return json::parse(in);  // nlohmann parse_error propagates
}

StepSchedule parse_schedule(const json& j, const std::string& field) {
    if (!j.is_object() || !j.contains("kind")) throw ConfigError(field, "expected {\"kind\": ...}");
    const std::string kind = j["kind"].get<std::string>();
    const double scale = j.contains("scale") ? require_number(j["scale"], field + ".scale") : 1.0;
    try {
        if (kind == "constant") return StepSchedule::constant(require_number(j.at("value"), field + ".value"));
        if (kind == "power") return StepSchedule::power(require_number(j.at("k"), field + ".k"), scale);
        if (kind == "log_power")
            return StepSchedule::log_power(require_number(j.at("p"), field + ".p"), scale);
        if (kind == "inv_nlogn") return StepSchedule::inv_nlogn(scale);
        if (kind == "explicit") return StepSchedule::explicit_list(parse_vector(j.at("values"), field + ".values"));
    } catch (const json::exception&) {
        throw ConfigError(field, "missing or malformed parameter for kind '" + kind + "'");
    } catch (const std::invalid_argument& e) {
        throw ConfigError(field, e.what());
    }
    throw ConfigError(field + ".kind", "unknown schedule kind '" + kind + "'");
}

runner::ExperimentConfig parse_experiment(const json& j) {
    runner::ExperimentConfig cfg;

    if (!j.contains("env")) throw ConfigError("env", "missing");
    const json& je = j["env"];
    if (je.is_string()) {
        const std::string name = je.get<std::string>();
        if (name == "baird")
            cfg.env_kind = runner::ExperimentConfig::EnvKind::Baird;
        else if (name == "theta2theta")
            cfg.env_kind = runner::ExperimentConfig::EnvKind::Theta2Theta;
        else
            throw ConfigError("env", "unknown environment '" + name + "'");
    } else if (je.is_object()) {
        const std::string name = je.value("name", "");
        if (name == "baird") {
            cfg.env_kind = runner::ExperimentConfig::EnvKind::Baird;
        } else if (name == "theta2theta") {
            cfg.env_kind = runner::ExperimentConfig::EnvKind::Theta2Theta;
            if (je.contains("p")) cfg.theta2theta_p = require_number(je["p"], "env.p");
        } else if (name == "inline") {
            cfg.env_kind = runner::ExperimentConfig::EnvKind::Inline;
            cfg.inline_env = parse_inline_env(je);
        } else {
            throw ConfigError("env.name", "expected baird, theta2theta or inline");
        }
    } else {
        throw ConfigError("env", "expected a string or an object");
    }

    if (!j.contains("algorithm")) throw ConfigError("algorithm", "missing");
    const json& ja = j["algorithm"];
    std::string algo = ja.is_string() ? ja.get<std::string>() : ja.value("name", "");
    if (algo == "td0")
        cfg.algorithm = runner::Algorithm::Td0;
    else if (algo == "offtdc")
        cfg.algorithm = runner::Algorithm::OffTdc;
    else if (algo == "ontdc")
        cfg.algorithm = runner::Algorithm::OnTdc;
    else if (algo == "gtd_lambda") {
        cfg.algorithm = runner::Algorithm::GtdLambda;
        if (ja.is_object() && ja.contains("trace_lambda"))
            cfg.trace_lambda = require_number(ja["trace_lambda"], "algorithm.trace_lambda");
    } else {
        throw ConfigError("algorithm", "expected td0, offtdc, ontdc or gtd_lambda");
    }

    if (!j.contains("schedules") || !j["schedules"].is_object())
        throw ConfigError("schedules", "missing");
    const json& js = j["schedules"];
    if (!js.contains("a")) throw ConfigError("schedules.a", "missing");
    cfg.schedule_a = parse_schedule(js["a"], "schedules.a");
    if (js.contains("b")) cfg.schedule_b = parse_schedule(js["b"], "schedules.b");

    if (!j.contains("steps")) throw ConfigError("steps", "missing");
    cfg.steps = require_integer(j["steps"], "steps");
    cfg.replications = static_cast<int>(
        j.contains("replications") ? require_integer(j["replications"], "replications") : 1);
    if (j.contains("seed")) cfg.seed = static_cast<std::uint64_t>(require_integer(j["seed"], "seed"));

    const std::string metric = j.value("metric", "rmse");
    if (metric == "rmse")
        cfg.metric = runner::Metric::Rmse;
    else if (metric == "theta_scalar")
        cfg.metric = runner::Metric::ThetaScalar;
    else if (metric == "w_tracking_gap")
        cfg.metric = runner::Metric::WTrackingGap;
    else
        throw ConfigError("metric", "expected rmse, theta_scalar or w_tracking_gap");

    if (j.contains("start_state"))
        cfg.start_state = static_cast<int>(require_integer(j["start_state"], "start_state"));
    cfg.output_path = j.value("output_path", "");

    cfg.validate();
    return cfg;
}

bool looks_like_risk_model(const json& j) {
    return j.is_object() && j.contains("P") && j.contains("cost");
}

risk::RiskModel parse_risk_model(const json& j) {
    if (!looks_like_risk_model(j)) throw ConfigError("model", "expected P, cost, features, i0");
    Matrix p = parse_matrix(j["P"], "P");
    Matrix cost = parse_matrix(j["cost"], "cost");
    if (!j.contains("features")) throw ConfigError("features", "missing");
    Matrix features = parse_matrix(j["features"], "features");
    const int i0 = j.contains("i0") ? static_cast<int>(require_integer(j["i0"], "i0")) : 0;
    try {
        return risk::make_risk_model(std::move(p), std::move(cost), std::move(features), i0);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("model", e.what());
    }
}

complexity::Inputs parse_complexity_inputs(const json& j) {
    complexity::Inputs in;
    if (!j.contains("M")) throw ConfigError("M", "missing");
    in.M_const = require_number(j["M"], "M");
    if (!j.contains("eps")) throw ConfigError("eps", "missing");
    in.eps = require_number(j["eps"], "eps");
    if (j.contains("gamma")) in.confidence_gamma = require_number(j["gamma"], "gamma");
    if (j.contains("k")) in.k = require_number(j["k"], "k");
    if (j.contains("alpha")) in.alpha_contract = require_number(j["alpha"], "alpha");
    if (j.contains("T")) in.T_horizon = require_number(j["T"], "T");
    if (j.contains("d")) in.d = static_cast<int>(require_integer(j["d"], "d"));
    if (j.contains("delta_B")) in.delta_B = require_number(j["delta_B"], "delta_B");
    if (j.contains("K_hat")) in.K_hat = require_number(j["K_hat"], "K_hat");
    if (j.contains("C_hat")) in.C_hat = require_number(j["C_hat"], "C_hat");
    return in;
}

json complexity_inputs_to_json(const complexity::Inputs& in) {
    return json{{"M", in.M_const},   {"eps", in.eps},         {"gamma", in.confidence_gamma},
                {"k", in.k},         {"alpha", in.alpha_contract}, {"T", in.T_horizon},
                {"d", in.d},         {"delta_B", in.delta_B}, {"K_hat", in.K_hat},
                {"C_hat", in.C_hat}};
}

namespace {

json bound_value_to_json(const risk::BoundValue& v) {
    if (v.valid) return json{{"value", v.value}, {"valid", true}};
    return json{{"value", nullptr}, {"valid", false}, {"reason", v.reason}};
}

std::string csv_cell(const risk::BoundValue& v) {
    if (!v.valid) return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v.value);
    return buf;
}

std::string csv_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

json bound_report_to_json(const risk::BoundReport& r) {
    json j;
    j["lambda"] = r.lambda;
    j["mu"] = r.mu;
    j["actual_error"] = r.actual_error;
    j["poisson_residual"] = r.poisson_residual;
    j["bounds"] = json{{"spect", bound_value_to_json(r.spect)},
                       {"bapat1", bound_value_to_json(r.bapat1)},
                       {"bapat2", bound_value_to_json(r.bapat2)},
                       {"bapat3", bound_value_to_json(r.bapat3)},
                       {"invert", bound_value_to_json(r.invert)}};
    j["condn_holds"] = r.condn_holds;
    const auto& c = r.conditions;
    j["conditions"] = json{
        {"star_holds", c.star_holds},
        {"condition1", json{{"holds", c.condition1_shape}, {"residual", c.condition1_residual}}},
        {"condition2_eq1",
         json{{"holds", c.condition2_eq1},
              {"residual", std::isnan(c.condition2_eq1_residual) ? json(nullptr)
                                                                 : json(c.condition2_eq1_residual)}}},
        {"condition2_eq2",
         json{{"holds", c.condition2_eq2},
              {"residual", std::isnan(c.condition2_eq2_residual) ? json(nullptr)
                                                                 : json(c.condition2_eq2_residual)}}},
        {"probes", json{{"applicable", c.probes.applicable},
                        {"as1", c.probes.as1},
                        {"as1_margin", c.probes.as1_margin},
                        {"as2", c.probes.as2},
                        {"as2_residual", c.probes.as2_residual},
                        {"as3", c.probes.as3},
                        {"as3_residual", c.probes.as3_residual},
                        {"as5", c.probes.as5},
                        {"as6", c.probes.as6}}}};
    return j;
}

std::string bound_report_to_csv(const risk::BoundReport& r) {
    std::ostringstream out;
    out << "lambda,mu,actual_error,poisson_residual,spect,bapat1,bapat2,bapat3,invert,"
           "condn_holds,star_holds,condition1,condition2_eq1,condition2_eq2\n";
    out << csv_num(r.lambda) << ',' << csv_num(r.mu) << ',' << csv_num(r.actual_error) << ','
        << csv_num(r.poisson_residual) << ',' << csv_cell(r.spect) << ',' << csv_cell(r.bapat1)
        << ',' << csv_cell(r.bapat2) << ',' << csv_cell(r.bapat3) << ',' << csv_cell(r.invert)
        << ',' << (r.condn_holds ? 1 : 0) << ',' << (r.conditions.star_holds ? 1 : 0) << ','
        << (r.conditions.condition1_shape ? 1 : 0) << ',' << (r.conditions.condition2_eq1 ? 1 : 0)
        << ',' << (r.conditions.condition2_eq2 ? 1 : 0) << '\n';
    return out.str();
}

std::vector<double> parse_grid(const std::string& spec) {
    double lo = 0.0, hi = 0.0;
    long n = 0;
    char extra = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%ld%c", &lo, &hi, &n, &extra) != 3 || n < 1)
        throw ConfigError("grid", "expected A:B:N with N >= 1");
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(n));
    if (n == 1) {
        grid.push_back(lo);
        return grid;
    }
    for (long i = 0; i < n; ++i)
        grid.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    return grid;
}

}  // namespace markov_sa::config
