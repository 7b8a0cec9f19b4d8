#include "markov_sa/runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "markov_sa/errors.hpp"
#include "markov_sa/log.hpp"
#include "markov_sa/spectral.hpp"

namespace markov_sa::runner {

namespace {

bool needs_two_timescales(Algorithm a) { return a != Algorithm::Td0; }

// Per-replication context, reused across steps.
struct ReplicationPlan {
    const Environment& env;
    const ExperimentConfig& config;
    const Vec& v_true;                      // true value function of the target policy
    const tdcore::FixedPoint* fixed_point;  // only for the tracking-gap metric
};

double eval_metric(const ReplicationPlan& plan, const tdcore::TdState& state) {
    switch (plan.config.metric) {
        case Metric::Rmse:
            return tdcore::rmse(state.theta, plan.env.features, plan.v_true);
        case Metric::ThetaScalar:
            return state.theta[0];
        case Metric::WTrackingGap: {
            const Vec lambda = plan.fixed_point->lambda_at(state.theta);
            return norm_l2(vec_sub(state.w, lambda));
        }
    }
    return 0.0;
}

struct ReplicationResult {
    double terminal_metric = 0.0;
    double terminal_theta_sup = 0.0;
    long diverged_at = -1;  // step index (1-based) or -1
};

ReplicationResult run_replication(const ReplicationPlan& plan, std::uint64_t seed,
                                  std::span<double> metric_out) {
    const ExperimentConfig& cfg = plan.config;
    const Environment& env = plan.env;
    ChainSampler sampler(env.mdp, env.behavior, env.target, cfg.start_state, seed);
    const double gamma = env.mdp.discount;

    tdcore::TdState state;
    state.theta = env.theta_init;
    if (needs_two_timescales(cfg.algorithm)) state.w = env.w_init;
    if (cfg.algorithm == Algorithm::GtdLambda) state.trace.assign(env.theta_init.size(), 0.0);

    ReplicationResult result;
    double frozen = eval_metric(plan, state);  // last finite metric; starts at the initial one
    for (long n = 1; n <= cfg.steps; ++n) {
        if (result.diverged_at >= 0) {
            metric_out[n - 1] = frozen;
            continue;
        }
        const ChainStep step = sampler.next();
        const double a_n = cfg.schedule_a.at(n);
        switch (cfg.algorithm) {
            case Algorithm::Td0:
                state = tdcore::iw_td0_step(std::move(state), step, env.features, a_n, gamma);
                break;
            case Algorithm::OnTdc:
                state = tdcore::ontdc_step(std::move(state), step, env.features, a_n,
                                           cfg.schedule_b->at(n), gamma);
                break;
            case Algorithm::OffTdc:
                state = tdcore::offtdc_step(std::move(state), step, env.features, env.target, a_n,
                                            cfg.schedule_b->at(n), gamma);
                break;
            case Algorithm::GtdLambda:
                state = tdcore::gtd_lambda_step(std::move(state), step, env.features, a_n,
                                                cfg.schedule_b->at(n), gamma, cfg.trace_lambda);
                break;
        }
        if (tdcore::exceeds_guard(state)) {
            result.diverged_at = n;
            metric_out[n - 1] = frozen;  // last finite metric
            continue;
        }
        frozen = eval_metric(plan, state);
        metric_out[n - 1] = frozen;
    }
    result.terminal_metric = metric_out[cfg.steps - 1];
    result.terminal_theta_sup = norm_linf(state.theta);
    return result;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (steps < 1) throw ConfigError("steps", "must be >= 1");
    if (replications < 1) throw ConfigError("replications", "must be >= 1");
    if (needs_two_timescales(algorithm) && !schedule_b.has_value())
        throw ConfigError("schedules.b", "two-timescale algorithms need both a and b");
    if (algorithm == Algorithm::GtdLambda && !(trace_lambda >= 0.0 && trace_lambda <= 1.0))
        throw ConfigError("algorithm.trace_lambda", "must lie in [0,1]");
    if (metric == Metric::WTrackingGap && !needs_two_timescales(algorithm))
        throw ConfigError("metric", "w_tracking_gap needs a two-timescale algorithm");
    if (env_kind == EnvKind::Theta2Theta && !(theta2theta_p > 0.0 && theta2theta_p < 1.0))
        throw ConfigError("env.p", "must lie in (0,1)");
    if (env_kind == EnvKind::Inline && !inline_env.has_value())
        throw ConfigError("env", "inline environment missing");

    const Environment env = build_environment();
    env.mdp.validate();
    env.behavior.validate(true);
    env.target.validate(false);
    if (env.features.rows != env.mdp.n_states)
        throw ConfigError("env.features", "needs one row per state");
    if (static_cast<int>(env.theta_init.size()) != env.features.cols)
        throw ConfigError("env.theta_init", "length must match feature width");
    if (static_cast<int>(env.w_init.size()) != env.features.cols)
        throw ConfigError("env.w_init", "length must match feature width");
    if (start_state < 0 || start_state >= env.mdp.n_states)
        throw ConfigError("start_state", "out of range");
}

Environment ExperimentConfig::build_environment() const {
    switch (env_kind) {
        case EnvKind::Baird:
            return baird_env();
        case EnvKind::Theta2Theta:
            return theta_two_theta_env(theta2theta_p);
        case EnvKind::Inline:
            return *inline_env;
    }
    throw ConfigError("env", "unknown environment");
}

RunRecord run_experiment(const ExperimentConfig& config, bool parallel) {
    config.validate();
    const Environment env = config.build_environment();

    // True value function of the target policy, for the RMSE metric.
    Vec v_true(env.mdp.n_states, 0.0);
    if (config.metric == Metric::Rmse) {
        const InducedChain target_chain = induced_chain(env.mdp, env.target);
        Matrix system = mat_scale(target_chain.kernel, -env.mdp.discount);
        for (int i = 0; i < system.rows; ++i) system(i, i) += 1.0;
        v_true = spectral::solve_linear(system, target_chain.reward);
    }

    std::optional<tdcore::FixedPoint> fixed_point;
    if (config.metric == Metric::WTrackingGap)
        fixed_point.emplace(env.mdp, env.behavior, env.target, env.features);

    const ReplicationPlan plan{env, config, v_true,
                               fixed_point.has_value() ? &*fixed_point : nullptr};

    const int reps = config.replications;
    const long steps = config.steps;
    std::vector<double> traces(static_cast<std::size_t>(reps) * steps);
    std::vector<ReplicationResult> results(reps);

    MSA_LOG_INFO("running %d replications of %ld steps (%s, %s)", reps, steps,
                 algorithm_name(config.algorithm).c_str(), env.name.c_str());

    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int r = 0; r < reps; ++r) {
            results[r] = run_replication(
                plan, config.seed + static_cast<std::uint64_t>(r),
                {traces.data() + static_cast<std::size_t>(r) * steps, static_cast<std::size_t>(steps)});
        }
    } else {
        for (int r = 0; r < reps; ++r) {
            results[r] = run_replication(
                plan, config.seed + static_cast<std::uint64_t>(r),
                {traces.data() + static_cast<std::size_t>(r) * steps, static_cast<std::size_t>(steps)});
        }
    }

    // Aggregate in replication order so the record does not depend on thread
    // scheduling: two passes, mean then variance.
    RunRecord record;
    {
        tdcore::TdState init;
        init.theta = env.theta_init;
        if (needs_two_timescales(config.algorithm)) init.w = env.w_init;
        record.initial_metric = eval_metric(plan, init);
    }
    record.mean.assign(steps, 0.0);
    record.variance.assign(steps, 0.0);
    record.n_diverged.assign(steps, 0);
    for (int r = 0; r < reps; ++r) {
        const double* row = traces.data() + static_cast<std::size_t>(r) * steps;
        for (long n = 0; n < steps; ++n) record.mean[n] += row[n];
    }
    for (long n = 0; n < steps; ++n) record.mean[n] /= reps;
    if (reps > 1) {
        for (int r = 0; r < reps; ++r) {
            const double* row = traces.data() + static_cast<std::size_t>(r) * steps;
            for (long n = 0; n < steps; ++n) {
                const double d = row[n] - record.mean[n];
                record.variance[n] += d * d;
            }
        }
        for (long n = 0; n < steps; ++n) record.variance[n] /= (reps - 1);
    }
    record.terminal_metric.resize(reps);
    record.terminal_theta_sup.resize(reps);
    for (int r = 0; r < reps; ++r) {
        record.terminal_metric[r] = results[r].terminal_metric;
        record.terminal_theta_sup[r] = results[r].terminal_theta_sup;
        if (results[r].diverged_at >= 0) {
            ++record.diverged_total;
            for (long n = results[r].diverged_at - 1; n < steps; ++n) ++record.n_diverged[n];
        }
    }
    if (record.diverged_total > 0)
        MSA_LOG_WARN("%d of %d replications hit the divergence guard", record.diverged_total, reps);
    return record;
}

void write_csv(const RunRecord& record, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    out << "step,mean,variance,n_diverged\n";
    char buf[128];
    for (std::size_t n = 0; n < record.mean.size(); ++n) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%d\n", n + 1, record.mean[n],
                      record.variance[n], record.n_diverged[n]);
        out << buf;
    }
    if (!out) throw IoError("failed writing output file: " + path);
}

std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::Td0: return "td0";
        case Algorithm::OffTdc: return "offtdc";
        case Algorithm::OnTdc: return "ontdc";
        case Algorithm::GtdLambda: return "gtd_lambda";
    }
    return "?";
}

std::string metric_name(Metric m) {
    switch (m) {
        case Metric::Rmse: return "rmse";
        case Metric::ThetaScalar: return "theta_scalar";
        case Metric::WTrackingGap: return "w_tracking_gap";
    }
    return "?";
}

}  // namespace markov_sa::runner
