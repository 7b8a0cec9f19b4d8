#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "markov_sa/mdp.hpp"
#include "markov_sa/schedule.hpp"
#include "markov_sa/tdcore.hpp"

namespace markov_sa::runner {

enum class Algorithm { Td0, OffTdc, OnTdc, GtdLambda };
enum class Metric { Rmse, ThetaScalar, WTrackingGap };

// Declarative description of one experiment: environment, algorithm, step-size
// schedules, horizon and replication count. Replications use seeds
// seed, seed+1, ...
struct ExperimentConfig {
    enum class EnvKind { Baird, Theta2Theta, Inline };
    EnvKind env_kind = EnvKind::Baird;
    double theta2theta_p = 0.5;
    std::optional<Environment> inline_env;

    Algorithm algorithm = Algorithm::OnTdc;
    double trace_lambda = 0.0;  // gtd_lambda only

    StepSchedule schedule_a = StepSchedule::constant(0.005);
    std::optional<StepSchedule> schedule_b;

    long steps = 1;
    int replications = 1;
    std::uint64_t seed = 0;
    Metric metric = Metric::Rmse;
    int start_state = 0;
    std::string output_path;

    void validate() const;  // throws ConfigError
    Environment build_environment() const;
};

// Per-step mean and across-replication variance of the metric, cumulative
// divergence counts, and per-replication terminal summaries. Row n describes
// the state after the n-th parameter update.
struct RunRecord {
    double initial_metric = 0.0;
    Vec mean;
    Vec variance;            // sample variance; zero when replications == 1
    std::vector<int> n_diverged;  // cumulative per step
    Vec terminal_metric;     // one entry per replication
    Vec terminal_theta_sup;  // final ||theta||_inf per replication
    int diverged_total = 0;
};

// Runs the experiment. The parallel path distributes replications over OpenMP
// threads; the serial path is the reference implementation and both produce
// bit-identical records because aggregation always happens in replication
// order on the stored per-replication traces.
RunRecord run_experiment(const ExperimentConfig& config, bool parallel = true);

// CSV with header "step,mean,variance,n_diverged", one row per step.
void write_csv(const RunRecord& record, const std::string& path);

std::string algorithm_name(Algorithm a);
std::string metric_name(Metric m);

}  // namespace markov_sa::runner
