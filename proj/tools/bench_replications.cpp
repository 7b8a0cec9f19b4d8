// Benchmark: serial reference vs OpenMP replication loop on the same
// experiment, with an equality check on the aggregated records.

#include <chrono>
#include <cstdio>
#include <cstring>

#include "markov_sa/runner.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace markov_sa;

namespace {

double time_run(const runner::ExperimentConfig& cfg, bool parallel, runner::RunRecord& out) {
    const auto t0 = std::chrono::steady_clock::now();
    out = runner::run_experiment(cfg, parallel);
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

bool identical(const runner::RunRecord& a, const runner::RunRecord& b) {
    return a.mean == b.mean && a.variance == b.variance && a.n_diverged == b.n_diverged &&
           a.terminal_metric == b.terminal_metric;
}

}  // namespace

int main(int argc, char** argv) {
    int replications = 200;
    long steps = 20000;
    if (argc > 1) replications = std::atoi(argv[1]);
    if (argc > 2) steps = std::atol(argv[2]);

    runner::ExperimentConfig cfg;
    cfg.env_kind = runner::ExperimentConfig::EnvKind::Baird;
    cfg.algorithm = runner::Algorithm::OnTdc;
    cfg.schedule_a = StepSchedule::constant(0.005);
    cfg.schedule_b = StepSchedule::constant(0.05);
    cfg.steps = steps;
    cfg.replications = replications;
    cfg.seed = 7;
    cfg.metric = runner::Metric::Rmse;

#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; both paths are serial\n");
#endif
    std::printf("workload: %d replications x %ld steps (ontdc on the 7-star example)\n",
                replications, steps);

    runner::RunRecord serial_record, parallel_record;
    const double t_serial = time_run(cfg, false, serial_record);
    const double t_parallel = time_run(cfg, true, parallel_record);

    std::printf("serial   : %8.3f s\n", t_serial);
    std::printf("parallel : %8.3f s  (speedup %.2fx)\n", t_parallel, t_serial / t_parallel);
    if (!identical(serial_record, parallel_record)) {
        std::printf("FAIL: records differ between serial and parallel paths\n");
        return 1;
    }
    std::printf("records identical across both paths\n");
    return 0;
}
