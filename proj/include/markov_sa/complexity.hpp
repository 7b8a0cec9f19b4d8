#pragma once

#include <vector>

#include "markov_sa/schedule.hpp"

namespace markov_sa::complexity {

// Inputs to the step-size selection calculators. K_hat, C_hat and the
// aggregate constant M depend on quantities that are not computable in
// general; they are user-supplied with defaults of 1.
struct Inputs {
    double M_const = 1.0;
    double eps = 0.01;
    double confidence_gamma = 0.1;
    double k = 0.75;                // step exponent, must lie in (1/2, 1)
    double alpha_contract = 0.9;    // contraction modulus of the mean field
    double T_horizon = -1.0;        // <= 0 means "minimize over T"
    int d = 1;
    double delta_B = 1.0;
    double K_hat = 1.0;
    double C_hat = 1.0;
};

struct TailSum {
    double value = 0.0;           // sum_{m=n0}^inf a(m)^2
    double analytic_bound = 0.0;  // scale^2 / ((2k-1)(n0-1)^(2k-1)), power kind only
};

// Tail sum of squared steps. Supported for the power kind (closed-form
// Euler-Maclaurin remainder, needs 2k > 1 and n0 >= 2) and for explicit lists
// (finite sum, n0 >= 1). Throws std::domain_error when the squares are not
// summable and std::invalid_argument for the remaining kinds.
TailSum tail_sum(const StepSchedule& schedule, long n0);

// max(0, 1 - 2d e^{-K_hat dB^2/(d s)} - 2d e^{-C_hat dB^2/(d s)}), clamped to
// [0,1]; the raw formula goes negative (vacuous) for small n0.
double lockin_lower_bound(int d, double delta_B, double K_hat, double C_hat, double s_n0);

// min over T > 0 of (T+1)/(1 - e^{-(1-alpha)T}), by golden section on (0,200].
// For alpha = 0.9 the minimum is ~15.16, the constant used by the closed-form
// iterate estimate below.
struct TimeConstant {
    double t_star = 0.0;
    double value = 0.0;
};
TimeConstant lockin_time_constant(double alpha_contract);

struct SampleComplexity {
    double n0 = 0.0;        // ceil of the max of the six candidate terms
    double n0_prime = 0.0;  // ceil of (n0^(1-k) + 15.16 (1-k))^(1/(1-k))
    double terms[6] = {0, 0, 0, 0, 0, 0};
};

// Closed-form estimate for a(n) = 1/n^k. Only alpha_contract = 0.9 is
// accepted: the 15.16 constant hard-wired in the closed form is specific to
// that contraction modulus (use iterates_to_reach for other alpha).
// Throws std::domain_error for k outside (1/2, 1).
SampleComplexity sample_complexity(const Inputs& inputs);

struct SweepRow {
    double k = 0.0;
    double n0 = 0.0;
    double n0_prime = 0.0;
};
std::vector<SweepRow> n0_sweep(const Inputs& inputs, const std::vector<double>& k_grid);

// Smallest n > n0 with sum_{i=n0+1}^n a(i) >= threshold, returned as n - n0.
long iterates_to_reach(const StepSchedule& schedule, long n0, double threshold);

// Iterates needed beyond n0 to come within 2 eps of the fixed point of an
// alpha-contraction: the partial-sum threshold is (T+1)/(1-e^{-(1-alpha)T}),
// with T minimized when T_horizon <= 0.
long fixed_point_iterates_to_go(long n0, double k, double T_horizon, double alpha_contract);

}  // namespace markov_sa::complexity
