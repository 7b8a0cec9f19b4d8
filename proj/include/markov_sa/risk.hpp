#pragma once

#include <cstdint>
#include <string>

#include "markov_sa/matrix.hpp"
#include "markov_sa/schedule.hpp"
#include "markov_sa/spectral.hpp"

namespace markov_sa::risk {

// Policy-evaluation model for the multiplicative-cost setting: a fixed
// irreducible chain P, running costs c(i,j), a nonnegative feature matrix and
// a reference state i0. pi and the diagonal weighting D = diag(pi) are derived
// at construction.
struct RiskModel {
    Matrix P;         // s x s, row stochastic, irreducible
    Matrix cost;      // s x s
    Matrix features;  // s x M, nonnegative entries
    int i0 = 0;
    Vec pi;  // stationary distribution of P

    int n_states() const { return P.rows; }
    int n_features() const { return features.cols; }
};

RiskModel make_risk_model(Matrix P, Matrix cost, Matrix features, int i0);

// Entrywise product kernel with entries e^{c(i,j)} p(j|i).
Matrix cost_weighted_kernel(const RiskModel& model);

// True when every feature row has exactly one positive entry (and the rest
// exactly zero) -- the structural condition the projected-eigenvalue theory
// needs.
bool star_condition_holds(const Matrix& features);
// Column index of the single positive entry of row i, or -1.
int star_column(const Matrix& features, int i);

// Perron data of the cost-weighted kernel. The long-run multiplicative cost is
// ln(lambda); V solves V(i) = sum_j p(j|i) e^{c(i,j)} V(j) / lambda.
struct RiskCost {
    double lambda = 0.0;
    Vec V;
    double poisson_residual = 0.0;
    double log_cost = 0.0;
};
RiskCost risk_cost(const RiskModel& model);

// Dominant eigenvalue mu of Q = Pi * (C o P) with Pi the D-weighted projection
// onto the feature span. Q may be reducible, so mu comes from the shifted
// power iteration with a characteristic-polynomial fallback for s <= 4.
struct ProjectedMu {
    double mu = 0.0;
    Matrix Q;
};
ProjectedMu projected_mu(const RiskModel& model);

// A bound that can be inapplicable; reason says which assumption failed.
struct BoundValue {
    double value = 0.0;
    bool valid = false;
    std::string reason;

    static BoundValue ok(double v) { return {v, true, ""}; }
    static BoundValue invalid(std::string why) { return {0.0, false, std::move(why)}; }
};

// Spectral-variation bound ln(1 + (||A||+||B||)^(1-1/s) ||A-B||^(1/s) / mu)
// with the max-column-sum operator norm.
double bound_spectral(const Matrix& A, const Matrix& B, double mu);

// The three Perron-vector bounds on ln r(A) - ln r(B). x and y are the left
// and right Perron vectors of A with sum_i x_i y_i = 1;
//   b1 = sum_{a_ij>0} (a_ij x_i y_j / r(A)) ln(a_ij/b_ij)
//   L  = sum_i x_i y_i (a_ii - b_ii) + sum_{i != j} a_ij x_i y_j ln(a_ij/b_ij)
//   b2 = ln(r(A) / (r(A) - L)),  valid iff r(A) > L
//   b3 = ln(1 + L / r(B))
struct BapatBounds {
    BoundValue b1;
    BoundValue b2;
    BoundValue b3;
    bool condn_holds = false;  // r(A) > L
    double L = 0.0;
};
BapatBounds bound_bapat(const Matrix& A, const Matrix& B, const spectral::PerronPair& pair,
                        double mu);

// ln(det(A) / (mu (mu - alpha(A) ||A-B||))) with alpha(A) = max_i 1/x_i for the
// l1-normalized right Perron vector of A; requires A invertible with a PSD
// symmetric part and a positive denominator.
BoundValue bound_invert(const Matrix& A, const Matrix& B, double mu);

// Sufficient-condition probes evaluated verbatim from the displayed
// inequalities; they are diagnostics, not guarantees we rely on. No display
// carries the (as4) label, so there are five flags.
struct ConditionProbes {
    bool applicable = false;  // all require the star feature condition
    bool as1 = false;
    double as1_margin = 0.0;  // min_i sum_j gamma_ij - L
    bool as2 = false;
    double as2_residual = 0.0;
    bool as3 = false;
    double as3_residual = 0.0;
    bool as5 = false;
    bool as6 = false;
};

struct ZeroErrorReport {
    double lambda = 0.0;
    double mu = 0.0;
    double actual_error = 0.0;  // ln(lambda/mu)
    bool star_holds = false;
    // Single-column features proportional to x_i / pi_i (x the left Perron
    // vector of the cost-weighted kernel).
    bool condition1_shape = false;
    double condition1_residual = 0.0;
    // delta_ij = lambda0 gamma_ij beta_i / beta_j for some positive scalars.
    bool condition2_eq1 = false;
    double condition2_eq1_residual = 0.0;
    // prod delta_ij^(gamma_ij x_i y_j) = prod gamma_ij^(gamma_ij x_i y_j),
    // compared in log space under the sum x_i y_i = 1 normalization.
    bool condition2_eq2 = false;
    double condition2_eq2_residual = 0.0;
    ConditionProbes probes;
};
ZeroErrorReport zero_error_conditions(const RiskModel& model);

// Everything cmd_bounds emits for one model.
struct BoundReport {
    double lambda = 0.0;
    double mu = 0.0;
    double actual_error = 0.0;
    double poisson_residual = 0.0;
    BoundValue spect;
    BoundValue bapat1;
    BoundValue bapat2;
    BoundValue bapat3;
    BoundValue invert;
    bool condn_holds = false;
    ZeroErrorReport conditions;
};
BoundReport bound_report(const RiskModel& model);

inline constexpr double kDefaultEpsFloor = 1e-6;
inline constexpr double kDivergenceGuard = 1e12;

// Least-squares policy evaluation for the multiplicative cost: accumulates
//   A_n = sum e^{c(X_m,X_m+1)} phi(X_m) phi(X_m+1)^T,  B_n = sum phi(X_m) phi(X_m)^T
// and iterates r <- r + a(n) (B_n^-1 A_n r / max(phi(i0)^T r, eps) - r).
// The scalar trace phi(i0)^T r_n converges toward mu. Updates start once B_n
// becomes invertible.
struct LspeResult {
    Vec trace;  // phi(i0)^T r_n, one entry per step
    Vec r_final;
    long warmup_steps = 0;
};
LspeResult lspe_iterate(const RiskModel& model, double eps_floor, const StepSchedule& schedule,
                        long steps, std::uint64_t seed, const Vec& r0);

// One transition (i -> j) of the multiplicative-cost TD rule:
//   theta += a [ e^{c(i,j)} phi(j)^T theta / max(phi(i0)^T theta, eps) - phi(i)^T theta ] phi(i).
// Under Phi Phi^T = D^-1 the trace phi(i0)^T theta_n converges to lambda.
Vec risk_td_step(Vec theta, int i, int j, const RiskModel& model, double a_n, double eps_floor);

struct RiskTdResult {
    Vec trace;
    Vec theta_final;
};
RiskTdResult risk_td_iterate(const RiskModel& model, const Vec& theta0,
                             const StepSchedule& schedule, long steps, std::uint64_t seed,
                             double eps_floor = kDefaultEpsFloor);

// Feature matrix with Phi Phi^T = D^-1 for a doubly stochastic kernel
// (D^-1 = sI there): sqrt(s) times the standard basis.
Matrix doubly_stochastic_td_features(const RiskModel& model);

// Exact expected increment of the TD rule at theta, summed over (i, j).
Vec risk_td_expected_increment(const RiskModel& model, const Vec& theta, double eps_floor);

}  // namespace markov_sa::risk
