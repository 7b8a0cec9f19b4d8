#pragma once

#include "markov_sa/matrix.hpp"
#include "markov_sa/mdp.hpp"

namespace markov_sa::tdcore {

// Slow iterate theta, fast iterate w, and the eligibility trace. w and trace
// are empty for single-timescale algorithms.
struct TdState {
    Vec theta;
    Vec w;
    Vec trace;
    long step_index = 0;
};

// Exact A, b, C of the expected update: A = E[rho phi(X)(phi(X)-gamma phi(Y))^T],
// b = E[rho R phi(X)], C = E[phi(X) phi(X)^T], all under the stationary law of
// the behavior chain.
struct FixedPointSystem {
    Matrix A;
    Vec b;
    Matrix C;
};

// Iterate magnitude at which a run is declared divergent instead of letting
// values overflow (TD(0) on the 7-star example genuinely diverges).
inline constexpr double kDivergenceGuard = 1e12;

bool exceeds_guard(const TdState& state);

// Tabular TD(0): only V(s) moves, by alpha*(r + gamma V(s') - V(s)).
Vec td0_tabular_step(Vec values, const Transition& t, double alpha, double gamma);

// On-policy linear TD(0) applied verbatim to whatever trajectory it is given;
// the importance weight of the step is ignored.
TdState linear_td0_step(TdState state, const ChainStep& step, const Matrix& features, double alpha,
                        double gamma);

// Linear TD(0) with the whole update weighted by rho. This is the
// single-timescale baseline the gradient correction exists to fix, and the one
// that diverges off-policy.
TdState iw_td0_step(TdState state, const ChainStep& step, const Matrix& features, double alpha,
                    double gamma);

// Gradient-corrected TD with importance weighting, both iterates advanced
// simultaneously from the old values:
//   theta += a * rho * (delta(theta) phi - gamma phi' (phi^T w))
//   w     += b * ((rho delta(theta) - phi^T w) phi)
TdState ontdc_step(TdState state, const ChainStep& step, const Matrix& features, double a_n,
                   double b_n, double gamma);

// Sub-sampled variant: rho is replaced by the indicator that the realized
// action is one of the target policy's maximal-probability actions, and no
// rho appears inside the delta weighting.
TdState offtdc_step(TdState state, const ChainStep& step, const Matrix& features,
                    const StochasticPolicy& target, double a_n, double b_n, double gamma);

bool matches_target_argmax(const StochasticPolicy& target, int state, int action);

// Gradient-corrected TD with eligibility traces:
//   e     <- rho (gamma lambda e + phi)
//   theta += a (delta e - gamma (1-lambda) (e^T w) phi')
//   w     += b (delta e - (phi^T w) phi)
// With lambda = 0 this reduces step-for-step to ontdc_step.
TdState gtd_lambda_step(TdState state, const ChainStep& step, const Matrix& features, double a_n,
                        double b_n, double gamma, double trace_lambda);

// The exact fixed point of the expected update, assembled by summation over
// (s, a, s') against the stationary distribution of the behavior chain.
class FixedPoint {
  public:
    FixedPoint(const FiniteMdp& mdp, const StochasticPolicy& behavior,
               const StochasticPolicy& target, const Matrix& features);

    const FixedPointSystem& system() const { return sys_; }
    const Vec& theta_star() const { return theta_star_; }
    const Vec& stationary() const { return nu_; }

    // Fast-timescale attractor lambda(theta) = C^-1 E[rho delta(theta) phi].
    // When C is singular but the system is consistent (features lack full
    // column rank; the rhs still lies in range(C)) the minimum-norm solution
    // is returned, which is what the fast iterate tracks from w0 = 0.
    Vec lambda_at(std::span<const double> theta) const;

    // E[rho delta(theta) phi] = b - A theta.
    Vec expected_update(std::span<const double> theta) const;

  private:
    FixedPointSystem sys_;
    Vec theta_star_;
    Vec nu_;
};

// MSPBE J(theta) = (b - A theta)^T C^-1 (b - A theta).
double mspbe(std::span<const double> theta, const FixedPointSystem& sys);

// -1/2 grad J = E[rho delta phi] - gamma E[rho phi(Y) phi(X)^T] w(theta) with
// w(theta) = C^-1 (b - A theta). Uses gamma E[rho phi(Y) phi(X)^T] = (C - A)^T.
Vec mspbe_neg_half_gradient(std::span<const double> theta, const FixedPointSystem& sys);

// sqrt(sum_s w_s (phi(s)^T theta - V_true(s))^2); uniform weights by default.
double rmse(std::span<const double> theta, const Matrix& features, std::span<const double> v_true,
            std::span<const double> weights = {});

}  // namespace markov_sa::tdcore
