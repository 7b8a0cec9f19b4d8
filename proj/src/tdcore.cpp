#include "markov_sa/tdcore.hpp"

#include <cmath>
#include <stdexcept>

#include "markov_sa/errors.hpp"
#include "markov_sa/spectral.hpp"

namespace markov_sa::tdcore {

namespace {

double td_error(std::span<const double> theta, const ChainStep& step, const Matrix& features,
                double gamma) {
    const auto phi = features.row(step.t.state);
    const auto phi2 = features.row(step.t.next_state);
    return step.t.reward + gamma * dot(theta, phi2) - dot(theta, phi);
}

}  // namespace

bool exceeds_guard(const TdState& state) {
    for (double v : state.theta)
        if (!(std::abs(v) <= kDivergenceGuard)) return true;
    for (double v : state.w)
        if (!(std::abs(v) <= kDivergenceGuard)) return true;
    return false;
}

Vec td0_tabular_step(Vec values, const Transition& t, double alpha, double gamma) {
    const double delta = t.reward + gamma * values[t.next_state] - values[t.state];
    values[t.state] += alpha * delta;
    return values;
}

TdState linear_td0_step(TdState state, const ChainStep& step, const Matrix& features, double alpha,
                        double gamma) {
    const double delta = td_error(state.theta, step, features, gamma);
    axpy(alpha * delta, features.row(step.t.state), state.theta);
    ++state.step_index;
    return state;
}

TdState iw_td0_step(TdState state, const ChainStep& step, const Matrix& features, double alpha,
                    double gamma) {
    const double delta = td_error(state.theta, step, features, gamma);
    axpy(alpha * step.rho * delta, features.row(step.t.state), state.theta);
    ++state.step_index;
    return state;
}

TdState ontdc_step(TdState state, const ChainStep& step, const Matrix& features, double a_n,
                   double b_n, double gamma) {
    const auto phi = features.row(step.t.state);
    const auto phi2 = features.row(step.t.next_state);
    const double delta = td_error(state.theta, step, features, gamma);
    const double phi_w = dot(phi, state.w);

    axpy(a_n * step.rho * delta, phi, state.theta);
    axpy(-a_n * step.rho * gamma * phi_w, phi2, state.theta);
    axpy(b_n * (step.rho * delta - phi_w), phi, state.w);
    ++state.step_index;
    return state;
}

bool matches_target_argmax(const StochasticPolicy& target, int state, int action) {
    double best = 0.0;
    for (int a = 0; a < target.n_actions; ++a) best = std::max(best, target.prob(state, a));
    return target.prob(state, action) >= best - 1e-15;
}

TdState offtdc_step(TdState state, const ChainStep& step, const Matrix& features,
                    const StochasticPolicy& target, double a_n, double b_n, double gamma) {
    ++state.step_index;
    if (!matches_target_argmax(target, step.t.state, step.t.action)) return state;

    const auto phi = features.row(step.t.state);
    const auto phi2 = features.row(step.t.next_state);
    const double delta = td_error(state.theta, step, features, gamma);
    const double phi_w = dot(phi, state.w);

    axpy(a_n * delta, phi, state.theta);
    axpy(-a_n * gamma * phi_w, phi2, state.theta);
    axpy(b_n * (delta - phi_w), phi, state.w);
    return state;
}

TdState gtd_lambda_step(TdState state, const ChainStep& step, const Matrix& features, double a_n,
                        double b_n, double gamma, double trace_lambda) {
    if (!(trace_lambda >= 0.0 && trace_lambda <= 1.0))
        throw std::invalid_argument("gtd_lambda_step: trace_lambda must lie in [0,1]");
    const auto phi = features.row(step.t.state);
    const auto phi2 = features.row(step.t.next_state);
    const double delta = td_error(state.theta, step, features, gamma);
    const double phi_w = dot(phi, state.w);

    for (std::size_t i = 0; i < state.trace.size(); ++i)
        state.trace[i] = step.rho * (gamma * trace_lambda * state.trace[i] + phi[i]);
    const double trace_w = dot(state.trace, state.w);

    axpy(a_n * delta, state.trace, state.theta);
    axpy(-a_n * gamma * (1.0 - trace_lambda) * trace_w, phi2, state.theta);
    axpy(b_n * delta, state.trace, state.w);
    axpy(-b_n * phi_w, phi, state.w);
    ++state.step_index;
    return state;
}

FixedPoint::FixedPoint(const FiniteMdp& mdp, const StochasticPolicy& behavior,
                       const StochasticPolicy& target, const Matrix& features) {
    const int m = features.cols;
    const InducedChain chain = induced_chain(mdp, behavior);
    nu_ = spectral::stationary(chain.kernel);

    sys_.A = Matrix(m, m);
    sys_.C = Matrix(m, m);
    sys_.b.assign(m, 0.0);
    const double gamma = mdp.discount;
    for (int s = 0; s < mdp.n_states; ++s) {
        const auto phi = features.row(s);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) sys_.C(i, j) += nu_[s] * phi[i] * phi[j];
        for (int a = 0; a < mdp.n_actions; ++a) {
            const double pb = behavior.prob(s, a);
            if (pb == 0.0) continue;
            const double rho = target.prob(s, a) / pb;
            if (rho == 0.0) continue;
            for (int s2 = 0; s2 < mdp.n_states; ++s2) {
                const double w = nu_[s] * pb * mdp.p(s, a, s2) * rho;
                if (w == 0.0) continue;
                const auto phi2 = features.row(s2);
                for (int i = 0; i < m; ++i) {
                    sys_.b[i] += w * mdp.r(s, a, s2) * phi[i];
                    for (int j = 0; j < m; ++j)
                        sys_.A(i, j) += w * phi[i] * (phi[j] - gamma * phi2[j]);
                }
            }
        }
    }

    // With zero rewards b = 0 and theta* = 0 is the designated solution even
    // when the features are rank deficient and A is singular (the 7-star case).
    if (norm_linf(sys_.b) == 0.0) {
        theta_star_.assign(m, 0.0);
    } else {
        try {
            theta_star_ = spectral::solve_linear(sys_.A, sys_.b);
        } catch (const SingularMatrixError&) {
            throw SingularMatrixError("fixed_point: A is singular");
        }
    }
}

Vec FixedPoint::expected_update(std::span<const double> theta) const {
    Vec out = mat_vec(sys_.A, theta);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = sys_.b[i] - out[i];
    return out;
}

Vec FixedPoint::lambda_at(std::span<const double> theta) const {
    const Vec rhs = expected_update(theta);
    try {
        return spectral::solve_linear(sys_.C, rhs);
    } catch (const SingularMatrixError&) {
        if (norm_linf(rhs) == 0.0) return Vec(rhs.size(), 0.0);
        // C = E[phi phi^T] is symmetric PSD and the rhs is a combination of
        // feature vectors, so the system is consistent; CG from zero gives the
        // minimum-norm solution.
        return spectral::conjugate_gradient_solve(sys_.C, rhs);
    }
}

double mspbe(std::span<const double> theta, const FixedPointSystem& sys) {
    Vec resid = mat_vec(sys.A, theta);
    for (std::size_t i = 0; i < resid.size(); ++i) resid[i] = sys.b[i] - resid[i];
    Vec z;
    try {
        z = spectral::solve_linear(sys.C, resid);
    } catch (const SingularMatrixError&) {
        throw SingularMatrixError("mspbe: C is singular");
    }
    return dot(resid, z);
}

Vec mspbe_neg_half_gradient(std::span<const double> theta, const FixedPointSystem& sys) {
    Vec resid = mat_vec(sys.A, theta);
    for (std::size_t i = 0; i < resid.size(); ++i) resid[i] = sys.b[i] - resid[i];
    Vec w;
    try {
        w = spectral::solve_linear(sys.C, resid);
    } catch (const SingularMatrixError&) {
        throw SingularMatrixError("mspbe_neg_half_gradient: C is singular");
    }
    // gamma E[rho phi(Y) phi(X)^T] equals (C - A)^T because the rho-weighted
    // action marginal of the target policy integrates to one.
    const Matrix correction = mat_sub(sys.C, sys.A);
    Vec corr_w = tmat_vec(correction, w);
    Vec out(resid.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = resid[i] - corr_w[i];
    return out;
}

double rmse(std::span<const double> theta, const Matrix& features, std::span<const double> v_true,
            std::span<const double> weights) {
    const int n = features.rows;
    double acc = 0.0;
    for (int s = 0; s < n; ++s) {
        const double w = weights.empty() ? 1.0 / n : weights[s];
        const double err = dot(theta, features.row(s)) - v_true[s];
        acc += w * err * err;
    }
    return std::sqrt(acc);
}

}  // namespace markov_sa::tdcore
