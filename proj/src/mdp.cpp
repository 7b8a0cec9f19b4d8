#include "markov_sa/mdp.hpp"

#include <cmath>
#include <stdexcept>

#include "markov_sa/errors.hpp"

namespace markov_sa {

FiniteMdp FiniteMdp::zeros(int n_states, int n_actions, double discount) {
    FiniteMdp m;
    m.n_states = n_states;
    m.n_actions = n_actions;
    m.discount = discount;
    m.kernel.assign(static_cast<std::size_t>(n_states) * n_actions * n_states, 0.0);
    m.reward.assign(static_cast<std::size_t>(n_states) * n_actions * n_states, 0.0);
    return m;
}

void FiniteMdp::validate() const {
    if (n_states < 1 || n_actions < 1) throw ConfigError("mdp", "needs at least one state and action");
    if (!(discount >= 0.0 && discount < 1.0)) throw ConfigError("mdp.discount", "must lie in [0,1)");
    for (int s = 0; s < n_states; ++s) {
        for (int a = 0; a < n_actions; ++a) {
            double sum = 0.0;
            for (int s2 = 0; s2 < n_states; ++s2) {
                const double v = p(s, a, s2);
                if (v < 0.0 || !std::isfinite(v))
                    throw ConfigError("mdp.kernel", "entries must be finite and nonnegative");
                sum += v;
            }
            if (std::abs(sum - 1.0) > 1e-12)
                throw ConfigError("mdp.kernel", "rows must sum to 1 within 1e-12");
        }
    }
    for (double v : reward)
        if (!std::isfinite(v)) throw ConfigError("mdp.reward", "entries must be finite");
}

StochasticPolicy StochasticPolicy::uniform(int n_states, int n_actions) {
    StochasticPolicy p;
    p.n_states = n_states;
    p.n_actions = n_actions;
    p.probs.assign(static_cast<std::size_t>(n_states) * n_actions, 1.0 / n_actions);
    return p;
}

void StochasticPolicy::validate(bool fully_supported) const {
    for (int s = 0; s < n_states; ++s) {
        double sum = 0.0;
        for (int a = 0; a < n_actions; ++a) {
            const double v = prob(s, a);
            if (v < 0.0 || !std::isfinite(v))
                throw ConfigError("policy", "probabilities must be finite and nonnegative");
            if (fully_supported && v <= 0.0)
                throw ConfigError("policy", "behavior policy must put positive mass on every action");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw ConfigError("policy", "rows must sum to 1 within 1e-12");
    }
}

ChainSampler::ChainSampler(const FiniteMdp& mdp, const StochasticPolicy& behavior,
                           const StochasticPolicy& target, int start, std::uint64_t seed)
    : mdp_(mdp), behavior_(behavior), target_(target), state_(start), rng_(seed) {
    if (start < 0 || start >= mdp.n_states)
        throw std::out_of_range("simulate: start state out of range");
}

ChainStep ChainSampler::next() {
    const int s = state_;
    const int a = rng_.sample(behavior_.row(s));
    const int s2 = rng_.sample(mdp_.kernel_row(s, a));
    ChainStep step;
    step.t = {s, a, mdp_.r(s, a, s2), s2};
    step.rho = target_.prob(s, a) / behavior_.prob(s, a);
    state_ = s2;
    return step;
}

std::vector<ChainStep> simulate(const FiniteMdp& mdp, const StochasticPolicy& behavior,
                                const StochasticPolicy& target, int start, long steps,
                                std::uint64_t seed) {
    ChainSampler sampler(mdp, behavior, target, start, seed);
    std::vector<ChainStep> out;
    out.reserve(static_cast<std::size_t>(steps));
    for (long i = 0; i < steps; ++i) out.push_back(sampler.next());
    return out;
}

InducedChain induced_chain(const FiniteMdp& mdp, const StochasticPolicy& policy) {
    InducedChain out;
    out.kernel = Matrix(mdp.n_states, mdp.n_states);
    out.reward.assign(mdp.n_states, 0.0);
    for (int s = 0; s < mdp.n_states; ++s) {
        for (int a = 0; a < mdp.n_actions; ++a) {
            const double pa = policy.prob(s, a);
            if (pa == 0.0) continue;
            for (int s2 = 0; s2 < mdp.n_states; ++s2) {
                const double w = pa * mdp.p(s, a, s2);
                out.kernel(s, s2) += w;
                out.reward[s] += w * mdp.r(s, a, s2);
            }
        }
    }
    return out;
}

Environment baird_env() {
    constexpr int kStates = 7;
    constexpr int kActions = 2;  // 0 = solid, 1 = dotted
    Environment env;
    env.name = "baird";
    env.mdp = FiniteMdp::zeros(kStates, kActions, 0.99);
    for (int s = 0; s < kStates; ++s) {
        env.mdp.p(s, 0, 6) = 1.0;
        for (int s2 = 0; s2 < 6; ++s2) env.mdp.p(s, 1, s2) = 1.0 / 6.0;
    }

    env.behavior.n_states = kStates;
    env.behavior.n_actions = kActions;
    env.behavior.probs.assign(kStates * kActions, 0.0);
    env.target = env.behavior;
    for (int s = 0; s < kStates; ++s) {
        env.behavior.prob(s, 0) = 1.0 / 7.0;
        env.behavior.prob(s, 1) = 6.0 / 7.0;
        env.target.prob(s, 0) = 1.0;
    }

    env.features = Matrix(kStates, 8);
    for (int i = 0; i < 6; ++i) {
        env.features(i, i) = 2.0;
        env.features(i, 7) = 1.0;
    }
    env.features(6, 6) = 1.0;
    env.features(6, 7) = 2.0;

    env.theta_init = {1, 1, 1, 1, 1, 1, 10, 1};
    env.w_init.assign(8, 0.0);
    return env;
}

Environment theta_two_theta_env(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("theta_two_theta_env: p must lie in (0,1)");
    constexpr int kStates = 2;
    constexpr int kActions = 2;  // 0 = stay, 1 = move
    Environment env;
    env.name = "theta2theta";
    env.mdp = FiniteMdp::zeros(kStates, kActions, 0.99);
    for (int s = 0; s < kStates; ++s) {
        env.mdp.p(s, 0, s) = 1.0;
        env.mdp.p(s, 1, 1 - s) = 1.0;
    }

    // The behavior takes the state-2-reaching action (the target's action)
    // with probability p in each state; p = 1/2 is the symmetric base case
    // where it stays or moves with equal probability.
    env.behavior.n_states = kStates;
    env.behavior.n_actions = kActions;
    env.behavior.probs = {1.0 - p, p,   // state 1: move reaches state 2
                          p, 1.0 - p};  // state 2: stay reaches state 2
    env.target.n_states = kStates;
    env.target.n_actions = kActions;
    env.target.probs = {0.0, 1.0,   // state 1: move to state 2
                        1.0, 0.0};  // state 2: stay

    env.features = Matrix(kStates, 1);
    env.features(0, 0) = 1.0;
    env.features(1, 0) = 2.0;
    env.theta_init = {1.0};
    env.w_init = {0.0};
    return env;
}

FiniteMdp random_mdp(int n_states, int n_actions, std::uint64_t seed, double discount) {
    if (n_states < 2) throw std::invalid_argument("random_mdp: needs at least two states");
    FiniteMdp m = FiniteMdp::zeros(n_states, n_actions, discount);
    Rng rng(seed);
    for (int s = 0; s < n_states; ++s) {
        for (int a = 0; a < n_actions; ++a) {
            double sum = 0.0;
            for (int s2 = 0; s2 < n_states; ++s2) {
                const double v = rng.uniform(0.05, 1.0);
                m.p(s, a, s2) = v;
                sum += v;
            }
            for (int s2 = 0; s2 < n_states; ++s2) m.p(s, a, s2) /= sum;
            for (int s2 = 0; s2 < n_states; ++s2) m.r(s, a, s2) = rng.next_double();
        }
    }
    return m;
}

}  // namespace markov_sa
