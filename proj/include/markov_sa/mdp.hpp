#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "markov_sa/matrix.hpp"
#include "markov_sa/rng.hpp"

namespace markov_sa {

// Finite MDP with expected rewards r(s,a,s') and kernel p(s'|s,a).
// Rewards are deterministic conditional on (s,a,s'); both benchmark
// environments have zero rewards anyway.
struct FiniteMdp {
    int n_states = 0;
    int n_actions = 0;
    Vec kernel;  // [s][a][s']
    Vec reward;  // [s][a][s']
    double discount = 0.0;

    double p(int s, int a, int s2) const {
        return kernel[(static_cast<std::size_t>(s) * n_actions + a) * n_states + s2];
    }
    double& p(int s, int a, int s2) {
        return kernel[(static_cast<std::size_t>(s) * n_actions + a) * n_states + s2];
    }
    double r(int s, int a, int s2) const {
        return reward[(static_cast<std::size_t>(s) * n_actions + a) * n_states + s2];
    }
    double& r(int s, int a, int s2) {
        return reward[(static_cast<std::size_t>(s) * n_actions + a) * n_states + s2];
    }
    std::span<const double> kernel_row(int s, int a) const {
        return {kernel.data() + (static_cast<std::size_t>(s) * n_actions + a) * n_states,
                static_cast<std::size_t>(n_states)};
    }

    static FiniteMdp zeros(int n_states, int n_actions, double discount);
    // Kernel rows sum to 1 within 1e-12, discount in [0,1). Throws ConfigError.
    void validate() const;
};

struct StochasticPolicy {
    int n_states = 0;
    int n_actions = 0;
    Vec probs;  // [s][a]

    double prob(int s, int a) const { return probs[static_cast<std::size_t>(s) * n_actions + a]; }
    double& prob(int s, int a) { return probs[static_cast<std::size_t>(s) * n_actions + a]; }
    std::span<const double> row(int s) const {
        return {probs.data() + static_cast<std::size_t>(s) * n_actions,
                static_cast<std::size_t>(n_actions)};
    }

    static StochasticPolicy uniform(int n_states, int n_actions);
    // fully_supported additionally requires every probability > 0 (behavior policies).
    void validate(bool fully_supported) const;
};

struct Transition {
    int state = 0;
    int action = 0;
    double reward = 0.0;
    int next_state = 0;
};

// One step of the induced behavior chain together with the importance weight
// rho = target(a|s) / behavior(a|s).
struct ChainStep {
    Transition t;
    double rho = 0.0;
};

// Everything an experiment needs: the MDP, both policies, the feature matrix
// (one row per state), and the shipped initial parameters.
struct Environment {
    std::string name;
    FiniteMdp mdp;
    StochasticPolicy behavior;
    StochasticPolicy target;
    Matrix features;  // n_states x M
    Vec theta_init;
    Vec w_init;
};

// Samples (s, a, r, s') steps under the behavior policy; used both by
// simulate() and by the experiment runner so the two stay bit-identical.
class ChainSampler {
  public:
    ChainSampler(const FiniteMdp& mdp, const StochasticPolicy& behavior,
                 const StochasticPolicy& target, int start, std::uint64_t seed);
    ChainStep next();
    int state() const { return state_; }

  private:
    const FiniteMdp& mdp_;
    const StochasticPolicy& behavior_;
    const StochasticPolicy& target_;
    int state_;
    Rng rng_;
};

std::vector<ChainStep> simulate(const FiniteMdp& mdp, const StochasticPolicy& behavior,
                                const StochasticPolicy& target, int start, long steps,
                                std::uint64_t seed);

// State-to-state kernel and per-state expected one-step reward under a policy.
struct InducedChain {
    Matrix kernel;  // P(s'|s)
    Vec reward;     // E[R | s]
};
InducedChain induced_chain(const FiniteMdp& mdp, const StochasticPolicy& policy);

// The 7-star counterexample: two actions (solid jumps to state 7, dotted moves
// uniformly over states 1-6), all rewards zero, discount 0.99, behavior picks
// solid with probability 1/7, target always picks solid. Features are 8-dim:
// V(i) = 2 theta(i) + theta_8 for i <= 6 and V(7) = theta(7) + 2 theta_8.
Environment baird_env();

// Two-state problem whose state values are theta and 2*theta. The behavior
// policy stays with probability p and moves otherwise; the target always takes
// the action that reaches state 2.
Environment theta_two_theta_env(double p = 0.5);

// Strictly positive kernel rows (hence irreducible and aperiodic), rewards
// uniform in [0,1]; bit-identical for a given seed.
FiniteMdp random_mdp(int n_states, int n_actions, std::uint64_t seed, double discount = 0.9);

}  // namespace markov_sa
