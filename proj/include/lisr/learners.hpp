#pragma once

// Symbolic-reward (SR) learners: off-policy learners whose TD targets use the
// output of their own reward tree and never the environment reward.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lisr/envlab.hpp"
#include "lisr/neuronet.hpp"
#include "lisr/replay.hpp"
#include "lisr/rng.hpp"
#include "lisr/symtree.hpp"

namespace lisr::learn {

// What the reward tree sees: [s ; a] or [s ; a ; s'].
enum class FeatureLayout { StateAction, StateActionNext };

std::size_t feature_dim(FeatureLayout layout, std::size_t state_dim, std::size_t action_dim);
void build_features(FeatureLayout layout, const Transition& t, std::vector<double>& out);
std::vector<std::string> feature_names(FeatureLayout layout, const env::EnvSpec& spec);

struct RewardSanitizer {
    double clamp_bound = 10.0;
    double nonfinite_value = 0.0;

    double operator()(double raw) const;
};

struct LearnerParams {
    env::ActionKind kind = env::ActionKind::Discrete;
    std::size_t state_dim = 0;
    std::size_t action_dim = 1; // continuous width (1 for discrete)
    int n_actions = 0;          // discrete
    double action_low = -1.0;
    double action_high = 1.0;

    std::vector<std::size_t> hidden = {256, 256};
    double gamma = 0.99;
    double tau = 1e-3;
    double actor_lr = 1e-3;
    double critic_lr = 1e-3; // also the Q-head rate for discrete learners
    int heads = 2;           // discrete Q ensemble size

    FeatureLayout layout = FeatureLayout::StateActionNext;
    RewardSanitizer sanitizer;
    double explore_sigma = 0.1; // Gaussian noise std as a fraction of the action range
    double epsilon = 0.1;       // epsilon-greedy rate for discrete learners

    kernels::Exec exec = kernels::Exec::Serial;

    static LearnerParams for_env(const env::EnvSpec& spec);
};

struct LossReport {
    bool applied = false;
    std::vector<double> critic_losses; // one per critic / Q-head, before the step
    double actor_objective = 0.0;      // mean Q1(s, pi(s)) before the step (continuous)
    double mean_reward = 0.0;          // mean sanitized intrinsic reward of the batch
    bool diverged = false;             // some parameter became non-finite
};

// Loss value and its gradient with respect to the network parameters,
// accumulated into `grad`. Shared by the learners and the gradient checks.

// mean_i (target_i - Q(input_i))^2 for a single-output critic.
double critic_loss_grad(const nn::Mlp& critic, std::span<const double> inputs, std::span<const double> targets,
                        std::span<double> grad, kernels::Exec exec = kernels::Exec::Serial);

// -mean_i Q(s_i, scale(pi(s_i))), gradient with respect to the actor only.
double actor_loss_grad(const nn::Mlp& actor, const nn::Mlp& critic, std::span<const double> states,
                       std::size_t batch, double action_low, double action_high, std::span<double> grad,
                       kernels::Exec exec = kernels::Exec::Serial);

// mean_i (target_i - Q(s_i)[a_i])^2 for one Q-head with n_actions outputs.
double q_head_loss_grad(const nn::Mlp& head, std::span<const double> states, std::span<const int> actions,
                        std::span<const double> targets, std::span<double> grad,
                        kernels::Exec exec = kernels::Exec::Serial);

// Map a tanh output in [-1, 1] to [low, high].
double scale_action(double squashed, double low, double high);

class SrLearner {
public:
    SrLearner(LearnerParams params, symtree::SymTree tree, Rng& rng);

    const LearnerParams& params() const { return params_; }
    env::ActionKind kind() const { return params_.kind; }

    const symtree::SymTree& tree() const { return tree_; }
    void set_tree(symtree::SymTree tree);

    // Fresh random networks (and optimizer state); the tree is kept.
    void reinitialize(Rng& rng);

    double raw_reward(const Transition& t) const;
    double intrinsic_reward(const Transition& t) const;

    std::vector<double> td_targets(std::span<const Transition> batch) const;

    LossReport update(std::span<const Transition> batch);
    LossReport update_continuous(std::span<const Transition> batch);
    LossReport update_discrete(std::span<const Transition> batch);

    // random_phase: still inside the initial exploration window, act uniformly.
    std::vector<double> act(std::span<const double> state, bool explore, bool random_phase, Rng& rng) const;

    // Discrete: mean over heads of Q(s, .).
    std::vector<double> q_values(std::span<const double> state) const;

    bool all_finite() const;

    // Continuous: actor / actor_target, critics Q1, Q2 and their targets.
    // Discrete: actor unused, critics are the Q-heads.
    nn::Mlp& actor() { return actor_; }
    const nn::Mlp& actor() const { return actor_; }
    nn::Mlp& actor_target() { return actor_target_; }
    const nn::Mlp& actor_target() const { return actor_target_; }
    std::vector<nn::Mlp>& critics() { return critics_; }
    const std::vector<nn::Mlp>& critics() const { return critics_; }
    std::vector<nn::Mlp>& critic_targets() { return critic_targets_; }
    const std::vector<nn::Mlp>& critic_targets() const { return critic_targets_; }
    std::vector<nn::Adam>& critic_optimizers() { return critic_opt_; }
    const std::vector<nn::Adam>& critic_optimizers() const { return critic_opt_; }
    nn::Adam& actor_optimizer() { return actor_opt_; }
    const nn::Adam& actor_optimizer() const { return actor_opt_; }

private:
    void build_networks(Rng& rng);

    LearnerParams params_;
    symtree::SymTree tree_;
    nn::Mlp actor_;
    nn::Mlp actor_target_;
    std::vector<nn::Mlp> critics_;
    std::vector<nn::Mlp> critic_targets_;
    nn::Adam actor_opt_;
    std::vector<nn::Adam> critic_opt_;
};

} // namespace lisr::learn
