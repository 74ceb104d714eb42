#include "lisr/learners.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lisr/log.hpp"

namespace lisr::learn {

using nn::Activation;
using nn::Mlp;

std::size_t feature_dim(FeatureLayout layout, std::size_t state_dim, std::size_t action_dim)
{
    return layout == FeatureLayout::StateAction ? state_dim + action_dim : 2 * state_dim + action_dim;
}

void build_features(FeatureLayout layout, const Transition& t, std::vector<double>& out)
{
    out.clear();
    out.insert(out.end(), t.state.begin(), t.state.end());
    out.insert(out.end(), t.action.begin(), t.action.end());
    if (layout == FeatureLayout::StateActionNext) {
        out.insert(out.end(), t.next_state.begin(), t.next_state.end());
    }
}

std::vector<std::string> feature_names(FeatureLayout layout, const env::EnvSpec& spec)
{
    std::vector<std::string> names = spec.observation_names;
    if (spec.action_kind == env::ActionKind::Discrete) {
        names.emplace_back("action");
    } else {
        for (std::size_t i = 0; i < spec.action_dim; ++i) {
            names.push_back("action_" + std::to_string(i));
        }
    }
    if (layout == FeatureLayout::StateActionNext) {
        for (const auto& n : spec.observation_names) {
            names.push_back("next_" + n);
        }
    }
    return names;
}

double RewardSanitizer::operator()(double raw) const
{
    if (!std::isfinite(raw)) {
        return nonfinite_value;
    }
    return std::clamp(raw, -clamp_bound, clamp_bound);
}

LearnerParams LearnerParams::for_env(const env::EnvSpec& spec)
{
    LearnerParams p;
    p.kind = spec.action_kind;
    p.state_dim = spec.observation_dim;
    p.action_dim = spec.action_dim;
    p.n_actions = spec.n_actions;
    p.action_low = spec.action_low;
    p.action_high = spec.action_high;
    return p;
}

double scale_action(double squashed, double low, double high)
{
    return low + (squashed + 1.0) * 0.5 * (high - low);
}

// ---------------------------------------------------------------------------
// Losses

double critic_loss_grad(const Mlp& critic, std::span<const double> inputs, std::span<const double> targets,
                        std::span<double> grad, kernels::Exec exec)
{
    const std::size_t batch = targets.size();
    nn::Trace trace;
    nn::forward_batch(critic, inputs, batch, trace, exec);
    const auto q = trace.output();
    std::vector<double> dq(batch);
    double loss = 0.0;
    const double inv = 1.0 / static_cast<double>(batch);
    for (std::size_t i = 0; i < batch; ++i) {
        const double err = targets[i] - q[i];
        loss += err * err;
        dq[i] = -2.0 * err * inv;
    }
    nn::backward(critic, trace, dq, grad, exec);
    return loss * inv;
}

double actor_loss_grad(const Mlp& actor, const Mlp& critic, std::span<const double> states, std::size_t batch,
                       double action_low, double action_high, std::span<double> grad, kernels::Exec exec)
{
    const std::size_t sd = actor.input_dim();
    const std::size_t ad = actor.output_dim();
    nn::Trace actor_trace;
    nn::forward_batch(actor, states, batch, actor_trace, exec);
    const auto squashed = actor_trace.output();

    std::vector<double> critic_in(batch * (sd + ad));
    for (std::size_t i = 0; i < batch; ++i) {
        std::copy_n(states.begin() + static_cast<std::ptrdiff_t>(i * sd), sd, critic_in.begin() + static_cast<std::ptrdiff_t>(i * (sd + ad)));
        for (std::size_t k = 0; k < ad; ++k) {
            critic_in[i * (sd + ad) + sd + k] = scale_action(squashed[i * ad + k], action_low, action_high);
        }
    }
    nn::Trace critic_trace;
    nn::forward_batch(critic, critic_in, batch, critic_trace, exec);
    const auto q = critic_trace.output();

    const double inv = 1.0 / static_cast<double>(batch);
    double objective = 0.0;
    for (std::size_t i = 0; i < batch; ++i) {
        objective += q[i];
    }
    std::vector<double> dq(batch, -inv);
    std::vector<double> critic_grad_sink(critic.param_count(), 0.0);
    const auto dinput = nn::backward(critic, critic_trace, dq, critic_grad_sink, exec);

    const double dscale = 0.5 * (action_high - action_low);
    std::vector<double> dsquashed(batch * ad);
    for (std::size_t i = 0; i < batch; ++i) {
        for (std::size_t k = 0; k < ad; ++k) {
            dsquashed[i * ad + k] = dinput[i * (sd + ad) + sd + k] * dscale;
        }
    }
    nn::backward(actor, actor_trace, dsquashed, grad, exec);
    return -objective * inv;
}

double q_head_loss_grad(const Mlp& head, std::span<const double> states, std::span<const int> actions,
                        std::span<const double> targets, std::span<double> grad, kernels::Exec exec)
{
    const std::size_t batch = targets.size();
    const std::size_t na = head.output_dim();
    nn::Trace trace;
    nn::forward_batch(head, states, batch, trace, exec);
    const auto q = trace.output();
    std::vector<double> dq(batch * na, 0.0);
    const double inv = 1.0 / static_cast<double>(batch);
    double loss = 0.0;
    for (std::size_t i = 0; i < batch; ++i) {
        const auto a = static_cast<std::size_t>(actions[i]);
        const double err = targets[i] - q[i * na + a];
        loss += err * err;
        dq[i * na + a] = -2.0 * err * inv;
    }
    nn::backward(head, trace, dq, grad, exec);
    return loss * inv;
}

// ---------------------------------------------------------------------------
// Learner

SrLearner::SrLearner(LearnerParams params, symtree::SymTree tree, Rng& rng)
    : params_(std::move(params))
    , tree_(std::move(tree))
{
    if (params_.state_dim == 0) {
        throw std::invalid_argument("learner: state_dim must be positive");
    }
    if (params_.kind == env::ActionKind::Discrete && (params_.n_actions < 1 || params_.heads < 1)) {
        throw std::invalid_argument("learner: discrete learners need n_actions >= 1 and heads >= 1");
    }
    if (!(params_.gamma >= 0.0 && params_.gamma < 1.0)) {
        throw std::invalid_argument("learner: gamma must lie in [0, 1)");
    }
    set_tree(tree_);
    build_networks(rng);
}

void SrLearner::set_tree(symtree::SymTree tree)
{
    const auto want = feature_dim(params_.layout, params_.state_dim, params_.action_dim);
    if (static_cast<std::size_t>(tree.feature_dim()) != want) {
        throw std::invalid_argument("learner: tree feature dimension " + std::to_string(tree.feature_dim())
                                    + " does not match the feature layout (" + std::to_string(want) + ")");
    }
    tree_ = std::move(tree);
}

void SrLearner::build_networks(Rng& rng)
{
    const auto& h = params_.hidden;
    critics_.clear();
    critic_targets_.clear();
    critic_opt_.clear();
    if (params_.kind == env::ActionKind::Continuous) {
        std::vector<std::size_t> actor_sizes{params_.state_dim};
        actor_sizes.insert(actor_sizes.end(), h.begin(), h.end());
        actor_sizes.push_back(params_.action_dim);
        actor_ = Mlp::random(actor_sizes, Activation::Tanh, Activation::Tanh, rng);
        actor_target_ = actor_;
        actor_opt_ = nn::Adam(actor_.param_count());

        std::vector<std::size_t> critic_sizes{params_.state_dim + params_.action_dim};
        critic_sizes.insert(critic_sizes.end(), h.begin(), h.end());
        critic_sizes.push_back(1);
        for (int j = 0; j < 2; ++j) {
            critics_.push_back(Mlp::random(critic_sizes, Activation::Tanh, Activation::Identity, rng));
        }
    } else {
        actor_ = Mlp();
        actor_target_ = Mlp();
        actor_opt_ = nn::Adam();
        std::vector<std::size_t> q_sizes{params_.state_dim};
        q_sizes.insert(q_sizes.end(), h.begin(), h.end());
        q_sizes.push_back(static_cast<std::size_t>(params_.n_actions));
        for (int j = 0; j < params_.heads; ++j) {
            critics_.push_back(Mlp::random(q_sizes, Activation::Tanh, Activation::Identity, rng));
        }
    }
    critic_targets_ = critics_;
    for (const auto& c : critics_) {
        critic_opt_.emplace_back(c.param_count());
    }
}

void SrLearner::reinitialize(Rng& rng)
{
    build_networks(rng);
}

double SrLearner::raw_reward(const Transition& t) const
{
    std::vector<double> features;
    build_features(params_.layout, t, features);
    return symtree::evaluate(tree_, features);
}

double SrLearner::intrinsic_reward(const Transition& t) const
{
    return params_.sanitizer(raw_reward(t));
}

std::vector<double> SrLearner::td_targets(std::span<const Transition> batch) const
{
    const std::size_t n = batch.size();
    const std::size_t sd = params_.state_dim;
    std::vector<double> next(n * sd);
    for (std::size_t i = 0; i < n; ++i) {
        std::copy(batch[i].next_state.begin(), batch[i].next_state.end(), next.begin() + static_cast<std::ptrdiff_t>(i * sd));
    }
    std::vector<double> bootstrap(n, 0.0);
    if (params_.kind == env::ActionKind::Continuous) {
        const std::size_t ad = params_.action_dim;
        nn::Trace pi;
        nn::forward_batch(actor_target_, next, n, pi, params_.exec);
        std::vector<double> critic_in(n * (sd + ad));
        for (std::size_t i = 0; i < n; ++i) {
            std::copy_n(next.begin() + static_cast<std::ptrdiff_t>(i * sd), sd, critic_in.begin() + static_cast<std::ptrdiff_t>(i * (sd + ad)));
            for (std::size_t k = 0; k < ad; ++k) {
                critic_in[i * (sd + ad) + sd + k] = scale_action(pi.output()[i * ad + k], params_.action_low, params_.action_high);
            }
        }
        nn::Trace q1;
        nn::Trace q2;
        nn::forward_batch(critic_targets_[0], critic_in, n, q1, params_.exec);
        nn::forward_batch(critic_targets_[1], critic_in, n, q2, params_.exec);
        for (std::size_t i = 0; i < n; ++i) {
            bootstrap[i] = std::min(q1.output()[i], q2.output()[i]);
        }
    } else {
        const auto na = static_cast<std::size_t>(params_.n_actions);
        std::vector<double> mins(n * na, 0.0);
        nn::Trace q;
        for (std::size_t h = 0; h < critic_targets_.size(); ++h) {
            nn::forward_batch(critic_targets_[h], next, n, q, params_.exec);
            const auto out = q.output();
            for (std::size_t k = 0; k < n * na; ++k) {
                mins[k] = h == 0 ? out[k] : std::min(mins[k], out[k]);
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            bootstrap[i] = *std::max_element(mins.begin() + static_cast<std::ptrdiff_t>(i * na),
                                             mins.begin() + static_cast<std::ptrdiff_t>((i + 1) * na));
        }
    }
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = intrinsic_reward(batch[i]);
        y[i] = batch[i].done ? r : r + params_.gamma * bootstrap[i];
    }
    return y;
}

LossReport SrLearner::update(std::span<const Transition> batch)
{
    return params_.kind == env::ActionKind::Continuous ? update_continuous(batch) : update_discrete(batch);
}

LossReport SrLearner::update_continuous(std::span<const Transition> batch)
{
    if (params_.kind != env::ActionKind::Continuous) {
        throw std::logic_error("update_continuous called on a discrete learner");
    }
    if (batch.empty()) {
        throw std::invalid_argument("update on an empty batch");
    }
    LossReport report;
    const std::size_t n = batch.size();
    const std::size_t sd = params_.state_dim;
    const std::size_t ad = params_.action_dim;

    double reward_sum = 0.0;
    for (const auto& t : batch) {
        reward_sum += intrinsic_reward(t);
    }
    report.mean_reward = reward_sum / static_cast<double>(n);

    const auto y = td_targets(batch);
    std::vector<double> states(n * sd);
    std::vector<double> critic_in(n * (sd + ad));
    for (std::size_t i = 0; i < n; ++i) {
        std::copy(batch[i].state.begin(), batch[i].state.end(), states.begin() + static_cast<std::ptrdiff_t>(i * sd));
        std::copy(batch[i].state.begin(), batch[i].state.end(), critic_in.begin() + static_cast<std::ptrdiff_t>(i * (sd + ad)));
        std::copy(batch[i].action.begin(), batch[i].action.end(), critic_in.begin() + static_cast<std::ptrdiff_t>(i * (sd + ad) + sd));
    }

    std::vector<std::vector<double>> grads;
    for (const auto& critic : critics_) {
        grads.emplace_back(critic.param_count(), 0.0);
        report.critic_losses.push_back(critic_loss_grad(critic, critic_in, y, grads.back(), params_.exec));
    }
    if (!std::all_of(report.critic_losses.begin(), report.critic_losses.end(), [](double l) { return std::isfinite(l); })) {
        log_warn("continuous learner: non-finite critic loss, update skipped");
        return report;
    }
    for (std::size_t j = 0; j < critics_.size(); ++j) {
        if (!nn::adam_step(critics_[j], critic_opt_[j], grads[j], params_.critic_lr)) {
            log_warn("continuous learner: non-finite critic gradient, step skipped");
        }
    }

    std::vector<double> actor_grad(actor_.param_count(), 0.0);
    const double actor_loss = actor_loss_grad(actor_, critics_[0], states, n, params_.action_low,
                                              params_.action_high, actor_grad, params_.exec);
    report.actor_objective = -actor_loss;
    if (std::isfinite(actor_loss)) {
        if (!nn::adam_step(actor_, actor_opt_, actor_grad, params_.actor_lr)) {
            log_warn("continuous learner: non-finite actor gradient, step skipped");
        }
    } else {
        log_warn("continuous learner: non-finite actor objective, actor step skipped");
    }

    nn::soft_update(actor_target_, actor_, params_.tau);
    for (std::size_t j = 0; j < critics_.size(); ++j) {
        nn::soft_update(critic_targets_[j], critics_[j], params_.tau);
    }
    report.applied = true;
    report.diverged = !all_finite();
    return report;
}

LossReport SrLearner::update_discrete(std::span<const Transition> batch)
{
    if (params_.kind != env::ActionKind::Discrete) {
        throw std::logic_error("update_discrete called on a continuous learner");
    }
    if (batch.empty()) {
        throw std::invalid_argument("update on an empty batch");
    }
    LossReport report;
    const std::size_t n = batch.size();
    const std::size_t sd = params_.state_dim;

    double reward_sum = 0.0;
    for (const auto& t : batch) {
        reward_sum += intrinsic_reward(t);
    }
    report.mean_reward = reward_sum / static_cast<double>(n);

    const auto y = td_targets(batch);
    std::vector<double> states(n * sd);
    std::vector<int> actions(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::copy(batch[i].state.begin(), batch[i].state.end(), states.begin() + static_cast<std::ptrdiff_t>(i * sd));
        const auto a = static_cast<int>(batch[i].action.at(0));
        if (a < 0 || a >= params_.n_actions) {
            throw std::invalid_argument("update_discrete: action index out of range");
        }
        actions[i] = a;
    }

    std::vector<std::vector<double>> grads;
    for (const auto& head : critics_) {
        grads.emplace_back(head.param_count(), 0.0);
        report.critic_losses.push_back(q_head_loss_grad(head, states, actions, y, grads.back(), params_.exec));
    }
    if (!std::all_of(report.critic_losses.begin(), report.critic_losses.end(), [](double l) { return std::isfinite(l); })) {
        log_warn("discrete learner: non-finite Q loss, update skipped");
        return report;
    }
    for (std::size_t h = 0; h < critics_.size(); ++h) {
        if (!nn::adam_step(critics_[h], critic_opt_[h], grads[h], params_.critic_lr)) {
            log_warn("discrete learner: non-finite Q gradient, step skipped");
        }
        nn::soft_update(critic_targets_[h], critics_[h], params_.tau);
    }
    report.applied = true;
    report.diverged = !all_finite();
    return report;
}

std::vector<double> SrLearner::q_values(std::span<const double> state) const
{
    std::vector<double> mean(static_cast<std::size_t>(params_.n_actions), 0.0);
    for (const auto& head : critics_) {
        const auto q = nn::forward(head, state);
        for (std::size_t a = 0; a < mean.size(); ++a) {
            mean[a] += q[a];
        }
    }
    for (double& v : mean) {
        v /= static_cast<double>(critics_.size());
    }
    return mean;
}

std::vector<double> SrLearner::act(std::span<const double> state, bool explore, bool random_phase, Rng& rng) const
{
    if (params_.kind == env::ActionKind::Continuous) {
        std::vector<double> a(params_.action_dim);
        if (random_phase) {
            std::uniform_real_distribution<double> u(params_.action_low, params_.action_high);
            for (double& v : a) {
                v = u(rng);
            }
            return a;
        }
        const auto squashed = nn::forward(actor_, state);
        const double sigma = params_.explore_sigma * (params_.action_high - params_.action_low);
        for (std::size_t k = 0; k < a.size(); ++k) {
            a[k] = scale_action(squashed[k], params_.action_low, params_.action_high);
            if (explore) {
                a[k] = std::clamp(a[k] + normal(rng, sigma), params_.action_low, params_.action_high);
            }
        }
        return a;
    }
    const auto na = static_cast<std::size_t>(params_.n_actions);
    if (random_phase || (explore && uniform01(rng) < params_.epsilon)) {
        return {static_cast<double>(uniform_index(rng, na))};
    }
    const auto q = q_values(state);
    return {static_cast<double>(std::max_element(q.begin(), q.end()) - q.begin())};
}

bool SrLearner::all_finite() const
{
    if (params_.kind == env::ActionKind::Continuous && (!actor_.all_finite() || !actor_target_.all_finite())) {
        return false;
    }
    for (const auto& c : critics_) {
        if (!c.all_finite()) {
            return false;
        }
    }
    for (const auto& c : critic_targets_) {
        if (!c.all_finite()) {
            return false;
        }
    }
    return true;
}

} // namespace lisr::learn
