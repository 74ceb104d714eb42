#include "lisr/evolution.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "lisr/log.hpp"

namespace lisr::evo {

namespace fs = std::filesystem;

// Stream tags for derive_rng(seed, {generation, tag, ...}).
namespace stream {
constexpr std::uint64_t kInit = 100;
constexpr std::uint64_t kEaSelect = 2;
constexpr std::uint64_t kTrain = 3;
constexpr std::uint64_t kReinit = 4;
constexpr std::uint64_t kTrees = 5;
constexpr std::uint64_t kEnv = 10;
constexpr std::uint64_t kPolicy = 11;
} // namespace stream

Rollout rollout(const Policy& policy, env::Environment& env, Rng& rng, int episodes)
{
    if (episodes < 1) {
        throw std::invalid_argument("rollout needs at least one episode");
    }
    Rollout out;
    double total = 0.0;
    for (int ep = 0; ep < episodes; ++ep) {
        auto obs = env.reset(rng);
        for (;;) {
            auto action = policy(obs);
            auto step = env.step(action);
            total += step.reward;
            ++out.score.steps;
            Transition t;
            t.state = std::move(obs);
            t.action = std::move(action);
            t.env_reward = step.reward;
            t.next_state = step.observation;
            t.done = step.done && !step.truncated;
            out.transitions.push_back(std::move(t));
            obs = std::move(step.observation);
            if (step.done) {
                break;
            }
        }
    }
    out.score.episodes = episodes;
    out.score.value = total / episodes;
    return out;
}

FitnessScore evaluate(const Policy& policy, env::Environment& env, ReplayBuffer& buffer, Rng& rng, int episodes)
{
    if (episodes < 1) {
        throw std::invalid_argument("evaluate needs at least one episode");
    }
    FitnessScore score;
    double total = 0.0;
    for (int ep = 0; ep < episodes; ++ep) {
        auto obs = env.reset(rng);
        for (;;) {
            auto action = policy(obs);
            auto step = env.step(action);
            total += step.reward;
            ++score.steps;
            buffer.append(Transition{obs, action, step.reward, step.observation, step.done && !step.truncated});
            obs = std::move(step.observation);
            if (step.done) {
                break;
            }
        }
    }
    score.episodes = episodes;
    score.value = total / episodes;
    return score;
}

std::vector<double> genome_action(const nn::Mlp& genome, const env::EnvSpec& spec, std::span<const double> obs)
{
    const auto out = nn::forward(genome, obs);
    if (spec.action_kind == env::ActionKind::Discrete) {
        return {static_cast<double>(std::max_element(out.begin(), out.end()) - out.begin())};
    }
    std::vector<double> a(out.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        a[k] = learn::scale_action(out[k], spec.action_low, spec.action_high);
    }
    return a;
}

std::size_t elite_count(std::size_t k, double fraction)
{
    if (k == 0) {
        return 0;
    }
    const auto e = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(k) - 1e-12));
    return std::clamp<std::size_t>(e, 1, k);
}

std::size_t tournament(std::span<const double> fitness, std::size_t size, Rng& rng)
{
    if (fitness.empty() || size == 0) {
        throw std::invalid_argument("tournament needs candidates and a positive size");
    }
    std::size_t best = uniform_index(rng, fitness.size());
    for (std::size_t k = 1; k < size; ++k) {
        const std::size_t c = uniform_index(rng, fitness.size());
        if (fitness[c] > fitness[best] || (fitness[c] == fitness[best] && c < best)) {
            best = c;
        }
    }
    return best;
}

std::vector<std::size_t> rank_descending(std::span<const double> fitness)
{
    std::vector<std::size_t> order(fitness.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fitness[a] > fitness[b]; });
    return order;
}

std::vector<nn::Mlp> rank_and_select_ea(std::span<const nn::Mlp> population, std::span<const double> fitness,
                                        const EaParams& params, Rng& rng, EaStats* stats)
{
    if (population.size() != fitness.size()) {
        throw std::invalid_argument("rank_and_select_ea: one fitness per actor required");
    }
    const std::size_t k = population.size();
    if (k == 0) {
        return {};
    }
    const auto order = rank_descending(fitness);
    const std::size_t e = elite_count(k, params.elite_fraction);
    const std::size_t rest = k - e;

    std::vector<nn::Mlp> next;
    next.reserve(k);
    for (std::size_t i = 0; i < e; ++i) {
        next.push_back(population[order[i]]);
    }

    EaStats local;
    std::vector<nn::Mlp> selected;
    selected.reserve(rest);
    const auto by_crossover = static_cast<std::size_t>(std::floor(params.crossover_fraction * static_cast<double>(rest)));
    const std::size_t by_tournament = std::max<std::size_t>(rest - std::min(by_crossover, rest), rest > 0 ? 1 : 0);
    for (std::size_t i = 0; i < by_tournament; ++i) {
        selected.push_back(population[tournament(fitness, params.tournament_size, rng)]);
        ++local.tournament_picks;
    }
    while (selected.size() < rest) {
        const nn::Mlp& elite = next[uniform_index(rng, e)];
        const nn::Mlp& partner = selected[uniform_index(rng, selected.size())];
        selected.push_back(nn::crossover_genomes(elite, partner, rng));
        ++local.crossovers;
    }
    for (auto& actor : selected) {
        if (uniform01(rng) < params.mutation.mut_prob) {
            nn::mutate_genome(actor, params.mutation, rng);
            ++local.mutations;
        }
    }
    for (auto& actor : selected) {
        next.push_back(std::move(actor));
    }
    if (stats) {
        *stats = local;
    }
    return next;
}

std::vector<symtree::SymTree> evolve_sr_portfolio(std::span<const symtree::SymTree> trees,
                                                  std::span<const double> scores, const TreeEvoParams& params,
                                                  Rng& rng, TreeEvoStats* stats)
{
    if (trees.size() != scores.size()) {
        throw std::invalid_argument("evolve_sr_portfolio: one score per learner required");
    }
    const std::size_t m = trees.size();
    std::vector<symtree::SymTree> next(trees.begin(), trees.end());
    if (m == 0) {
        return next;
    }
    const auto order = rank_descending(scores);
    const std::size_t j = elite_count(m, params.elite_fraction);

    TreeEvoStats local;
    local.elite_slots.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(j));
    std::vector<std::size_t> parents;
    for (std::size_t i = j; i < m; ++i) {
        parents.push_back(tournament(scores, params.tournament_size, rng));
    }
    for (std::size_t i = j; i < m; ++i) {
        const std::size_t slot = order[i];
        const symtree::SymTree& parent = trees[parents[i - j]];
        if ((i - j) % 2 == 0) {
            const symtree::SymTree& elite = trees[order[uniform_index(rng, j)]];
            next[slot] = symtree::crossover_trees(elite, parent, params.max_depth, rng);
            ++local.crossovers;
        } else {
            next[slot] = symtree::mutate_tree(parent, params.max_depth, rng, params.grow);
            ++local.mutations;
        }
    }
    if (stats) {
        *stats = std::move(local);
    }
    return next;
}

std::size_t select_champion(std::span<const double> ea_fitness, std::span<const double> sr_fitness)
{
    if (ea_fitness.empty() && sr_fitness.empty()) {
        throw std::invalid_argument("select_champion: no evaluated individuals");
    }
    std::size_t best = 0;
    double best_fit = -std::numeric_limits<double>::infinity();
    bool found = false;
    const std::size_t total = ea_fitness.size() + sr_fitness.size();
    for (std::size_t id = 0; id < total; ++id) {
        const double f = id < ea_fitness.size() ? ea_fitness[id] : sr_fitness[id - ea_fitness.size()];
        if (!found || f > best_fit) {
            best = id;
            best_fit = f;
            found = true;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Orchestrator

Lisr::Lisr(LisrParams params, std::unique_ptr<env::Environment> prototype)
    : params_(std::move(params))
    , prototype_(std::move(prototype))
    , buffer_(params_.buffer_capacity, prototype_->spec().observation_dim, prototype_->spec().action_dim)
{
    const auto& spec = prototype_->spec();
    if (params_.k_ea + params_.k_sr == 0) {
        throw std::invalid_argument("population is empty");
    }
    if (params_.batch_size == 0) {
        throw std::invalid_argument("batch_size must be positive");
    }
    if (params_.episodes_per_eval < 1) {
        throw std::invalid_argument("episodes_per_eval must be at least 1");
    }

    auto lp = params_.learner;
    const auto defaults = learn::LearnerParams::for_env(spec);
    lp.kind = defaults.kind;
    lp.state_dim = defaults.state_dim;
    lp.action_dim = defaults.action_dim;
    lp.n_actions = defaults.n_actions;
    lp.action_low = defaults.action_low;
    lp.action_high = defaults.action_high;
    params_.learner = lp;

    Rng rng = derive_rng(params_.seed, {0, stream::kInit});
    std::vector<std::size_t> sizes{spec.observation_dim};
    sizes.insert(sizes.end(), params_.ea_hidden.begin(), params_.ea_hidden.end());
    const bool discrete = spec.action_kind == env::ActionKind::Discrete;
    sizes.push_back(discrete ? static_cast<std::size_t>(spec.n_actions) : spec.action_dim);
    for (std::size_t i = 0; i < params_.k_ea; ++i) {
        ea_.push_back(nn::Mlp::random(sizes, nn::Activation::Tanh,
                                      discrete ? nn::Activation::Identity : nn::Activation::Tanh, rng));
    }
    const auto fdim = static_cast<int>(learn::feature_dim(lp.layout, lp.state_dim, lp.action_dim));
    for (std::size_t l = 0; l < params_.k_sr; ++l) {
        auto tree = symtree::random_tree(fdim, params_.trees.max_depth, rng, params_.trees.grow);
        learners_.emplace_back(lp, std::move(tree), rng);
    }
}

Policy Lisr::ea_policy(std::size_t index) const
{
    const nn::Mlp* genome = &ea_.at(index);
    const env::EnvSpec* spec = &prototype_->spec();
    return [genome, spec](std::span<const double> obs) { return genome_action(*genome, *spec, obs); };
}

Policy Lisr::sr_policy(std::size_t index, bool explore, bool random_phase, Rng& rng) const
{
    const learn::SrLearner* learner = &learners_.at(index);
    Rng* r = &rng;
    return [learner, explore, random_phase, r](std::span<const double> obs) {
        return learner->act(obs, explore, random_phase, *r);
    };
}

std::vector<Rollout> Lisr::evaluate_ea()
{
    std::vector<Rollout> out(ea_.size());
    const auto n = static_cast<long>(ea_.size());
#pragma omp parallel for schedule(dynamic) if (params_.parallel)
    for (long i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        auto env = prototype_->clone();
        // Every individual sees the same episode randomness in a generation.
        Rng env_rng = derive_rng(params_.seed, {static_cast<std::uint64_t>(generation_), stream::kEnv});
        out[idx] = rollout(ea_policy(idx), *env, env_rng, params_.episodes_per_eval);
    }
    return out;
}

std::vector<Rollout> Lisr::evaluate_sr()
{
    std::vector<Rollout> out(learners_.size());
    const bool random_phase = frames_ < params_.exploration_steps;
    const auto n = static_cast<long>(learners_.size());
#pragma omp parallel for schedule(dynamic) if (params_.parallel)
    for (long i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        auto env = prototype_->clone();
        Rng env_rng = derive_rng(params_.seed, {static_cast<std::uint64_t>(generation_), stream::kEnv});
        Rng policy_rng = derive_rng(params_.seed, {static_cast<std::uint64_t>(generation_), stream::kPolicy, idx});
        out[idx] = rollout(sr_policy(idx, params_.sr_explore_during_eval, random_phase, policy_rng), *env, env_rng,
                           params_.episodes_per_eval);
    }
    return out;
}

void Lisr::train_learners(std::size_t new_transitions, GenerationRecord& record)
{
    if (learners_.empty() || buffer_.size() < params_.batch_size) {
        return;
    }
    const std::size_t n_updates = params_.updates_per_generation > 0
        ? params_.updates_per_generation
        : std::max<std::size_t>(1, new_transitions / params_.batch_size);

    std::vector<LossRow> rows(learners_.size());
    std::vector<char> reset(learners_.size(), 0);
    const auto gen = static_cast<std::uint64_t>(generation_);
    const auto n = static_cast<long>(learners_.size());
#pragma omp parallel for schedule(dynamic) if (params_.parallel)
    for (long i = 0; i < n; ++i) {
        const auto l = static_cast<std::size_t>(i);
        auto& learner = learners_[l];
        Rng rng = derive_rng(params_.seed, {gen, stream::kTrain, l});
        LossRow row;
        row.generation = generation_;
        row.learner_id = params_.k_ea + l;
        row.critic_losses.assign(learner.critics().size(), 0.0);
        for (std::size_t u = 0; u < n_updates; ++u) {
            const auto batch = buffer_.sample(params_.batch_size, rng);
            const auto rep = learner.update(batch);
            if (rep.applied) {
                ++row.updates;
                for (std::size_t c = 0; c < rep.critic_losses.size(); ++c) {
                    row.critic_losses[c] += rep.critic_losses[c];
                }
                row.actor_objective += rep.actor_objective;
                row.mean_reward += rep.mean_reward;
            }
            if (rep.diverged) {
                Rng reinit = derive_rng(params_.seed, {gen, stream::kReinit, l});
                learner.reinitialize(reinit);
                reset[l] = 1;
                break;
            }
        }
        if (row.updates > 0) {
            const auto d = static_cast<double>(row.updates);
            for (double& c : row.critic_losses) {
                c /= d;
            }
            row.actor_objective /= d;
            row.mean_reward /= d;
        }
        rows[l] = std::move(row);
    }

    double reward_sum = 0.0;
    std::size_t reward_rows = 0;
    for (std::size_t l = 0; l < rows.size(); ++l) {
        if (reset[l] != 0) {
            ++record.reinitialized;
            log_warn("learner " + std::to_string(params_.k_ea + l) + " diverged in generation "
                     + std::to_string(generation_) + "; networks reinitialized, tree kept");
        }
        record.gradient_updates += rows[l].updates;
        if (rows[l].updates > 0) {
            reward_sum += rows[l].mean_reward;
            ++reward_rows;
        }
    }
    if (reward_rows > 0) {
        record.mean_intrinsic_reward = reward_sum / static_cast<double>(reward_rows);
    }
    record.losses = std::move(rows);
}

GenerationRecord Lisr::run_generation()
{
    const auto started = std::chrono::steady_clock::now();
    ++generation_;
    const auto gen = static_cast<std::uint64_t>(generation_);
    GenerationRecord record;
    record.generation = generation_;
    record.mean_intrinsic_reward = std::numeric_limits<double>::quiet_NaN();

    // (a) evaluate the EA population
    auto ea_rollouts = evaluate_ea();
    std::optional<ChampionSnapshot> best_ea;
    for (auto& r : ea_rollouts) {
        record.ea_fitness.push_back(r.score.value);
        frames_ += r.score.steps;
        buffer_.append_all(std::move(r.transitions));
    }
    if (!ea_.empty()) {
        const auto order = rank_descending(record.ea_fitness);
        best_ea = ChampionSnapshot{order[0], false, record.ea_fitness[order[0]], generation_, {ea_[order[0]]}, std::nullopt};
    }

    // (b) EA selection, crossover and mutation
    if (!ea_.empty()) {
        Rng rng = derive_rng(params_.seed, {gen, stream::kEaSelect});
        EaStats stats;
        ea_ = rank_and_select_ea(ea_, record.ea_fitness, params_.ea, rng, &stats);
        record.genome_operations = stats.crossovers + stats.mutations;
    }

    // (c) gradient updates from the shared buffer, intrinsic rewards only
    train_learners(static_cast<std::size_t>(frames_ - std::min(frames_, last_train_frames_)), record);
    last_train_frames_ = frames_;

    // (d) evaluate the learners' policies
    auto sr_rollouts = evaluate_sr();
    for (auto& r : sr_rollouts) {
        record.sr_fitness.push_back(r.score.value);
        frames_ += r.score.steps;
        buffer_.append_all(std::move(r.transitions));
    }

    // (f, ranked before the trees change) champion over both populations
    record.champion_id = select_champion(record.ea_fitness, record.sr_fitness);
    if (record.champion_id < params_.k_ea) {
        record.champion_fitness = record.ea_fitness[record.champion_id];
        champion_ = best_ea;
    } else {
        const std::size_t l = record.champion_id - params_.k_ea;
        record.champion_fitness = record.sr_fitness[l];
        ChampionSnapshot snap{record.champion_id, true, record.champion_fitness, generation_, {}, learners_[l].tree()};
        if (learners_[l].kind() == env::ActionKind::Continuous) {
            snap.networks.push_back(learners_[l].actor());
        } else {
            snap.networks = learners_[l].critics();
        }
        champion_ = std::move(snap);
    }

    // (e) evolve the reward-tree portfolio
    if (!learners_.empty()) {
        Rng rng = derive_rng(params_.seed, {gen, stream::kTrees});
        std::vector<symtree::SymTree> trees;
        trees.reserve(learners_.size());
        for (const auto& l : learners_) {
            trees.push_back(l.tree());
        }
        auto next = evolve_sr_portfolio(trees, record.sr_fitness, params_.trees, rng);
        for (std::size_t l = 0; l < learners_.size(); ++l) {
            learners_[l].set_tree(std::move(next[l]));
        }
    }

    record.frames = frames_;
    total_updates_ += record.gradient_updates;
    total_genome_ops_ += record.genome_operations;
    record.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return record;
}

// ---------------------------------------------------------------------------
// Run state on disk

namespace {

void write_adam(std::ostream& os, const nn::Adam& opt)
{
    os << "lisr-adam 1\n" << opt.steps << ' ' << opt.m.size() << '\n';
    char buf[64];
    for (std::size_t i = 0; i < opt.m.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%a", opt.m[i]);
        os << buf << ' ';
        std::snprintf(buf, sizeof(buf), "%a", opt.v[i]);
        os << buf << '\n';
    }
}

nn::Adam read_adam(std::istream& is)
{
    std::string magic;
    int version = 0;
    nn::Adam opt;
    std::size_t n = 0;
    if (!(is >> magic >> version >> opt.steps >> n) || magic != "lisr-adam" || version != 1) {
        throw std::runtime_error("optimizer state: bad header");
    }
    opt.m.resize(n);
    opt.v.resize(n);
    std::string a;
    std::string b;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(is >> a >> b)) {
            throw std::runtime_error("optimizer state: truncated");
        }
        opt.m[i] = std::strtod(a.c_str(), nullptr);
        opt.v[i] = std::strtod(b.c_str(), nullptr);
    }
    return opt;
}

template <typename F>
void write_file(const fs::path& path, F&& fn)
{
    std::ofstream os(path);
    if (!os) {
        throw std::runtime_error("cannot write " + path.string());
    }
    fn(os);
}

template <typename F>
auto read_file(const fs::path& path, F&& fn)
{
    std::ifstream is(path);
    if (!is) {
        throw std::runtime_error("cannot read " + path.string());
    }
    return fn(is);
}

} // namespace

void Lisr::save_state(const std::string& dir) const
{
    const fs::path root(dir);
    const fs::path tmp = root.string() + ".tmp";
    fs::remove_all(tmp);
    fs::create_directories(tmp);

    write_file(tmp / "state.txt", [&](std::ostream& os) {
        os << "lisr-state 1\n";
        os << "generation " << generation_ << '\n';
        os << "frames " << frames_ << '\n';
        os << "last_train_frames " << last_train_frames_ << '\n';
        os << "total_updates " << total_updates_ << '\n';
        os << "total_genome_ops " << total_genome_ops_ << '\n';
        os << "k_ea " << ea_.size() << '\n';
        os << "k_sr " << learners_.size() << '\n';
    });
    for (std::size_t i = 0; i < ea_.size(); ++i) {
        nn::save_genome((tmp / ("ea_" + std::to_string(i) + ".mlp")).string(), ea_[i]);
    }
    write_file(tmp / "trees.txt", [&](std::ostream& os) {
        for (const auto& l : learners_) {
            os << l.tree().feature_dim() << ' ' << symtree::serialize(l.tree()) << '\n';
        }
    });
    for (std::size_t l = 0; l < learners_.size(); ++l) {
        const auto& learner = learners_[l];
        const std::string prefix = "learner_" + std::to_string(l) + "_";
        if (learner.kind() == env::ActionKind::Continuous) {
            nn::save_genome((tmp / (prefix + "actor.mlp")).string(), learner.actor());
            nn::save_genome((tmp / (prefix + "actor_target.mlp")).string(), learner.actor_target());
            write_file(tmp / (prefix + "actor.adam"),
                       [&](std::ostream& os) { write_adam(os, learner.actor_optimizer()); });
        }
        for (std::size_t c = 0; c < learner.critics().size(); ++c) {
            const std::string cn = prefix + "critic_" + std::to_string(c);
            nn::save_genome((tmp / (cn + ".mlp")).string(), learner.critics()[c]);
            nn::save_genome((tmp / (cn + "_target.mlp")).string(), learner.critic_targets()[c]);
            write_file(tmp / (cn + ".adam"), [&](std::ostream& os) {
                write_adam(os, learner.critic_optimizers()[c]);
            });
        }
    }
    buffer_.save((tmp / "replay.txt").string());

    // Swap in atomically-ish so a crash never leaves a half-written state.
    const fs::path old = root.string() + ".old";
    fs::remove_all(old);
    if (fs::exists(root)) {
        fs::rename(root, old);
    }
    fs::rename(tmp, root);
    fs::remove_all(old);
}

void Lisr::load_state(const std::string& dir)
{
    const fs::path root(dir);
    std::size_t k_ea = 0;
    std::size_t k_sr = 0;
    read_file(root / "state.txt", [&](std::istream& is) {
        std::string magic;
        int version = 0;
        if (!(is >> magic >> version) || magic != "lisr-state" || version != 1) {
            throw std::runtime_error("run state: bad header");
        }
        std::string key;
        while (is >> key) {
            if (key == "generation") {
                is >> generation_;
            } else if (key == "frames") {
                is >> frames_;
            } else if (key == "last_train_frames") {
                is >> last_train_frames_;
            } else if (key == "total_updates") {
                is >> total_updates_;
            } else if (key == "total_genome_ops") {
                is >> total_genome_ops_;
            } else if (key == "k_ea") {
                is >> k_ea;
            } else if (key == "k_sr") {
                is >> k_sr;
            } else {
                throw std::runtime_error("run state: unknown key " + key);
            }
        }
        return 0;
    });
    if (k_ea != ea_.size() || k_sr != learners_.size()) {
        throw std::runtime_error("run state: population sizes differ from the configuration");
    }
    for (std::size_t i = 0; i < ea_.size(); ++i) {
        ea_[i] = nn::load_genome((root / ("ea_" + std::to_string(i) + ".mlp")).string());
    }
    read_file(root / "trees.txt", [&](std::istream& is) {
        std::string line;
        for (auto& learner : learners_) {
            if (!std::getline(is, line)) {
                throw std::runtime_error("run state: missing trees");
            }
            std::istringstream ls(line);
            int fdim = 0;
            ls >> fdim;
            std::string rest;
            std::getline(ls, rest);
            learner.set_tree(symtree::deserialize(rest, fdim));
        }
        return 0;
    });
    for (std::size_t l = 0; l < learners_.size(); ++l) {
        auto& learner = learners_[l];
        const std::string prefix = "learner_" + std::to_string(l) + "_";
        if (learner.kind() == env::ActionKind::Continuous) {
            learner.actor() = nn::load_genome((root / (prefix + "actor.mlp")).string());
            learner.actor_target() = nn::load_genome((root / (prefix + "actor_target.mlp")).string());
            learner.actor_optimizer() = read_file(root / (prefix + "actor.adam"), read_adam);
        }
        for (std::size_t c = 0; c < learner.critics().size(); ++c) {
            const std::string cn = prefix + "critic_" + std::to_string(c);
            learner.critics()[c] = nn::load_genome((root / (cn + ".mlp")).string());
            learner.critic_targets()[c] = nn::load_genome((root / (cn + "_target.mlp")).string());
            learner.critic_optimizers()[c] = read_file(root / (cn + ".adam"), read_adam);
        }
    }
    buffer_.load((root / "replay.txt").string());
}

} // namespace lisr::evo
