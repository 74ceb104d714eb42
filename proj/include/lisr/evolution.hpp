#pragma once

// The generation loop: an evolved population of neural policies and a
// portfolio of symbolic-reward learners, sharing one replay buffer and ranked
// together by episodic environment return.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lisr/envlab.hpp"
#include "lisr/learners.hpp"
#include "lisr/neuronet.hpp"
#include "lisr/replay.hpp"
#include "lisr/symtree.hpp"

namespace lisr::evo {

// Undiscounted environment return, averaged over `episodes`.
struct FitnessScore {
    double value = 0.0;
    int episodes = 0;
    std::size_t steps = 0;
};

using Policy = std::function<std::vector<double>(std::span<const double>)>;

struct Rollout {
    FitnessScore score;
    std::vector<Transition> transitions;
};

// Run `episodes` episodes, collecting every transition. Truncated episodes
// store done = false so the learners still bootstrap from the last state.
Rollout rollout(const Policy& policy, env::Environment& env, Rng& rng, int episodes = 1);

// Rollout that appends each transition to the buffer as it happens.
FitnessScore evaluate(const Policy& policy, env::Environment& env, ReplayBuffer& buffer, Rng& rng,
                      int episodes = 1);

// Action of an evolved genome: tanh actor output mapped to the action bounds
// (continuous) or argmax over the outputs read as Q-values (discrete).
std::vector<double> genome_action(const nn::Mlp& genome, const env::EnvSpec& spec, std::span<const double> obs);

// ceil(fraction * k), and at least one when k > 0.
std::size_t elite_count(std::size_t k, double fraction);

// Best of `size` uniform draws with replacement; ties go to the earlier index.
std::size_t tournament(std::span<const double> fitness, std::size_t size, Rng& rng);

// Indices sorted by descending fitness; equal fitness keeps the lower index first.
std::vector<std::size_t> rank_descending(std::span<const double> fitness);

struct EaParams {
    double elite_fraction = 0.07;
    std::size_t tournament_size = 3;
    // Share of the non-elite slots filled by crossover(elite, selected)
    // rather than directly by tournament winners.
    double crossover_fraction = 0.5;
    nn::MutationParams mutation;
};

struct EaStats {
    std::size_t crossovers = 0;
    std::size_t mutations = 0;
    std::size_t tournament_picks = 0;
};

// Next EA population: elites first (best first, unmodified), then the set S.
std::vector<nn::Mlp> rank_and_select_ea(std::span<const nn::Mlp> population, std::span<const double> fitness,
                                        const EaParams& params, Rng& rng, EaStats* stats = nullptr);

struct TreeEvoParams {
    double elite_fraction = 0.07;
    std::size_t tournament_size = 3;
    int max_depth = 3;
    symtree::GrowParams grow;
};

struct TreeEvoStats {
    std::size_t crossovers = 0;
    std::size_t mutations = 0;
    std::vector<std::size_t> elite_slots;
};

// New tree for every learner slot. Elite learners keep their tree; every
// other slot receives an offspring of tournament-selected parents,
// alternating crossover with a random elite tree and mutation.
std::vector<symtree::SymTree> evolve_sr_portfolio(std::span<const symtree::SymTree> trees,
                                                  std::span<const double> scores, const TreeEvoParams& params,
                                                  Rng& rng, TreeEvoStats* stats = nullptr);

// Id of the best individual. EA actors have ids 0..k_ea-1, SR learners
// k_ea..k_ea+k_sr-1. Ties go to the lowest id.
std::size_t select_champion(std::span<const double> ea_fitness, std::span<const double> sr_fitness);

struct LossRow {
    int generation = 0;
    std::size_t learner_id = 0;
    std::size_t updates = 0;
    std::vector<double> critic_losses; // mean over the generation's updates
    double actor_objective = 0.0;
    double mean_reward = 0.0;
};

struct GenerationRecord {
    int generation = 0;
    std::vector<double> ea_fitness;
    std::vector<double> sr_fitness;
    std::size_t champion_id = 0;
    double champion_fitness = 0.0;
    std::uint64_t frames = 0;    // total environment steps so far
    double wall_seconds = 0.0;   // not part of any deterministic output
    double mean_intrinsic_reward = 0.0; // NaN when no update ran
    std::size_t gradient_updates = 0;   // this generation
    std::size_t genome_operations = 0;  // EA crossovers + mutations, this generation
    std::size_t reinitialized = 0;      // diverged learners reset
    std::vector<LossRow> losses;
};

struct LisrParams {
    std::size_t k_ea = 25;
    std::size_t k_sr = 25;
    std::vector<std::size_t> ea_hidden = {256, 256};
    EaParams ea;
    TreeEvoParams trees;
    learn::LearnerParams learner; // dims are filled in from the environment
    std::size_t batch_size = 256;
    std::size_t updates_per_generation = 0; // 0: new transitions / batch_size, at least 1
    std::size_t exploration_steps = 5000;
    std::size_t buffer_capacity = 1000000;
    int episodes_per_eval = 1;
    bool sr_explore_during_eval = true;
    bool parallel = false;
    std::uint64_t seed = 1;
};

// What the current champion was when it was ranked.
struct ChampionSnapshot {
    std::size_t id = 0;
    bool is_sr = false;
    double fitness = 0.0;
    int generation = 0;
    std::vector<nn::Mlp> networks; // EA: the genome. SR: actor (continuous) or Q-heads.
    std::optional<symtree::SymTree> tree;
};

class Lisr {
public:
    Lisr(LisrParams params, std::unique_ptr<env::Environment> prototype);

    GenerationRecord run_generation();

    const LisrParams& params() const { return params_; }
    const env::EnvSpec& env_spec() const { return prototype_->spec(); }
    int generation() const { return generation_; }
    std::uint64_t frames() const { return frames_; }
    std::size_t total_gradient_updates() const { return total_updates_; }
    std::size_t total_genome_operations() const { return total_genome_ops_; }

    const std::vector<nn::Mlp>& ea_population() const { return ea_; }
    std::vector<nn::Mlp>& ea_population() { return ea_; }
    const std::vector<learn::SrLearner>& learners() const { return learners_; }
    std::vector<learn::SrLearner>& learners() { return learners_; }
    const ReplayBuffer& buffer() const { return buffer_; }
    ReplayBuffer& buffer() { return buffer_; }
    const std::optional<ChampionSnapshot>& champion() const { return champion_; }

    Policy ea_policy(std::size_t index) const;
    Policy sr_policy(std::size_t index, bool explore, bool random_phase, Rng& rng) const;

    // Whole-run state (populations, learners with optimizer moments, trees,
    // buffer, counters). Random streams are derived from (seed, generation),
    // so a restored run continues exactly as the original would have.
    void save_state(const std::string& dir) const;
    void load_state(const std::string& dir);

private:
    std::vector<Rollout> evaluate_ea();
    std::vector<Rollout> evaluate_sr();
    void train_learners(std::size_t new_transitions, GenerationRecord& record);

    LisrParams params_;
    std::unique_ptr<env::Environment> prototype_;
    std::vector<nn::Mlp> ea_;
    std::vector<learn::SrLearner> learners_;
    ReplayBuffer buffer_;
    int generation_ = 0;
    std::uint64_t frames_ = 0;
    std::uint64_t last_train_frames_ = 0;
    std::size_t total_updates_ = 0;
    std::size_t total_genome_ops_ = 0;
    std::optional<ChampionSnapshot> champion_;
};

} // namespace lisr::evo
