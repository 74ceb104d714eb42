#pragma once

// Experiment configuration: a flat `key = value` text file, `#` starts a
// comment, every key optional. See docs/config.md for the grammar.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "lisr/envlab.hpp"
#include "lisr/evolution.hpp"

namespace lisr::cfg {

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& reason)
        : std::runtime_error(field + ": " + reason)
        , field_(std::move(field))
    {
    }
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

enum class Mode { Lisr, EaOnly, SrOnly };

std::string mode_name(Mode m);
Mode mode_from_name(const std::string& name); // throws ConfigError("mode", ...)

struct ExperimentConfig {
    // environment
    std::string env = "sparse_gridworld";
    int grid_size = 8;
    bool grid_random_start = false;
    std::string grid_walls; // "x:y;x:y"
    int catcher_drops = 10;
    int pointmass_max_steps = 200;

    // populations
    std::size_t k = 50;
    double sr_ratio = 0.5; // share of k given to SR learners
    Mode mode = Mode::Lisr;
    double elite_fraction = 0.07;
    std::size_t tournament_size = 3;
    double crossover_fraction = 0.5;
    std::vector<std::size_t> ea_hidden = {256, 256};

    // genome mutation
    double mut_prob = 0.9;
    double mut_frac = 0.1;
    double mut_strength = 0.1;
    double supermut_prob = 0.05;
    double reset_prob = 0.05;

    // reward trees
    int max_depth = 3;
    double operator_prob = 0.7;
    double feature_prob = 0.9;
    std::string feature_layout = "s,a,s'"; // or "s,a"

    // learners
    std::vector<std::size_t> hidden = {256, 256};
    double gamma = 0.99;
    double tau = 1e-3;
    double actor_lr = 1e-3;
    double critic_lr = 1e-3;
    std::size_t batch_size = 256;
    std::size_t updates_per_generation = 0; // 0: new transitions / batch_size
    std::size_t exploration_steps = 5000;
    std::size_t buffer_capacity = 1000000;
    int heads = 2;
    double explore_sigma = 0.1;
    double epsilon = 0.1;
    double reward_clamp = 10.0;
    bool sr_explore_during_eval = true;

    // budgets and output
    int generations = 100;
    std::uint64_t frames = 0; // 0: no frame budget
    int episodes_per_eval = 1;
    std::uint64_t seed = 1;
    std::string out = "runs/lisr";
    bool single_threaded = true;
    int export_interval = 10; // generations between champion exports, 0: only at the end

    bool operator==(const ExperimentConfig&) const = default;

    std::size_t k_sr() const;
    std::size_t k_ea() const;
};

// Throws ConfigError naming the field on any out-of-range value.
void validate(const ExperimentConfig& c);

// Apply `key = value` lines on top of `base`. Unknown keys are errors.
ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path);

// Every field, doubles at 17 significant digits so parsing the text back
// gives an identical config.
std::string to_text(const ExperimentConfig& c);

std::unique_ptr<env::Environment> make_environment(const ExperimentConfig& c);
evo::LisrParams make_params(const ExperimentConfig& c, const env::EnvSpec& spec);

// Learning-rate grid and batch sizes for the environment's action kind.
std::vector<ExperimentConfig> grid(const ExperimentConfig& base, env::ActionKind kind);

} // namespace lisr::cfg
