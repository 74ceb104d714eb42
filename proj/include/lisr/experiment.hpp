#pragma once

// Runs an experiment from a config and writes its artifacts:
//
//   <out>/config.txt      exact config used, written before generation 1
//   <out>/curve.csv       one row per generation
//   <out>/losses.csv      one row per learner per generation with updates
//   <out>/checkpoint/     full run state, for --resume
//   <out>/champion/       champion networks and, for SR champions, its tree
//   <out>/trees/          per-learner tree exports (--export-trees)

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lisr/config.hpp"
#include "lisr/evolution.hpp"

namespace lisr::exp {

inline constexpr const char* kCurveHeader =
    "generation,frames,champion_fitness,ea_mean,ea_max,sr_mean,sr_max,mean_intrinsic_reward";
inline constexpr const char* kLossHeader =
    "generation,learner_id,updates,critic_losses,actor_objective,mean_reward";

struct RunOptions {
    bool resume = false;
    bool export_trees = false;
    bool quiet = true;
    std::function<void(const evo::GenerationRecord&)> on_generation;
};

struct RunArtifacts {
    std::string dir;
    std::string curve_csv;
    std::string losses_csv;
    std::string checkpoint_dir;
    std::string champion_dir;
    std::string trees_dir;
    std::string config_snapshot;
    int generations = 0; // total, including any resumed ones
    std::uint64_t frames = 0;
    std::size_t gradient_updates = 0;
    std::size_t genome_operations = 0;
    std::vector<double> champion_curve; // this invocation's generations only
    std::vector<std::uint64_t> frames_curve;
};

std::string curve_row(const evo::GenerationRecord& r);
std::vector<std::string> loss_rows(const evo::GenerationRecord& r);

RunArtifacts run(const cfg::ExperimentConfig& config, const RunOptions& options = {});

struct TreeExport {
    std::string serialized;
    std::string unrolled;
    std::size_t operator_count = 0;
    std::vector<std::string> files;
};

// Text forms of a tree with the environment's feature names.
TreeExport render_tree(const symtree::SymTree& tree, const std::vector<std::string>& names);

// `which` is "champion" or a learner index into the checkpointed portfolio.
// Files go to <run_dir>/exports/. Throws if the checkpoint is missing.
TreeExport export_tree(const std::string& run_dir, const std::string& which);

// Step-function area: each generation's champion fitness times the frames
// that generation consumed, up to `frame_limit` (0: no limit).
double area_under_curve(const std::vector<double>& fitness, const std::vector<std::uint64_t>& frames,
                        std::uint64_t frame_limit = 0);

} // namespace lisr::exp
