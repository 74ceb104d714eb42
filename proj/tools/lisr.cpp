#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "lisr/config.hpp"
#include "lisr/experiment.hpp"
#include "lisr/log.hpp"

namespace {

int run_cmd(lisr::cfg::ExperimentConfig config, bool resume, bool export_trees, bool verbose)
{
    lisr::exp::RunOptions opts;
    opts.resume = resume;
    opts.export_trees = export_trees;
    opts.quiet = !verbose;
    const auto art = lisr::exp::run(config, opts);
    std::cout << "run directory: " << art.dir << '\n'
              << "generations:   " << art.generations << '\n'
              << "frames:        " << art.frames << '\n'
              << "grad updates:  " << art.gradient_updates << '\n'
              << "genome ops:    " << art.genome_operations << '\n';
    if (!art.champion_curve.empty()) {
        std::cout << "champion:      " << art.champion_curve.back() << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"lisr: evolved symbolic intrinsic rewards for sparse-reward control"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> mode;
    std::optional<std::string> out;
    std::optional<int> generations;
    std::optional<std::uint64_t> frames;
    bool single_threaded = false;
    bool parallel = false;
    bool export_trees = false;
    bool resume = false;
    bool verbose = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "config file (key = value)");
        sub->add_option("--seed", seed, "random seed");
        sub->add_option("--mode", mode, "lisr | ea-only | sr-only");
        sub->add_option("--out", out, "output directory");
        sub->add_option("--generations", generations, "generation budget");
        sub->add_option("--frames", frames, "environment-step budget (0: none)");
        sub->add_flag("--single-threaded", single_threaded, "deterministic serial execution");
        sub->add_flag("--parallel", parallel, "evaluate and train with OpenMP workers");
    };

    auto* run = app.add_subcommand("run", "run an experiment");
    add_common(run);
    run->add_flag("--export-trees", export_trees, "write every learner's tree at each checkpoint");
    run->add_flag("--resume", resume, "continue from <out>/checkpoint");
    run->add_flag("-v,--verbose", verbose, "log each generation");
    bool run_grid = false;
    run->add_flag("--grid", run_grid, "write the grid configs (as the grid subcommand) instead of running");

    auto* grid = app.add_subcommand("grid", "write one config per learning-rate / batch-size grid point");
    add_common(grid);

    auto* exp = app.add_subcommand("export-tree", "export a checkpointed reward tree");
    std::string run_dir;
    std::string which = "champion";
    exp->add_option("run_dir", run_dir, "run directory")->required();
    exp->add_option("--learner", which, "'champion' or a learner index");

    CLI11_PARSE(app, argc, argv);

    try {
        if (exp->parsed()) {
            const auto t = lisr::exp::export_tree(run_dir, which);
            std::cout << t.serialized << '\n' << t.unrolled << "operators: " << t.operator_count << '\n';
            for (const auto& f : t.files) {
                std::cout << "wrote " << f << '\n';
            }
            return 0;
        }

        auto config = config_path.empty() ? lisr::cfg::ExperimentConfig{} : lisr::cfg::load_config(config_path);
        if (seed) {
            config.seed = *seed;
        }
        if (mode) {
            config.mode = lisr::cfg::mode_from_name(*mode);
        }
        if (out) {
            config.out = *out;
        }
        if (generations) {
            config.generations = *generations;
        }
        if (frames) {
            config.frames = *frames;
        }
        if (single_threaded) {
            config.single_threaded = true;
        }
        if (parallel) {
            config.single_threaded = false;
        }
        lisr::cfg::validate(config);

        if (grid->parsed() || run_grid) {
            const auto kind = lisr::cfg::make_environment(config)->spec().action_kind;
            for (const auto& c : lisr::cfg::grid(config, kind)) {
                std::filesystem::create_directories(c.out);
                const std::string path = c.out + "/config.txt";
                std::ofstream os(path);
                os << lisr::cfg::to_text(c);
                std::cout << path << '\n';
            }
            return 0;
        }
        if (verbose) {
            lisr::log_level() = lisr::LogLevel::Info;
        }
        return run_cmd(config, resume, export_trees, verbose);
    } catch (const lisr::cfg::ConfigError& e) {
        std::cerr << "invalid config: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
