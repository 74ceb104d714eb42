#include "lisr/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "lisr/log.hpp"

namespace lisr::exp {

namespace fs = std::filesystem;

namespace {

std::string num(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

void stats(const std::vector<double>& v, double& mean, double& max)
{
    if (v.empty()) {
        mean = max = std::numeric_limits<double>::quiet_NaN();
        return;
    }
    double sum = 0.0;
    max = -std::numeric_limits<double>::infinity();
    for (double x : v) {
        sum += x;
        max = std::max(max, x);
    }
    mean = sum / static_cast<double>(v.size());
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("cannot write " + path.string());
    }
    os << text;
}

std::string read_text(const fs::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

// Keep the header plus rows whose leading generation is <= `generation`.
void truncate_csv(const fs::path& path, int generation)
{
    if (!fs::exists(path)) {
        return;
    }
    std::istringstream is(read_text(path));
    std::string line;
    std::string out;
    bool header = true;
    while (std::getline(is, line)) {
        if (header) {
            out += line + '\n';
            header = false;
            continue;
        }
        if (std::stoi(line.substr(0, line.find(','))) <= generation) {
            out += line + '\n';
        }
    }
    write_text(path, out);
}

std::vector<std::string> tree_feature_names(const cfg::ExperimentConfig& c, const env::EnvSpec& spec)
{
    const auto layout = c.feature_layout == "s,a" ? learn::FeatureLayout::StateAction
                                                  : learn::FeatureLayout::StateActionNext;
    return learn::feature_names(layout, spec);
}

void write_tree_files(const fs::path& dir, const std::string& stem, const TreeExport& t, std::vector<std::string>* files)
{
    fs::create_directories(dir);
    const fs::path a = dir / (stem + ".tree");
    const fs::path b = dir / (stem + ".unrolled.txt");
    const fs::path c = dir / (stem + ".ops");
    write_text(a, t.serialized + '\n');
    write_text(b, t.unrolled);
    write_text(c, std::to_string(t.operator_count) + '\n');
    if (files) {
        files->push_back(a.string());
        files->push_back(b.string());
        files->push_back(c.string());
    }
}

void write_champion(const fs::path& dir, const evo::ChampionSnapshot& champ, const std::vector<std::string>& names)
{
    const fs::path tmp = dir.string() + ".tmp";
    fs::remove_all(tmp);
    fs::create_directories(tmp);
    std::ostringstream info;
    info << "id " << champ.id << '\n'
         << "kind " << (champ.is_sr ? "sr" : "ea") << '\n'
         << "fitness " << num(champ.fitness) << '\n'
         << "generation " << champ.generation << '\n'
         << "networks " << champ.networks.size() << '\n';
    write_text(tmp / "info.txt", info.str());
    for (std::size_t i = 0; i < champ.networks.size(); ++i) {
        nn::save_genome((tmp / ("network_" + std::to_string(i) + ".mlp")).string(), champ.networks[i]);
    }
    if (champ.tree) {
        write_text(tmp / "tree_dim.txt", std::to_string(champ.tree->feature_dim()) + '\n');
        write_tree_files(tmp, "tree", render_tree(*champ.tree, names), nullptr);
    }
    fs::remove_all(dir);
    fs::rename(tmp, dir);
}

void write_portfolio_trees(const fs::path& dir, const evo::Lisr& lisr, const std::vector<std::string>& names)
{
    const auto& learners = lisr.learners();
    for (std::size_t l = 0; l < learners.size(); ++l) {
        write_tree_files(dir, "learner_" + std::to_string(lisr.params().k_ea + l), render_tree(learners[l].tree(), names),
                         nullptr);
    }
}

} // namespace

std::string curve_row(const evo::GenerationRecord& r)
{
    double ea_mean = 0.0;
    double ea_max = 0.0;
    double sr_mean = 0.0;
    double sr_max = 0.0;
    stats(r.ea_fitness, ea_mean, ea_max);
    stats(r.sr_fitness, sr_mean, sr_max);
    std::ostringstream os;
    os << r.generation << ',' << r.frames << ',' << num(r.champion_fitness) << ',' << num(ea_mean) << ','
       << num(ea_max) << ',' << num(sr_mean) << ',' << num(sr_max) << ',' << num(r.mean_intrinsic_reward);
    return os.str();
}

std::vector<std::string> loss_rows(const evo::GenerationRecord& r)
{
    std::vector<std::string> rows;
    for (const auto& l : r.losses) {
        if (l.updates == 0) {
            continue;
        }
        std::ostringstream os;
        os << l.generation << ',' << l.learner_id << ',' << l.updates << ',';
        for (std::size_t c = 0; c < l.critic_losses.size(); ++c) {
            os << (c ? ";" : "") << num(l.critic_losses[c]);
        }
        os << ',' << num(l.actor_objective) << ',' << num(l.mean_reward);
        rows.push_back(os.str());
    }
    return rows;
}

TreeExport render_tree(const symtree::SymTree& tree, const std::vector<std::string>& names)
{
    TreeExport t;
    t.serialized = symtree::serialize(tree);
    if (names.size() == static_cast<std::size_t>(tree.feature_dim())) {
        t.unrolled = symtree::unroll(tree, names);
    } else {
        t.unrolled = symtree::unroll(tree, symtree::default_feature_names(tree.feature_dim()));
    }
    t.operator_count = tree.operator_count();
    return t;
}

RunArtifacts run(const cfg::ExperimentConfig& config, const RunOptions& options)
{
    cfg::validate(config);
    const fs::path dir(config.out);
    fs::create_directories(dir);

    RunArtifacts art;
    art.dir = dir.string();
    art.curve_csv = (dir / "curve.csv").string();
    art.losses_csv = (dir / "losses.csv").string();
    art.checkpoint_dir = (dir / "checkpoint").string();
    art.champion_dir = (dir / "champion").string();
    art.trees_dir = (dir / "trees").string();
    art.config_snapshot = (dir / "config.txt").string();

    auto prototype = cfg::make_environment(config);
    const env::EnvSpec spec = prototype->spec();
    const auto names = tree_feature_names(config, spec);
    evo::Lisr lisr(cfg::make_params(config, spec), std::move(prototype));

    const bool resuming = options.resume && fs::exists(fs::path(art.checkpoint_dir) / "state.txt");
    if (resuming) {
        const auto snap = cfg::load_config(art.config_snapshot);
        if (!(snap == config)) {
            throw cfg::ConfigError("config", "differs from the snapshot of the run being resumed");
        }
        lisr.load_state(art.checkpoint_dir);
        truncate_csv(art.curve_csv, lisr.generation());
        truncate_csv(art.losses_csv, lisr.generation());
        if (!options.quiet) {
            log_info("resumed at generation " + std::to_string(lisr.generation()));
        }
    } else {
        write_text(art.config_snapshot, cfg::to_text(config));
        write_text(art.curve_csv, std::string(kCurveHeader) + '\n');
        write_text(art.losses_csv, std::string(kLossHeader) + '\n');
    }

    std::ofstream curve(art.curve_csv, std::ios::app | std::ios::binary);
    std::ofstream losses(art.losses_csv, std::ios::app | std::ios::binary);
    if (!curve || !losses) {
        throw std::runtime_error("cannot open CSV files in " + art.dir);
    }

    auto checkpoint = [&] {
        lisr.save_state(art.checkpoint_dir);
        if (lisr.champion()) {
            write_champion(art.champion_dir, *lisr.champion(), names);
        }
        if (options.export_trees) {
            write_portfolio_trees(art.trees_dir, lisr, names);
        }
    };

    bool ran_any = false;
    while (lisr.generation() < config.generations && (config.frames == 0 || lisr.frames() < config.frames)) {
        const auto rec = lisr.run_generation();
        ran_any = true;
        curve << curve_row(rec) << '\n';
        for (const auto& row : loss_rows(rec)) {
            losses << row << '\n';
        }
        curve.flush();
        losses.flush();
        art.champion_curve.push_back(rec.champion_fitness);
        art.frames_curve.push_back(rec.frames);
        if (!options.quiet) {
            log_info("generation " + std::to_string(rec.generation) + " frames " + std::to_string(rec.frames)
                     + " champion " + num(rec.champion_fitness));
        }
        if (options.on_generation) {
            options.on_generation(rec);
        }
        if (config.export_interval > 0 && rec.generation % config.export_interval == 0) {
            checkpoint();
        }
    }
    if (ran_any || !fs::exists(art.checkpoint_dir)) {
        checkpoint();
    }

    art.generations = lisr.generation();
    art.frames = lisr.frames();
    art.gradient_updates = lisr.total_gradient_updates();
    art.genome_operations = lisr.total_genome_operations();
    return art;
}

TreeExport export_tree(const std::string& run_dir, const std::string& which)
{
    const fs::path dir(run_dir);
    const fs::path ckpt = dir / "checkpoint";
    if (!fs::exists(ckpt / "state.txt")) {
        throw std::runtime_error("no checkpoint in " + run_dir);
    }
    const auto config = cfg::load_config((dir / "config.txt").string());
    const auto names = tree_feature_names(config, cfg::make_environment(config)->spec());

    TreeExport t;
    std::string stem;
    if (which == "champion") {
        const fs::path cdir = dir / "champion";
        if (!fs::exists(cdir / "tree.tree")) {
            throw std::runtime_error("champion of " + run_dir + " has no reward tree (it is an EA actor)");
        }
        const int fdim = std::stoi(read_text(cdir / "tree_dim.txt"));
        std::string text = read_text(cdir / "tree.tree");
        t = render_tree(symtree::deserialize(text, fdim), names);
        stem = "champion";
    } else {
        std::size_t index = 0;
        try {
            index = std::stoul(which);
        } catch (const std::exception&) {
            throw std::runtime_error("expected 'champion' or a learner index, got '" + which + "'");
        }
        std::istringstream is(read_text(ckpt / "trees.txt"));
        std::string line;
        std::size_t k = 0;
        bool found = false;
        while (std::getline(is, line)) {
            if (k++ == index) {
                std::istringstream ls(line);
                int fdim = 0;
                ls >> fdim;
                std::string rest;
                std::getline(ls, rest);
                t = render_tree(symtree::deserialize(rest, fdim), names);
                found = true;
                break;
            }
        }
        if (!found) {
            throw std::runtime_error("learner index " + which + " out of range");
        }
        stem = "learner_" + which;
    }
    write_tree_files(dir / "exports", stem, t, &t.files);
    return t;
}

double area_under_curve(const std::vector<double>& fitness, const std::vector<std::uint64_t>& frames,
                        std::uint64_t frame_limit)
{
    if (fitness.size() != frames.size()) {
        throw std::invalid_argument("area_under_curve: length mismatch");
    }
    double area = 0.0;
    std::uint64_t prev = 0;
    for (std::size_t g = 0; g < fitness.size(); ++g) {
        std::uint64_t end = frames[g];
        if (frame_limit > 0) {
            end = std::min(end, frame_limit);
        }
        if (end > prev) {
            area += fitness[g] * static_cast<double>(end - prev);
            prev = end;
        }
    }
    return area;
}

} // namespace lisr::exp
