#include "lisr/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

namespace lisr::cfg {

std::string mode_name(Mode m)
{
    switch (m) {
    case Mode::Lisr:
        return "lisr";
    case Mode::EaOnly:
        return "ea-only";
    case Mode::SrOnly:
        return "sr-only";
    }
    return "lisr";
}

Mode mode_from_name(const std::string& name)
{
    if (name == "lisr") {
        return Mode::Lisr;
    }
    if (name == "ea-only") {
        return Mode::EaOnly;
    }
    if (name == "sr-only") {
        return Mode::SrOnly;
    }
    throw ConfigError("mode", "expected lisr, ea-only or sr-only, got '" + name + "'");
}

std::size_t ExperimentConfig::k_sr() const
{
    switch (mode) {
    case Mode::EaOnly:
        return 0;
    case Mode::SrOnly:
        return k;
    case Mode::Lisr:
        break;
    }
    return static_cast<std::size_t>(std::llround(sr_ratio * static_cast<double>(k)));
}

std::size_t ExperimentConfig::k_ea() const { return k - k_sr(); }

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string fmt_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& key, const std::string& v)
{
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (v.empty() || *end != '\0' || !std::isfinite(d)) {
        throw ConfigError(key, "expected a finite number, got '" + v + "'");
    }
    return d;
}

long long parse_int(const std::string& key, const std::string& v)
{
    char* end = nullptr;
    const long long i = std::strtoll(v.c_str(), &end, 10);
    if (v.empty() || *end != '\0') {
        throw ConfigError(key, "expected an integer, got '" + v + "'");
    }
    return i;
}

std::uint64_t parse_uint(const std::string& key, const std::string& v)
{
    if (v.empty() || v[0] == '-') {
        throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
    }
    char* end = nullptr;
    const unsigned long long u = std::strtoull(v.c_str(), &end, 10);
    if (*end != '\0') {
        throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
    }
    return u;
}

bool parse_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1") {
        return true;
    }
    if (v == "false" || v == "0") {
        return false;
    }
    throw ConfigError(key, "expected true or false, got '" + v + "'");
}

std::vector<std::size_t> parse_sizes(const std::string& key, const std::string& v)
{
    std::vector<std::size_t> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto n = parse_uint(key, trim(item));
        if (n == 0) {
            throw ConfigError(key, "layer widths must be positive");
        }
        out.push_back(n);
    }
    return out;
}

std::string fmt_sizes(const std::vector<std::size_t>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? "," : "") + std::to_string(v[i]);
    }
    return out;
}

struct Field {
    const char* key;
    std::function<std::string(const ExperimentConfig&)> get;
    std::function<void(ExperimentConfig&, const std::string&)> set;
};

#define LISR_DOUBLE(name)                                                                   \
    Field { #name, [](const ExperimentConfig& c) { return fmt_double(c.name); },            \
            [](ExperimentConfig& c, const std::string& v) { c.name = parse_double(#name, v); } }
#define LISR_INT(name)                                                                      \
    Field { #name, [](const ExperimentConfig& c) { return std::to_string(c.name); },        \
            [](ExperimentConfig& c, const std::string& v) {                                 \
                c.name = static_cast<decltype(c.name)>(parse_int(#name, v));                \
            } }
#define LISR_UINT(name)                                                                     \
    Field { #name, [](const ExperimentConfig& c) { return std::to_string(c.name); },        \
            [](ExperimentConfig& c, const std::string& v) {                                 \
                c.name = static_cast<decltype(c.name)>(parse_uint(#name, v));               \
            } }
#define LISR_BOOL(name)                                                                     \
    Field { #name, [](const ExperimentConfig& c) { return std::string(c.name ? "true" : "false"); }, \
            [](ExperimentConfig& c, const std::string& v) { c.name = parse_bool(#name, v); } }
#define LISR_STRING(name)                                                                   \
    Field { #name, [](const ExperimentConfig& c) { return c.name; },                        \
            [](ExperimentConfig& c, const std::string& v) { c.name = v; } }
#define LISR_SIZES(name)                                                                    \
    Field { #name, [](const ExperimentConfig& c) { return fmt_sizes(c.name); },             \
            [](ExperimentConfig& c, const std::string& v) { c.name = parse_sizes(#name, v); } }

const std::vector<Field>& fields()
{
    static const std::vector<Field> table = {
        LISR_STRING(env),
        LISR_INT(grid_size),
        LISR_BOOL(grid_random_start),
        LISR_STRING(grid_walls),
        LISR_INT(catcher_drops),
        LISR_INT(pointmass_max_steps),
        LISR_UINT(k),
        LISR_DOUBLE(sr_ratio),
        Field{"mode", [](const ExperimentConfig& c) { return mode_name(c.mode); },
              [](ExperimentConfig& c, const std::string& v) { c.mode = mode_from_name(v); }},
        LISR_DOUBLE(elite_fraction),
        LISR_UINT(tournament_size),
        LISR_DOUBLE(crossover_fraction),
        LISR_SIZES(ea_hidden),
        LISR_DOUBLE(mut_prob),
        LISR_DOUBLE(mut_frac),
        LISR_DOUBLE(mut_strength),
        LISR_DOUBLE(supermut_prob),
        LISR_DOUBLE(reset_prob),
        LISR_INT(max_depth),
        LISR_DOUBLE(operator_prob),
        LISR_DOUBLE(feature_prob),
        LISR_STRING(feature_layout),
        LISR_SIZES(hidden),
        LISR_DOUBLE(gamma),
        LISR_DOUBLE(tau),
        LISR_DOUBLE(actor_lr),
        LISR_DOUBLE(critic_lr),
        LISR_UINT(batch_size),
        LISR_UINT(updates_per_generation),
        LISR_UINT(exploration_steps),
        LISR_UINT(buffer_capacity),
        LISR_INT(heads),
        LISR_DOUBLE(explore_sigma),
        LISR_DOUBLE(epsilon),
        LISR_DOUBLE(reward_clamp),
        LISR_BOOL(sr_explore_during_eval),
        LISR_INT(generations),
        LISR_UINT(frames),
        LISR_INT(episodes_per_eval),
        LISR_UINT(seed),
        LISR_STRING(out),
        LISR_BOOL(single_threaded),
        LISR_INT(export_interval),
    };
    return table;
}

#undef LISR_DOUBLE
#undef LISR_INT
#undef LISR_UINT
#undef LISR_BOOL
#undef LISR_STRING
#undef LISR_SIZES

void check_prob(const char* key, double v)
{
    if (!(v >= 0.0 && v <= 1.0)) {
        throw ConfigError(key, "must lie in [0, 1], got " + fmt_double(v));
    }
}

std::vector<std::pair<int, int>> parse_walls(const std::string& text)
{
    std::vector<std::pair<int, int>> walls;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        item = trim(item);
        if (item.empty()) {
            continue;
        }
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw ConfigError("grid_walls", "expected x:y, got '" + item + "'");
        }
        walls.emplace_back(static_cast<int>(parse_int("grid_walls", trim(item.substr(0, colon)))),
                           static_cast<int>(parse_int("grid_walls", trim(item.substr(colon + 1)))));
    }
    return walls;
}

learn::FeatureLayout layout_from_name(const std::string& name)
{
    if (name == "s,a,s'") {
        return learn::FeatureLayout::StateActionNext;
    }
    if (name == "s,a") {
        return learn::FeatureLayout::StateAction;
    }
    throw ConfigError("feature_layout", "expected s,a,s' or s,a, got '" + name + "'");
}

} // namespace

void validate(const ExperimentConfig& c)
{
    const auto names = env::environment_names();
    if (std::find(names.begin(), names.end(), c.env) == names.end()) {
        throw ConfigError("env", "unknown environment '" + c.env + "'");
    }
    if (c.grid_size < 2) {
        throw ConfigError("grid_size", "must be at least 2");
    }
    parse_walls(c.grid_walls);
    if (c.catcher_drops < 1) {
        throw ConfigError("catcher_drops", "must be positive");
    }
    if (c.pointmass_max_steps < 1) {
        throw ConfigError("pointmass_max_steps", "must be positive");
    }
    if (c.k < 1) {
        throw ConfigError("k", "must be positive");
    }
    check_prob("sr_ratio", c.sr_ratio);
    check_prob("elite_fraction", c.elite_fraction);
    if (c.tournament_size < 1) {
        throw ConfigError("tournament_size", "must be positive");
    }
    check_prob("crossover_fraction", c.crossover_fraction);
    if (c.ea_hidden.empty()) {
        throw ConfigError("ea_hidden", "needs at least one hidden layer");
    }
    check_prob("mut_prob", c.mut_prob);
    check_prob("mut_frac", c.mut_frac);
    check_prob("mut_strength", c.mut_strength);
    check_prob("supermut_prob", c.supermut_prob);
    check_prob("reset_prob", c.reset_prob);
    if (c.max_depth < 1) {
        throw ConfigError("max_depth", "must be at least 1");
    }
    check_prob("operator_prob", c.operator_prob);
    check_prob("feature_prob", c.feature_prob);
    layout_from_name(c.feature_layout);
    if (c.hidden.empty()) {
        throw ConfigError("hidden", "needs at least one hidden layer");
    }
    if (!(c.gamma >= 0.0 && c.gamma < 1.0)) {
        throw ConfigError("gamma", "must lie in [0, 1)");
    }
    if (!(c.tau > 0.0 && c.tau <= 1.0)) {
        throw ConfigError("tau", "must lie in (0, 1]");
    }
    if (!(c.actor_lr > 0.0)) {
        throw ConfigError("actor_lr", "must be positive");
    }
    if (!(c.critic_lr > 0.0)) {
        throw ConfigError("critic_lr", "must be positive");
    }
    if (c.batch_size < 1) {
        throw ConfigError("batch_size", "must be positive");
    }
    if (c.buffer_capacity < 1) {
        throw ConfigError("buffer_capacity", "must be positive");
    }
    if (c.heads < 1) {
        throw ConfigError("heads", "must be positive");
    }
    if (!(c.explore_sigma >= 0.0)) {
        throw ConfigError("explore_sigma", "must be non-negative");
    }
    check_prob("epsilon", c.epsilon);
    if (!(c.reward_clamp > 0.0)) {
        throw ConfigError("reward_clamp", "must be positive");
    }
    if (c.generations < 0) {
        throw ConfigError("generations", "must be non-negative");
    }
    if (c.episodes_per_eval < 1) {
        throw ConfigError("episodes_per_eval", "must be positive");
    }
    if (c.out.empty()) {
        throw ConfigError("out", "must not be empty");
    }
    if (c.export_interval < 0) {
        throw ConfigError("export_interval", "must be non-negative");
    }
}

ExperimentConfig parse_config(const std::string& text, ExperimentConfig base)
{
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno), "expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto& table = fields();
        const auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) { return key == f.key; });
        if (it == table.end()) {
            throw ConfigError(key, "unknown key");
        }
        it->set(base, value);
    }
    validate(base);
    return base;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream is(path);
    if (!is) {
        throw ConfigError("config", "cannot read " + path);
    }
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

std::string to_text(const ExperimentConfig& c)
{
    std::string out;
    for (const auto& f : fields()) {
        out += f.key;
        out += " = ";
        out += f.get(c);
        out += '\n';
    }
    return out;
}

std::unique_ptr<env::Environment> make_environment(const ExperimentConfig& c)
{
    if (c.env == "sparse_gridworld") {
        env::GridWorldParams p;
        p.size = c.grid_size;
        p.random_start = c.grid_random_start;
        p.walls = parse_walls(c.grid_walls);
        return std::make_unique<env::SparseGridWorld>(p);
    }
    if (c.env == "sparse_catcher") {
        env::CatcherParams p;
        p.drops = c.catcher_drops;
        return std::make_unique<env::SparseCatcher>(p);
    }
    if (c.env == "sparse_pointmass") {
        env::PointMassParams p;
        p.max_steps = c.pointmass_max_steps;
        return std::make_unique<env::SparsePointMass>(p);
    }
    throw ConfigError("env", "unknown environment '" + c.env + "'");
}

evo::LisrParams make_params(const ExperimentConfig& c, const env::EnvSpec& spec)
{
    evo::LisrParams p;
    p.k_ea = c.k_ea();
    p.k_sr = c.k_sr();
    p.ea_hidden = c.ea_hidden;
    p.ea.elite_fraction = c.elite_fraction;
    p.ea.tournament_size = c.tournament_size;
    p.ea.crossover_fraction = c.crossover_fraction;
    p.ea.mutation = {c.mut_prob, c.mut_frac, c.mut_strength, c.supermut_prob, c.reset_prob};
    p.trees.elite_fraction = c.elite_fraction;
    p.trees.tournament_size = c.tournament_size;
    p.trees.max_depth = c.max_depth;
    p.trees.grow.operator_prob = c.operator_prob;
    p.trees.grow.feature_prob = c.feature_prob;

    auto lp = learn::LearnerParams::for_env(spec);
    lp.hidden = c.hidden;
    lp.gamma = c.gamma;
    lp.tau = c.tau;
    lp.actor_lr = c.actor_lr;
    lp.critic_lr = c.critic_lr;
    lp.heads = c.heads;
    lp.layout = layout_from_name(c.feature_layout);
    lp.sanitizer.clamp_bound = c.reward_clamp;
    lp.explore_sigma = c.explore_sigma;
    lp.epsilon = c.epsilon;
    lp.exec = c.single_threaded ? kernels::Exec::Serial : kernels::Exec::Parallel;
    p.learner = lp;

    p.batch_size = c.batch_size;
    p.updates_per_generation = c.updates_per_generation;
    p.exploration_steps = c.exploration_steps;
    p.buffer_capacity = c.buffer_capacity;
    p.episodes_per_eval = c.episodes_per_eval;
    p.sr_explore_during_eval = c.sr_explore_during_eval;
    p.parallel = !c.single_threaded;
    p.seed = c.seed;
    return p;
}

std::vector<ExperimentConfig> grid(const ExperimentConfig& base, env::ActionKind kind)
{
    const std::vector<double> lrs = {1e-3, 1e-4, 3e-5};
    const std::vector<std::size_t> batches = kind == env::ActionKind::Continuous
        ? std::vector<std::size_t>{256, 1024}
        : std::vector<std::size_t>{64, 256};
    std::vector<ExperimentConfig> out;
    for (double lr : lrs) {
        for (std::size_t b : batches) {
            auto c = base;
            c.actor_lr = lr;
            c.critic_lr = lr;
            c.batch_size = b;
            char suffix[64];
            std::snprintf(suffix, sizeof(suffix), "/lr%g_b%zu", lr, b);
            c.out = base.out + suffix;
            out.push_back(std::move(c));
        }
    }
    return out;
}

} // namespace lisr::cfg
