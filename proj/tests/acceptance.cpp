// Acceptance suite: one pass/fail line per criterion, nonzero exit on any failure.
// Optional arguments select criteria by number, e.g. `acceptance 1 2 11`.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lisr/config.hpp"
#include "lisr/evolution.hpp"
#include "lisr/experiment.hpp"
#include "lisr/learners.hpp"
#include "lisr/neuronet.hpp"
#include "lisr/replay.hpp"
#include "lisr/symtree.hpp"
#include "oracles/reference.hpp"
#include "test_util.hpp"

using namespace lisr;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// 1
Outcome operator_conformance()
{
    using symtree::OpKind;
    const auto t0 = Clock::now();
    Rng rng = derive_rng(101, {1});
    const auto specials = testutil::special_values();
    std::size_t mismatches = 0;
    std::int64_t worst_ulp = 0;
    for (auto op : symtree::kAllOps) {
        const std::string name(symtree::op_name(op));
        const bool transcendental = op == OpKind::Cos || op == OpKind::Sin || op == OpKind::Tan;
        for (int i = 0; i < 1000; ++i) {
            std::size_t n = symtree::is_variadic(op) ? 2 + uniform_index(rng, 4)
                                                     : static_cast<std::size_t>(symtree::fixed_arity(op));
            std::vector<double> args(n);
            for (auto& a : args) {
                switch (i % 4) {
                case 0:
                    a = specials[uniform_index(rng, specials.size())];
                    break;
                case 1:
                    a = std::round(normal(rng, 3.0));
                    break;
                default:
                    a = normal(rng, 10.0);
                }
            }
            if (i % 10 == 3 && n >= 2) {
                args[1] = args[0];
            }
            const double got = symtree::eval_op(op, args);
            const double want = oracle::ref_apply(name, args);
            if (transcendental) {
                const auto d = testutil::ulp_distance(got, want);
                worst_ulp = std::max(worst_ulp, d);
                mismatches += d > 1;
            } else {
                mismatches += !testutil::same_bits(got, want);
            }
        }
    }
    const double secs = seconds_since(t0);
    return {mismatches == 0 && secs < 1.0,
            "17 ops x 1000 inputs, mismatches " + std::to_string(mismatches) + ", worst transcendental ulp "
                + std::to_string(worst_ulp) + ", " + fmt("%.3f s", secs)};
}

// 2
Outcome protected_div_edges()
{
    const auto v = testutil::special_values();
    std::size_t bad = 0;
    std::size_t ones = 0;
    for (double l : v) {
        for (double r : v) {
            const double args[] = {l, r};
            const double q = symtree::eval_op(symtree::OpKind::ProtectedDiv, args);
            const double raw = l / r;
            if (!std::isfinite(raw)) {
                bad += q != 1.0;
                ++ones;
            } else {
                bad += !testutil::same_bits(q, raw);
            }
        }
    }
    return {bad == 0, "20x20 grid, " + std::to_string(ones) + " non-finite quotients, violations " + std::to_string(bad)};
}

// 3
Outcome unroll_fidelity()
{
    const auto t0 = Clock::now();
    Rng rng = derive_rng(103, {1});
    const auto names = symtree::default_feature_names(8);
    std::size_t bad = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto tree = symtree::random_tree(8, 3, rng);
        const std::string code = symtree::unroll(tree, names);
        for (int k = 0; k < 100; ++k) {
            std::vector<double> x(8);
            for (auto& v : x) {
                v = k % 5 == 0 ? std::round(normal(rng, 1.0)) : normal(rng, 3.0);
            }
            oracle::UnrollInterpreter interp(names, x);
            bad += !testutil::same_bits(interp.run(code), symtree::evaluate(tree, x));
        }
    }
    const double secs = seconds_since(t0);
    return {bad == 0 && secs < 30.0,
            "1000 trees x 100 inputs, mismatches " + std::to_string(bad) + ", " + fmt("%.2f s", secs)};
}

// 4
Outcome depth_closure()
{
    Rng rng = derive_rng(104, {1});
    std::size_t violations = 0;
    std::vector<symtree::SymTree> pool;
    for (int i = 0; i < 64; ++i) {
        pool.push_back(symtree::random_tree(8, 3, rng));
    }
    for (int i = 0; i < 10000; ++i) {
        const auto a = uniform_index(rng, pool.size());
        const auto b = uniform_index(rng, pool.size());
        symtree::SymTree out = pool[a];
        switch (i % 3) {
        case 0:
            out = symtree::random_tree(8, 3, rng);
            break;
        case 1:
            out = symtree::mutate_tree(pool[a], 3, rng);
            break;
        default:
            out = symtree::crossover_trees(pool[a], pool[b], 3, rng);
        }
        violations += out.depth() > 3;
        pool[b] = out;
    }
    return {violations == 0, "10000 operations, violations " + std::to_string(violations)};
}

// 5
Outcome mutation_statistics()
{
    const auto t0 = Clock::now();
    Rng init = derive_rng(105, {0});
    Rng rng = derive_rng(105, {1});
    const std::vector<std::size_t> sizes{8, 32, 32, 4};
    std::size_t super = 0;
    std::size_t reset = 0;
    std::size_t normal_ev = 0;
    std::size_t events = 0;
    std::size_t untouched_changed = 0;
    while (events < 100000) {
        nn::Mlp net = nn::Mlp::random(sizes, nn::Activation::Tanh, nn::Activation::Identity, init);
        const nn::Mlp before = net;
        nn::MutationStats s;
        nn::mutate_genome(net, nn::MutationParams{}, rng, &s);
        super += s.super_events;
        reset += s.reset_events;
        normal_ev += s.normal_events;
        events += s.events();
        const std::set<std::size_t> touched(s.touched.begin(), s.touched.end());
        for (std::size_t i = 0; i < net.param_count(); ++i) {
            if (touched.count(i) == 0 && !testutil::same_bits(net.params()[i], before.params()[i])) {
                ++untouched_changed;
            }
        }
    }
    const double n = static_cast<double>(events);
    const double rs = super / n;
    const double rr = reset / n;
    const double rn = normal_ev / n;
    const double secs = seconds_since(t0);
    const bool ok = std::fabs(rs - 0.05) <= 0.005 && std::fabs(rr - 0.0475) <= 0.005 && std::fabs(rn - 0.9025) <= 0.005
                    && untouched_changed == 0 && secs < 10.0;
    return {ok, std::to_string(events) + " events, rates " + fmt("%.4f", rs) + "/" + fmt("%.4f", rr) + "/"
                    + fmt("%.4f", rn) + ", untouched changed " + std::to_string(untouched_changed) + ", "
                    + fmt("%.2f s", secs)};
}

// 6
Outcome gradient_correctness()
{
    constexpr double h = 1e-5;
    constexpr double floor_ = 1e-7;
    Rng rng = derive_rng(106, {0});
    const std::size_t batch = 8;
    const std::vector<std::size_t> csizes{5, 16, 16, 1};
    const std::vector<std::size_t> asizes{3, 16, 16, 2};
    nn::Mlp critic = nn::Mlp::random(csizes, nn::Activation::Tanh, nn::Activation::Identity, rng);
    nn::Mlp actor = nn::Mlp::random(asizes, nn::Activation::Tanh, nn::Activation::Tanh, rng);
    std::vector<double> inputs(batch * 5);
    std::vector<double> targets(batch);
    std::vector<double> states(batch * 3);
    for (auto& v : inputs) {
        v = 2.0 * uniform01(rng) - 1.0;
    }
    for (auto& v : targets) {
        v = 4.0 * uniform01(rng) - 2.0;
    }
    for (auto& v : states) {
        v = 2.0 * uniform01(rng) - 1.0;
    }

    auto probe = [&](nn::Mlp& net, const std::function<double()>& loss, const std::vector<double>& grad) {
        double worst = 0.0;
        for (int k = 0; k < 50; ++k) {
            const auto i = uniform_index(rng, net.param_count());
            const double saved = net.params()[i];
            net.params()[i] = saved + h;
            const double up = loss();
            net.params()[i] = saved - h;
            const double down = loss();
            net.params()[i] = saved;
            const double numeric = (up - down) / (2.0 * h);
            const double rel = std::fabs(numeric - grad[i]) / std::max({std::fabs(numeric), std::fabs(grad[i]), floor_});
            worst = std::max(worst, rel);
        }
        return worst;
    };

    std::vector<double> cg(critic.param_count(), 0.0);
    learn::critic_loss_grad(critic, inputs, targets, cg);
    const double critic_err = probe(critic, [&] {
        std::vector<double> sink(critic.param_count());
        return learn::critic_loss_grad(critic, inputs, targets, sink);
    }, cg);

    std::vector<double> ag(actor.param_count(), 0.0);
    learn::actor_loss_grad(actor, critic, states, batch, -1.0, 1.0, ag);
    const double actor_err = probe(actor, [&] {
        std::vector<double> sink(actor.param_count());
        return learn::actor_loss_grad(actor, critic, states, batch, -1.0, 1.0, sink);
    }, ag);

    return {critic_err < 1e-4 && actor_err < 1e-4,
            "50 probes each, max rel error critic " + fmt("%.2e", critic_err) + ", actor " + fmt("%.2e", actor_err)};
}

// 7
Outcome soft_update_exactness()
{
    Rng rng = derive_rng(107, {0});
    const std::vector<std::size_t> sizes{4, 16, 16, 2};
    const nn::Mlp source = nn::Mlp::random(sizes, nn::Activation::Tanh, nn::Activation::Identity, rng);
    nn::Mlp target = nn::Mlp::random(sizes, nn::Activation::Tanh, nn::Activation::Identity, rng);
    const nn::Mlp start = target;
    const double tau = 1e-3;
    for (int n = 0; n < 1000; ++n) {
        nn::soft_update(target, source, tau);
    }
    const double factor = std::pow(1.0 - tau, 1000);
    double worst = 0.0;
    for (std::size_t i = 0; i < target.param_count(); ++i) {
        const double closed = source.params()[i] + factor * (start.params()[i] - source.params()[i]);
        worst = std::max(worst, std::fabs(target.params()[i] - closed));
    }
    return {worst < 1e-12, "1000 steps at tau 1e-3, max abs error " + fmt("%.2e", worst)};
}

// Rewards scaled and shifted on the way out; observations untouched.
class PoisonedReward final : public env::Environment {
public:
    explicit PoisonedReward(std::unique_ptr<env::Environment> inner)
        : inner_(std::move(inner))
    {
    }
    const env::EnvSpec& spec() const override { return inner_->spec(); }
    std::vector<double> reset(Rng& rng) override { return inner_->reset(rng); }
    env::StepResult step(std::span<const double> action) override
    {
        auto r = inner_->step(action);
        r.reward = 1000.0 * r.reward - 7.0;
        return r;
    }
    std::unique_ptr<env::Environment> clone() const override
    {
        return std::make_unique<PoisonedReward>(inner_->clone());
    }

private:
    std::unique_ptr<env::Environment> inner_;
};

// 8
Outcome reward_isolation()
{
    // direct: same batches, poisoned env_reward fields
    bool direct_same = true;
    for (auto kind : {env::ActionKind::Continuous, env::ActionKind::Discrete}) {
        learn::LearnerParams p;
        p.kind = kind;
        p.state_dim = 3;
        p.action_dim = kind == env::ActionKind::Continuous ? 2 : 1;
        p.n_actions = 4;
        p.hidden = {16, 16};
        const int fdim = static_cast<int>(learn::feature_dim(p.layout, p.state_dim, p.action_dim));
        Rng r0 = derive_rng(108, {0});
        const auto tree = symtree::random_tree(fdim, 3, r0, symtree::GrowParams{1.0, 0.9});
        Rng r1 = derive_rng(108, {1});
        Rng r2 = derive_rng(108, {1});
        learn::SrLearner clean(p, tree, r1);
        learn::SrLearner poisoned(p, tree, r2);
        ReplayBuffer buf(512, p.state_dim, p.action_dim);
        Rng data = derive_rng(108, {2});
        for (int i = 0; i < 512; ++i) {
            Transition t;
            for (std::size_t d = 0; d < p.state_dim; ++d) {
                t.state.push_back(normal(data, 1.0));
                t.next_state.push_back(normal(data, 1.0));
            }
            if (kind == env::ActionKind::Continuous) {
                t.action = {2.0 * uniform01(data) - 1.0, 2.0 * uniform01(data) - 1.0};
            } else {
                t.action = {static_cast<double>(uniform_index(data, 4))};
            }
            t.env_reward = uniform01(data) < 0.05 ? 1.0 : 0.0;
            t.done = uniform01(data) < 0.1;
            buf.append(t);
        }
        Rng s1 = derive_rng(108, {3});
        Rng s2 = derive_rng(108, {3});
        for (int step = 0; step < 20; ++step) {
            const auto batch = buf.sample(32, s1);
            auto bad = buf.sample(32, s2);
            for (std::size_t i = 0; i < bad.size(); ++i) {
                bad[i].env_reward = i % 3 == 0 ? std::nan("") : (i % 3 == 1 ? 1e300 : -42.0);
            }
            clean.update(batch);
            poisoned.update(bad);
            direct_same = direct_same && clean.critics() == poisoned.critics() && clean.actor() == poisoned.actor();
        }
    }

    // end to end: one SR learner (its tree is always the elite), env rewards rewritten
    evo::LisrParams lp;
    lp.k_ea = 0;
    lp.k_sr = 1;
    lp.learner.hidden = {16};
    lp.batch_size = 32;
    lp.exploration_steps = 64;
    lp.buffer_capacity = 10000;
    lp.seed = 8;
    env::GridWorldParams gp;
    gp.size = 5;
    evo::Lisr plain(lp, std::make_unique<env::SparseGridWorld>(gp));
    evo::Lisr poisoned(lp, std::make_unique<PoisonedReward>(std::make_unique<env::SparseGridWorld>(gp)));
    bool trajectory_same = true;
    bool fitness_differs = true;
    std::size_t updates = 0;
    for (int g = 0; g < 15; ++g) {
        const auto a = plain.run_generation();
        const auto b = poisoned.run_generation();
        updates += a.gradient_updates;
        fitness_differs = fitness_differs && a.sr_fitness != b.sr_fitness;
        trajectory_same = trajectory_same && plain.learners()[0].critics() == poisoned.learners()[0].critics()
                          && a.gradient_updates == b.gradient_updates;
    }
    const bool ok = direct_same && trajectory_same && fitness_differs && updates > 0;
    return {ok, std::string("direct batches ") + (direct_same ? "identical" : "DIFFER") + ", 15-generation run "
                    + (trajectory_same ? "identical" : "DIFFERS") + " over " + std::to_string(updates)
                    + " updates, fitness " + (fitness_differs ? "changed" : "UNCHANGED")};
}

// 9
Outcome replay_semantics()
{
    const std::size_t cap = 16;
    ReplayBuffer buf(cap, 1, 1);
    std::size_t bad = 0;
    for (std::size_t k = 1; k <= 64; ++k) {
        Transition t;
        t.state = {static_cast<double>(k)};
        t.action = {0.0};
        t.next_state = {0.0};
        t.env_reward = static_cast<double>(k);
        buf.append(t);
        const auto snap = buf.snapshot();
        const std::size_t oldest = k >= cap ? k - cap + 1 : 1;
        bad += snap.size() != std::min(k, cap);
        bad += buf.write_cursor() != k % cap;
        for (std::size_t i = 0; i < snap.size(); ++i) {
            bad += snap[i].env_reward != static_cast<double>(oldest + i);
        }
        for (std::size_t slot = 0; slot < buf.size(); ++slot) {
            // slot s holds the latest append k' <= k with (k' - 1) % cap == s
            const std::size_t latest = slot + 1 + ((k - 1 - slot) / cap) * cap;
            bad += buf.at(slot).env_reward != static_cast<double>(latest);
        }
    }

    ReplayBuffer big(100, 1, 1);
    for (std::size_t k = 0; k < 100; ++k) {
        Transition t;
        t.state = {0.0};
        t.action = {0.0};
        t.next_state = {0.0};
        t.env_reward = static_cast<double>(k);
        big.append(t);
    }
    Rng rng = derive_rng(109, {1});
    std::vector<double> counts(100, 0.0);
    for (int k = 0; k < 1000; ++k) {
        for (const auto& t : big.sample(100, rng)) {
            counts[static_cast<std::size_t>(t.env_reward)] += 1.0;
        }
    }
    double chi2 = 0.0;
    for (double c : counts) {
        chi2 += (c - 1000.0) * (c - 1000.0) / 1000.0;
    }
    const double p = oracle::chi2_sf(chi2, 99.0);
    return {bad == 0 && p > 0.001, "capacity 16 x 64 appends, mismatches " + std::to_string(bad)
                                       + "; 1e5 draws chi2 " + fmt("%.1f", chi2) + " p " + fmt("%.3f", p)};
}

cfg::ExperimentConfig gridworld_config(const fs::path& out, std::uint64_t seed)
{
    cfg::ExperimentConfig c;
    c.env = "sparse_gridworld";
    c.grid_size = 8;
    c.k = 20;
    c.hidden = {64, 64};
    c.ea_hidden = {32, 32};
    c.batch_size = 64;
    c.exploration_steps = 1000;
    c.seed = seed;
    c.out = out.string();
    c.single_threaded = true;
    c.export_interval = 0;
    return c;
}

// 10
Outcome determinism()
{
    const auto t0 = Clock::now();
    const auto dir = testutil::temp_dir("acceptance_det");
    auto a = gridworld_config(dir / "a", 3);
    a.generations = 20;
    auto b = a;
    b.out = (dir / "b").string();
    const auto ra = exp::run(a);
    const auto rb = exp::run(b);
    const bool curve = slurp(ra.curve_csv) == slurp(rb.curve_csv);
    const bool losses = slurp(ra.losses_csv) == slurp(rb.losses_csv);
    const double secs = seconds_since(t0);
    return {curve && losses && ra.generations == 20 && secs < 120.0,
            std::string("20 generations twice: curve ") + (curve ? "identical" : "DIFFERS") + ", losses "
                + (losses ? "identical" : "DIFFER") + ", " + fmt("%.1f s", secs)};
}

struct SweepResult {
    std::vector<double> best;
    std::vector<double> auc;
    double seconds = 0.0;
};

SweepResult sweep(const std::function<cfg::ExperimentConfig(std::uint64_t)>& make, std::uint64_t frame_budget)
{
    SweepResult r;
    const auto t0 = Clock::now();
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto c = make(seed);
        c.frames = frame_budget;
        c.generations = 1000000;
        const auto art = exp::run(c);
        r.best.push_back(*std::max_element(art.champion_curve.begin(), art.champion_curve.end()));
        r.auc.push_back(exp::area_under_curve(art.champion_curve, art.frames_curve, frame_budget));
        std::printf("  seed %llu: best %g, auc %.0f, frames %llu, generations %d\n",
                    static_cast<unsigned long long>(seed), r.best.back(), r.auc.back(),
                    static_cast<unsigned long long>(art.frames), art.generations);
        std::fflush(stdout);
    }
    r.seconds = seconds_since(t0);
    return r;
}

// 11
Outcome end_to_end()
{
    const std::uint64_t budget = 300000;
    const auto dir = testutil::temp_dir("acceptance_e2e");

    std::printf("  sparse_gridworld lisr\n");
    const auto lisr = sweep([&](std::uint64_t s) { return gridworld_config(dir / ("lisr" + std::to_string(s)), s); },
                            budget);
    std::printf("  sparse_gridworld ea-only\n");
    const auto ea = sweep([&](std::uint64_t s) {
        auto c = gridworld_config(dir / ("ea" + std::to_string(s)), s);
        c.mode = cfg::Mode::EaOnly;
        return c;
    }, budget);
    std::printf("  sparse_catcher sr-only\n");
    const auto catcher = sweep([&](std::uint64_t s) {
        cfg::ExperimentConfig c;
        c.env = "sparse_catcher";
        c.mode = cfg::Mode::SrOnly;
        c.k = 20;
        c.hidden = {64, 64};
        c.batch_size = 64;
        c.exploration_steps = 5000;
        c.seed = s;
        c.out = (dir / ("catcher" + std::to_string(s))).string();
        c.export_interval = 0;
        return c;
    }, budget);

    const double lisr_best = median(lisr.best);
    const double lisr_auc = median(lisr.auc);
    const double ea_auc = median(ea.auc);
    const double catcher_best = median(catcher.best);
    const bool success = lisr_best >= 1.0;
    const bool ordering = lisr_auc >= ea_auc;
    const bool catches = catcher_best >= 8.0;
    const bool time_ok = lisr.seconds < 1800.0 && ea.seconds < 1800.0 && catcher.seconds < 1800.0;
    return {success && ordering && catches && time_ok,
            "gridworld median lisr best " + fmt("%g", lisr_best) + ", median auc lisr " + fmt("%.0f", lisr_auc)
                + " vs ea-only " + fmt("%.0f", ea_auc) + "; catcher median sr-only best " + fmt("%g", catcher_best)
                + "; minutes " + fmt("%.1f", lisr.seconds / 60) + "/" + fmt("%.1f", ea.seconds / 60) + "/"
                + fmt("%.1f", catcher.seconds / 60)};
}

std::size_t census(const std::string& prefix)
{
    return static_cast<std::size_t>(std::count(prefix.begin(), prefix.end(), '('));
}

std::size_t assignments(const std::string& unrolled)
{
    std::size_t n = 0;
    std::istringstream is(unrolled);
    std::string line;
    while (std::getline(is, line)) {
        n += line.rfind("v_", 0) == 0;
    }
    return n;
}

// 12
Outcome tree_export_parity()
{
    Rng rng = derive_rng(112, {0});
    std::size_t bad = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto tree = symtree::random_tree(8, 1 + i % 3, rng);
        const auto r = exp::render_tree(tree, symtree::default_feature_names(8));
        const std::size_t c = census(r.serialized);
        bad += r.operator_count != c || assignments(r.unrolled) != c;
    }

    const auto dir = testutil::temp_dir("acceptance_export");
    std::size_t champions_bad = 0;
    std::size_t with_operators = 0;
    std::string detail;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        cfg::ExperimentConfig c;
        c.env = "sparse_catcher";
        c.mode = cfg::Mode::SrOnly;
        c.k = 6;
        c.hidden = {16};
        c.batch_size = 32;
        c.exploration_steps = 200;
        c.generations = 4;
        c.seed = seed;
        c.out = (dir / ("run" + std::to_string(seed))).string();
        exp::run(c);
        const auto champ = exp::export_tree(c.out, "champion");
        const std::size_t reported = std::stoul(slurp(champ.files[2]));
        const std::size_t counted = census(slurp(champ.files[0]));
        const std::size_t lines = assignments(slurp(champ.files[1]));
        champions_bad += reported != counted || lines != counted;
        with_operators += counted > 0;
        detail += (seed > 1 ? " " : "") + std::to_string(reported) + "/" + std::to_string(counted) + "/"
                  + std::to_string(lines);
    }
    return {bad == 0 && champions_bad == 0 && with_operators > 0,
            "1000 random trees, mismatches " + std::to_string(bad)
                + "; champions over 5 seeds (reported/census/assignments): " + detail};
}

} // namespace

int main(int argc, char** argv)
{
    const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
        {"operator conformance", operator_conformance},
        {"protected_div edge semantics", protected_div_edges},
        {"unroll fidelity", unroll_fidelity},
        {"depth closure", depth_closure},
        {"mutation statistics", mutation_statistics},
        {"gradient correctness", gradient_correctness},
        {"soft-update exactness", soft_update_exactness},
        {"reward-channel isolation", reward_isolation},
        {"replay semantics", replay_semantics},
        {"determinism", determinism},
        {"end-to-end learning", end_to_end},
        {"tree export parity", tree_export_parity},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) {
        selected.insert(std::atoi(argv[i]));
    }
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int number = static_cast<int>(i) + 1;
        if (!selected.empty() && selected.count(number) == 0) {
            continue;
        }
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("[%s] criterion %d: %s: %s\n", o.pass ? "PASS" : "FAIL", number, criteria[i].first,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
