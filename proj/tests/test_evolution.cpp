#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "lisr/evolution.hpp"
#include "oracles/reference.hpp"
#include "test_util.hpp"

using namespace lisr;
using namespace lisr::evo;
using nn::Activation;
using nn::Mlp;

namespace {

std::unique_ptr<env::Environment> small_grid(int n = 4)
{
    env::GridWorldParams gp;
    gp.size = n;
    return std::make_unique<env::SparseGridWorld>(gp);
}

LisrParams small_params(std::size_t k_ea = 3, std::size_t k_sr = 3)
{
    LisrParams p;
    p.k_ea = k_ea;
    p.k_sr = k_sr;
    p.ea_hidden = {8};
    p.learner.hidden = {8};
    p.batch_size = 16;
    p.exploration_steps = 40;
    p.buffer_capacity = 5000;
    p.seed = 11;
    return p;
}

Policy constant_action(int a)
{
    return [a](std::span<const double>) { return std::vector<double>{static_cast<double>(a)}; };
}

std::vector<Mlp> random_population(std::size_t k, std::uint64_t seed)
{
    Rng rng = derive_rng(seed, {0});
    const std::vector<std::size_t> sizes{2, 3, 1};
    std::vector<Mlp> pop;
    for (std::size_t i = 0; i < k; ++i) {
        pop.push_back(Mlp::random(sizes, Activation::Tanh, Activation::Identity, rng));
    }
    return pop;
}

void check_same_records(const GenerationRecord& a, const GenerationRecord& b)
{
    CHECK(a.generation == b.generation);
    CHECK(a.ea_fitness == b.ea_fitness);
    CHECK(a.sr_fitness == b.sr_fitness);
    CHECK(a.champion_id == b.champion_id);
    CHECK(a.frames == b.frames);
    CHECK(a.gradient_updates == b.gradient_updates);
    CHECK(a.genome_operations == b.genome_operations);
    CHECK(testutil::same_bits(a.mean_intrinsic_reward, b.mean_intrinsic_reward));
    REQUIRE(a.losses.size() == b.losses.size());
    for (std::size_t i = 0; i < a.losses.size(); ++i) {
        CHECK(a.losses[i].critic_losses == b.losses[i].critic_losses);
        CHECK(a.losses[i].mean_reward == b.losses[i].mean_reward);
    }
}

void check_same_state(const Lisr& a, const Lisr& b)
{
    CHECK(a.generation() == b.generation());
    CHECK(a.frames() == b.frames());
    CHECK(a.ea_population() == b.ea_population());
    REQUIRE(a.learners().size() == b.learners().size());
    for (std::size_t l = 0; l < a.learners().size(); ++l) {
        CHECK(a.learners()[l].critics() == b.learners()[l].critics());
        CHECK(a.learners()[l].critic_targets() == b.learners()[l].critic_targets());
        CHECK(a.learners()[l].tree().structurally_equal(b.learners()[l].tree()));
    }
    CHECK(a.buffer().snapshot() == b.buffer().snapshot());
}

} // namespace

TEST_CASE("rollout counts steps and stores truncation as not done")
{
    auto env = small_grid(4);
    Rng rng = derive_rng(1, {0});
    // down from (0, 0) bumps the wall every step
    const auto stuck = rollout(constant_action(1), *env, rng);
    CHECK(stuck.score.value == 0.0);
    CHECK(stuck.score.steps == 16);
    REQUIRE(stuck.transitions.size() == 16);
    for (const auto& t : stuck.transitions) {
        CHECK_FALSE(t.done);
        CHECK(t.env_reward == 0.0);
    }

    int step = 0;
    Policy path = [&step](std::span<const double>) {
        return std::vector<double>{step++ % 2 == 0 ? 3.0 : 0.0};
    };
    const auto reach = rollout(path, *env, rng);
    CHECK(reach.score.value == 1.0);
    CHECK(reach.score.steps == 6);
    CHECK(reach.transitions.back().done);
    CHECK(reach.transitions.back().env_reward == 1.0);

    const auto twice = rollout(constant_action(1), *env, rng, 2);
    CHECK(twice.score.episodes == 2);
    CHECK(twice.transitions.size() == 32);

    ReplayBuffer buf(100, 4, 1);
    const auto score = evaluate(constant_action(1), *env, buf, rng);
    CHECK(buf.size() == score.steps);
    CHECK(buf.total_appends() == 16);
}

TEST_CASE("elite count and ranking")
{
    CHECK(elite_count(50, 0.07) == 4);
    CHECK(elite_count(25, 0.07) == 2);
    CHECK(elite_count(2, 0.07) == 1);
    CHECK(elite_count(20, 0.1) == 2);
    CHECK(elite_count(10, 1.0) == 10);
    const std::vector<double> f{1, 3, 3, 2};
    CHECK(rank_descending(f) == std::vector<std::size_t>{1, 2, 3, 0});
}

TEST_CASE("tournament selection frequencies follow the order-statistic law")
{
    // strictly increasing fitness: index i wins iff it is the max of 3 draws,
    // P = ((i+1)^3 - i^3) / n^3
    const std::size_t n = 10;
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) {
        f[i] = static_cast<double>(i);
    }
    Rng rng = derive_rng(2, {0});
    const int draws = 200000;
    std::vector<double> counts(n, 0.0);
    for (int k = 0; k < draws; ++k) {
        counts[tournament(f, 3, rng)] += 1.0;
    }
    double chi2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double p = (std::pow(i + 1.0, 3) - std::pow(static_cast<double>(i), 3)) / 1000.0;
        const double e = p * draws;
        chi2 += (counts[i] - e) * (counts[i] - e) / e;
        if (i > 0) {
            CHECK(counts[i] > counts[i - 1]);
        }
    }
    CHECK(oracle::chi2_sf(chi2, 9.0) > 0.001);

    // ties resolve to the earlier index
    const std::vector<double> flat(5, 1.0);
    std::vector<double> tie_counts(5, 0.0);
    for (int k = 0; k < 50000; ++k) {
        tie_counts[tournament(flat, 3, rng)] += 1.0;
    }
    // min of 3 uniform draws: P(i) = ((5-i)^3 - (4-i)^3) / 125
    for (std::size_t i = 0; i < 5; ++i) {
        const double p = (std::pow(5.0 - i, 3) - std::pow(4.0 - i, 3)) / 125.0;
        CHECK(std::fabs(tie_counts[i] / 50000.0 - p) < 0.01);
    }
}

TEST_CASE("EA selection with two actors")
{
    auto pop = random_population(2, 3);
    const std::vector<double> f{1.0, 5.0};
    Rng rng = derive_rng(3, {1});
    EaStats stats;
    const auto next = rank_and_select_ea(pop, f, EaParams{}, rng, &stats);
    REQUIRE(next.size() == 2);
    CHECK(next[0] == pop[1]);
    CHECK(stats.tournament_picks == 1);
    CHECK(stats.crossovers == 0);
}

TEST_CASE("EA elites survive unchanged over a thousand generations")
{
    const std::size_t k = 12;
    auto pop = random_population(k, 4);
    Rng rng = derive_rng(4, {1});
    EaParams params;
    params.elite_fraction = 0.2;
    const std::size_t e = elite_count(k, params.elite_fraction);
    for (int gen = 0; gen < 1000; ++gen) {
        std::vector<double> f(k);
        for (auto& v : f) {
            v = std::floor(uniform01(rng) * 6.0);
        }
        const auto order = rank_descending(f);
        EaStats stats;
        const auto next = rank_and_select_ea(pop, f, params, rng, &stats);
        REQUIRE(next.size() == k);
        for (std::size_t i = 0; i < e; ++i) {
            REQUIRE(next[i] == pop[order[i]]);
        }
        const std::size_t rest = k - e;
        CHECK(stats.tournament_picks + stats.crossovers == rest);
        CHECK(stats.crossovers == static_cast<std::size_t>(std::floor(0.5 * static_cast<double>(rest))));
        CHECK(stats.mutations <= rest);
        for (const auto& net : next) {
            REQUIRE(net.same_architecture(pop[0]));
        }
        pop = next;
    }
}

TEST_CASE("SR portfolio keeps exactly the elite trees")
{
    const int dim = 5;
    const std::size_t m = 20;
    Rng rng = derive_rng(5, {0});
    std::vector<symtree::SymTree> trees;
    for (std::size_t i = 0; i < m; ++i) {
        trees.push_back(symtree::random_tree(dim, 3, rng));
    }
    TreeEvoParams params;
    params.elite_fraction = 0.1;
    const std::size_t j = elite_count(m, params.elite_fraction);
    for (int round = 0; round < 200; ++round) {
        std::vector<double> scores(m);
        for (auto& s : scores) {
            s = uniform01(rng);
        }
        TreeEvoStats stats;
        const auto next = evolve_sr_portfolio(trees, scores, params, rng, &stats);
        REQUIRE(next.size() == m);
        const auto order = rank_descending(scores);
        REQUIRE(stats.elite_slots.size() == j);
        for (std::size_t i = 0; i < j; ++i) {
            CHECK(stats.elite_slots[i] == order[i]);
            CHECK(next[order[i]].structurally_equal(trees[order[i]]));
            CHECK(next[order[i]].id() == trees[order[i]].id());
        }
        for (std::size_t i = j; i < m; ++i) {
            CHECK(next[order[i]].id() != trees[order[i]].id());
        }
        CHECK(stats.crossovers + stats.mutations == m - j);
        for (const auto& t : next) {
            REQUIRE(t.depth() <= 3);
            REQUIRE(t.feature_dim() == dim);
        }
        trees = next;
    }

    params.elite_fraction = 1.0;
    std::vector<double> scores(m, 0.0);
    const auto kept = evolve_sr_portfolio(trees, scores, params, rng);
    for (std::size_t i = 0; i < m; ++i) {
        CHECK(kept[i].id() == trees[i].id());
    }
}

TEST_CASE("champion selection breaks ties toward the lowest id")
{
    const std::vector<double> ea{1.0, 3.0};
    const std::vector<double> sr{3.0, 2.0};
    CHECK(select_champion(ea, sr) == 1);
    CHECK(select_champion(std::vector<double>{}, sr) == 0);
    CHECK(select_champion(ea, std::vector<double>{4.0, 4.0}) == 2);
    CHECK(select_champion(std::vector<double>{-1.0}, std::vector<double>{}) == 0);
    CHECK_THROWS(select_champion(std::vector<double>{}, std::vector<double>{}));
}

TEST_CASE("generation accounting and population closure")
{
    Lisr lisr(small_params(), small_grid());
    std::uint64_t last_appends = 0;
    for (int g = 1; g <= 6; ++g) {
        const auto rec = lisr.run_generation();
        CHECK(rec.generation == g);
        CHECK(rec.ea_fitness.size() == 3);
        CHECK(rec.sr_fitness.size() == 3);
        CHECK(lisr.ea_population().size() == 3);
        CHECK(lisr.learners().size() == 3);
        CHECK(rec.frames == lisr.frames());
        CHECK(lisr.buffer().total_appends() == lisr.frames());
        CHECK(lisr.buffer().total_appends() >= last_appends);
        last_appends = lisr.buffer().total_appends();
        const double best = std::max(*std::max_element(rec.ea_fitness.begin(), rec.ea_fitness.end()),
                                     *std::max_element(rec.sr_fitness.begin(), rec.sr_fitness.end()));
        CHECK(rec.champion_fitness == best);
        REQUIRE(lisr.champion().has_value());
        CHECK(lisr.champion()->id == rec.champion_id);
        for (const auto& l : lisr.learners()) {
            CHECK(l.tree().depth() <= 3);
        }
    }
    CHECK(lisr.total_gradient_updates() > 0);
    CHECK(lisr.total_genome_operations() > 0);
}

TEST_CASE("frames grow by exactly the steps taken")
{
    Lisr lisr(small_params(2, 0), small_grid());
    // untrained actors on a 4x4 grid either reach the goal or use all 16 steps
    const auto rec = lisr.run_generation();
    CHECK(rec.frames <= 2 * 16);
    CHECK(rec.frames >= 2);
    CHECK(lisr.buffer().size() == rec.frames);
}

TEST_CASE("runs are deterministic and serial equals parallel")
{
    auto p = small_params();
    Lisr a(p, small_grid());
    Lisr b(p, small_grid());
    p.parallel = true;
    p.learner.exec = kernels::Exec::Parallel;
    Lisr c(p, small_grid());
    for (int g = 0; g < 4; ++g) {
        const auto ra = a.run_generation();
        const auto rb = b.run_generation();
        const auto rc = c.run_generation();
        check_same_records(ra, rb);
        check_same_records(ra, rc);
    }
    check_same_state(a, b);
    check_same_state(a, c);
}

TEST_CASE("best EA fitness never decreases on a deterministic task")
{
    auto p = small_params(6, 0);
    Lisr lisr(p, small_grid(5));
    double best = -1.0;
    for (int g = 0; g < 30; ++g) {
        const auto rec = lisr.run_generation();
        const double m = *std::max_element(rec.ea_fitness.begin(), rec.ea_fitness.end());
        CHECK(m >= best);
        best = m;
        CHECK(rec.gradient_updates == 0);
    }
}

TEST_CASE("sr-only runs do no genome operations")
{
    Lisr lisr(small_params(0, 3), small_grid());
    for (int g = 0; g < 3; ++g) {
        const auto rec = lisr.run_generation();
        CHECK(rec.genome_operations == 0);
        CHECK(rec.ea_fitness.empty());
        CHECK(rec.champion_id < 3);
    }
    CHECK(lisr.total_gradient_updates() > 0);
}

TEST_CASE("save and load resume the run exactly")
{
    const auto dir = testutil::temp_dir("evo_state");
    for (bool discrete : {true, false}) {
        auto p = small_params();
        auto make_env = [discrete]() -> std::unique_ptr<env::Environment> {
            if (discrete) {
                return small_grid();
            }
            env::PointMassParams pp;
            pp.max_steps = 20;
            return std::make_unique<env::SparsePointMass>(pp);
        };
        Lisr full(p, make_env());
        Lisr first(p, make_env());
        std::vector<GenerationRecord> want;
        for (int g = 0; g < 4; ++g) {
            want.push_back(full.run_generation());
        }
        for (int g = 0; g < 2; ++g) {
            first.run_generation();
        }
        const auto state = (dir / (discrete ? "d" : "c")).string();
        first.save_state(state);
        Lisr resumed(p, make_env());
        resumed.load_state(state);
        CHECK(resumed.generation() == 2);
        check_same_state(first, resumed);
        for (int g = 2; g < 4; ++g) {
            check_same_records(want[static_cast<std::size_t>(g)], resumed.run_generation());
        }
        check_same_state(full, resumed);

        auto other = p;
        other.k_sr = 2;
        Lisr mismatched(other, make_env());
        CHECK_THROWS(mismatched.load_state(state));
    }
}
