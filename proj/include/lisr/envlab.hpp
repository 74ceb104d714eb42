#pragma once

// Desk-scale sparse-reward environments with a shared episodic interface.

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lisr/rng.hpp"

namespace lisr::env {

enum class ActionKind { Continuous, Discrete };

struct EnvSpec {
    std::string name;
    std::size_t observation_dim = 0;
    ActionKind action_kind = ActionKind::Discrete;
    std::size_t action_dim = 1; // continuous width; 1 for discrete (the index)
    int n_actions = 0;          // discrete only
    double action_low = -1.0;   // continuous only
    double action_high = 1.0;
    int max_steps = 0;
    std::vector<std::string> observation_names;
    std::string reward_description;
};

struct StepResult {
    std::vector<double> observation;
    double reward = 0.0;
    bool done = false;      // episode over, for either reason
    bool truncated = false; // over because max_steps was hit
    int step = 0;
};

class Environment {
public:
    virtual ~Environment() = default;

    virtual const EnvSpec& spec() const = 0;
    virtual std::vector<double> reset(Rng& rng) = 0;
    // Discrete environments read the action index from action[0].
    virtual StepResult step(std::span<const double> action) = 0;
    virtual std::unique_ptr<Environment> clone() const = 0;
};

// 2-D point mass. obs = (x, y, vx, vy); force action in [-1, 1]^2.
// x <- x + v dt, then v <- v + a dt - friction v. Reward +1 (and episode end)
// once within goal_radius of the goal, 0 otherwise.
struct PointMassParams {
    double dt = 0.05;
    double friction = 0.1;
    double goal_x = 0.5;
    double goal_y = 0.5;
    double goal_radius = 0.05;
    double arena = 1.0; // positions clipped to [-arena, arena]
    // Start position uniform in [start_low, start_high]^2, at rest.
    double start_low = -0.5;
    double start_high = -0.3;
    int max_steps = 200;
};

class SparsePointMass final : public Environment {
public:
    explicit SparsePointMass(PointMassParams params = {});

    const EnvSpec& spec() const override { return spec_; }
    std::vector<double> reset(Rng& rng) override;
    StepResult step(std::span<const double> action) override;
    std::unique_ptr<Environment> clone() const override { return std::make_unique<SparsePointMass>(*this); }

    const PointMassParams& params() const { return params_; }
    // Place the mass directly (tests and scripted controllers).
    void set_state(double x, double y, double vx, double vy);
    std::vector<double> observation() const;

private:
    PointMassParams params_;
    EnvSpec spec_;
    double x_ = 0.0;
    double y_ = 0.0;
    double vx_ = 0.0;
    double vy_ = 0.0;
    int t_ = 0;
};

// N x N grid. obs = (x, y, goal_x - x, goal_y - y), all divided by N - 1.
// Actions: 0 up (+y), 1 down (-y), 2 left (-x), 3 right (+x). Walls and the
// border block movement. Reward +1 on reaching the goal, 0 otherwise;
// max 4N steps.
struct GridWorldParams {
    int size = 8;
    int start_x = 0;
    int start_y = 0;
    int goal_x = -1; // -1 means size - 1
    int goal_y = -1;
    bool random_start = false; // uniform over free non-goal cells
    std::vector<std::pair<int, int>> walls;
};

class SparseGridWorld final : public Environment {
public:
    explicit SparseGridWorld(GridWorldParams params = {});

    const EnvSpec& spec() const override { return spec_; }
    std::vector<double> reset(Rng& rng) override;
    StepResult step(std::span<const double> action) override;
    std::unique_ptr<Environment> clone() const override { return std::make_unique<SparseGridWorld>(*this); }

    int size() const { return params_.size; }
    int goal_x() const { return goal_x_; }
    int goal_y() const { return goal_y_; }
    int x() const { return x_; }
    int y() const { return y_; }
    bool is_wall(int x, int y) const;
    void set_position(int x, int y);
    std::vector<double> observation() const;

    // Cell reached from (x, y) by `action` (walls and border keep it in place).
    std::pair<int, int> move(int x, int y, int action) const;
    // Steps-to-goal for every cell (row-major, index y * size + x) by Bellman
    // relaxation; -1 for walls and unreachable cells.
    std::vector<int> distance_to_goal() const;

private:
    GridWorldParams params_;
    EnvSpec spec_;
    std::vector<char> wall_;
    int goal_x_ = 0;
    int goal_y_ = 0;
    int x_ = 0;
    int y_ = 0;
    int t_ = 0;
};

// Falling-object catcher on integer ticks. The arena [0, 1] has `ticks` + 1
// paddle positions; objects drop from one of `columns` evenly spaced
// positions and fall one row per step. obs = (paddle x, object x, object y,
// object vy). Actions: 0 left, 1 stay, 2 right. On floor contact: +1 if the
// paddle is within `catch_ticks` of the object, else -1. `drops` objects per
// episode.
struct CatcherParams {
    int ticks = 20;        // positions 0..ticks, spacing 1/ticks
    int fall_steps = 20;   // steps from top to floor
    int catch_ticks = 2;   // half-width of the paddle
    int drops = 10;
    int paddle_start = 10; // tick index
};

class SparseCatcher final : public Environment {
public:
    explicit SparseCatcher(CatcherParams params = {});

    const EnvSpec& spec() const override { return spec_; }
    std::vector<double> reset(Rng& rng) override;
    StepResult step(std::span<const double> action) override;
    std::unique_ptr<Environment> clone() const override { return std::make_unique<SparseCatcher>(*this); }

    const CatcherParams& params() const { return params_; }
    // Tick positions an object can drop from.
    std::vector<int> drop_columns() const;
    int paddle() const { return paddle_; }
    int object_x() const { return object_x_; }
    int fall_step() const { return fall_; }
    // Force the drop sequence for the current episode (tests).
    void set_drops(std::vector<int> columns);
    std::vector<double> observation() const;

private:
    CatcherParams params_;
    EnvSpec spec_;
    std::vector<int> drops_;
    std::size_t drop_index_ = 0;
    int paddle_ = 0;
    int object_x_ = 0;
    int fall_ = 0;
    int t_ = 0;
};

std::vector<std::string> environment_names();

} // namespace lisr::env
