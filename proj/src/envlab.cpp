#include "lisr/envlab.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lisr::env {

// ---------------------------------------------------------------------------
// Point mass

SparsePointMass::SparsePointMass(PointMassParams params)
    : params_(params)
{
    if (params_.dt <= 0.0 || params_.max_steps <= 0 || params_.goal_radius <= 0.0) {
        throw std::invalid_argument("sparse_pointmass: dt, goal_radius and max_steps must be positive");
    }
    spec_.name = "sparse_pointmass";
    spec_.observation_dim = 4;
    spec_.action_kind = ActionKind::Continuous;
    spec_.action_dim = 2;
    spec_.action_low = -1.0;
    spec_.action_high = 1.0;
    spec_.max_steps = params_.max_steps;
    spec_.observation_names = {"x", "y", "vx", "vy"};
    spec_.reward_description = "+1 on entering the goal disc (episode ends), 0 otherwise";
}

std::vector<double> SparsePointMass::reset(Rng& rng)
{
    std::uniform_real_distribution<double> start(params_.start_low, params_.start_high);
    x_ = start(rng);
    y_ = start(rng);
    vx_ = 0.0;
    vy_ = 0.0;
    t_ = 0;
    return observation();
}

void SparsePointMass::set_state(double x, double y, double vx, double vy)
{
    x_ = x;
    y_ = y;
    vx_ = vx;
    vy_ = vy;
    t_ = 0;
}

std::vector<double> SparsePointMass::observation() const
{
    return {x_, y_, vx_, vy_};
}

StepResult SparsePointMass::step(std::span<const double> action)
{
    if (action.size() != 2) {
        throw std::invalid_argument("sparse_pointmass expects a 2-D action");
    }
    const double ax = std::clamp(action[0], -1.0, 1.0);
    const double ay = std::clamp(action[1], -1.0, 1.0);
    x_ += vx_ * params_.dt;
    y_ += vy_ * params_.dt;
    vx_ += ax * params_.dt - params_.friction * vx_;
    vy_ += ay * params_.dt - params_.friction * vy_;
    // Hitting the arena wall stops motion along that axis.
    if (std::abs(x_) > params_.arena) {
        x_ = std::clamp(x_, -params_.arena, params_.arena);
        vx_ = 0.0;
    }
    if (std::abs(y_) > params_.arena) {
        y_ = std::clamp(y_, -params_.arena, params_.arena);
        vy_ = 0.0;
    }
    ++t_;

    StepResult r;
    r.step = t_;
    const double dx = x_ - params_.goal_x;
    const double dy = y_ - params_.goal_y;
    if (dx * dx + dy * dy <= params_.goal_radius * params_.goal_radius) {
        r.reward = 1.0;
        r.done = true;
    } else if (t_ >= params_.max_steps) {
        r.done = true;
        r.truncated = true;
    }
    r.observation = observation();
    return r;
}

// ---------------------------------------------------------------------------
// Grid world

SparseGridWorld::SparseGridWorld(GridWorldParams params)
    : params_(std::move(params))
{
    const int n = params_.size;
    if (n < 2) {
        throw std::invalid_argument("sparse_gridworld: size must be at least 2");
    }
    goal_x_ = params_.goal_x < 0 ? n - 1 : params_.goal_x;
    goal_y_ = params_.goal_y < 0 ? n - 1 : params_.goal_y;
    auto inside = [n](int x, int y) { return x >= 0 && y >= 0 && x < n && y < n; };
    if (!inside(goal_x_, goal_y_) || !inside(params_.start_x, params_.start_y)) {
        throw std::invalid_argument("sparse_gridworld: start or goal outside the grid");
    }
    wall_.assign(static_cast<std::size_t>(n * n), 0);
    for (const auto& [wx, wy] : params_.walls) {
        if (!inside(wx, wy)) {
            throw std::invalid_argument("sparse_gridworld: wall outside the grid");
        }
        wall_[static_cast<std::size_t>(wy * n + wx)] = 1;
    }
    if (is_wall(goal_x_, goal_y_) || is_wall(params_.start_x, params_.start_y)) {
        throw std::invalid_argument("sparse_gridworld: start or goal is a wall");
    }
    spec_.name = "sparse_gridworld";
    spec_.observation_dim = 4;
    spec_.action_kind = ActionKind::Discrete;
    spec_.action_dim = 1;
    spec_.n_actions = 4;
    spec_.max_steps = 4 * n;
    spec_.observation_names = {"x", "y", "goal_dx", "goal_dy"};
    spec_.reward_description = "+1 on reaching the goal cell (episode ends), 0 otherwise";
    x_ = params_.start_x;
    y_ = params_.start_y;
}

bool SparseGridWorld::is_wall(int x, int y) const
{
    return wall_[static_cast<std::size_t>(y * params_.size + x)] != 0;
}

void SparseGridWorld::set_position(int x, int y)
{
    if (x < 0 || y < 0 || x >= params_.size || y >= params_.size || is_wall(x, y)) {
        throw std::invalid_argument("sparse_gridworld: invalid position");
    }
    x_ = x;
    y_ = y;
    t_ = 0;
}

std::vector<double> SparseGridWorld::observation() const
{
    const double scale = static_cast<double>(params_.size - 1);
    return {x_ / scale, y_ / scale, (goal_x_ - x_) / scale, (goal_y_ - y_) / scale};
}

std::vector<double> SparseGridWorld::reset(Rng& rng)
{
    t_ = 0;
    if (params_.random_start) {
        std::vector<std::pair<int, int>> free;
        for (int y = 0; y < params_.size; ++y) {
            for (int x = 0; x < params_.size; ++x) {
                if (!is_wall(x, y) && (x != goal_x_ || y != goal_y_)) {
                    free.emplace_back(x, y);
                }
            }
        }
        const auto& cell = free[uniform_index(rng, free.size())];
        x_ = cell.first;
        y_ = cell.second;
    } else {
        x_ = params_.start_x;
        y_ = params_.start_y;
    }
    return observation();
}

std::pair<int, int> SparseGridWorld::move(int x, int y, int action) const
{
    int nx = x;
    int ny = y;
    switch (action) {
    case 0:
        ++ny;
        break;
    case 1:
        --ny;
        break;
    case 2:
        --nx;
        break;
    case 3:
        ++nx;
        break;
    default:
        throw std::invalid_argument("sparse_gridworld: action must be 0..3");
    }
    if (nx < 0 || ny < 0 || nx >= params_.size || ny >= params_.size || is_wall(nx, ny)) {
        return {x, y};
    }
    return {nx, ny};
}

StepResult SparseGridWorld::step(std::span<const double> action)
{
    if (action.size() != 1) {
        throw std::invalid_argument("sparse_gridworld expects a single action index");
    }
    const auto a = static_cast<int>(action[0]);
    std::tie(x_, y_) = move(x_, y_, a);
    ++t_;
    StepResult r;
    r.step = t_;
    if (x_ == goal_x_ && y_ == goal_y_) {
        r.reward = 1.0;
        r.done = true;
    } else if (t_ >= spec_.max_steps) {
        r.done = true;
        r.truncated = true;
    }
    r.observation = observation();
    return r;
}

std::vector<int> SparseGridWorld::distance_to_goal() const
{
    const int n = params_.size;
    std::vector<int> dist(static_cast<std::size_t>(n * n), -1);
    dist[static_cast<std::size_t>(goal_y_ * n + goal_x_)] = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int y = 0; y < n; ++y) {
            for (int x = 0; x < n; ++x) {
                if (is_wall(x, y) || (x == goal_x_ && y == goal_y_)) {
                    continue;
                }
                int best = -1;
                for (int a = 0; a < 4; ++a) {
                    const auto [nx, ny] = move(x, y, a);
                    const int d = dist[static_cast<std::size_t>(ny * n + nx)];
                    if (d >= 0 && (best < 0 || d + 1 < best)) {
                        best = d + 1;
                    }
                }
                auto& cur = dist[static_cast<std::size_t>(y * n + x)];
                if (best >= 0 && (cur < 0 || best < cur)) {
                    cur = best;
                    changed = true;
                }
            }
        }
    }
    return dist;
}

// ---------------------------------------------------------------------------
// Catcher

SparseCatcher::SparseCatcher(CatcherParams params)
    : params_(params)
{
    if (params_.ticks < 2 || params_.fall_steps < 1 || params_.drops < 1 || params_.catch_ticks < 0
        || params_.paddle_start < 0 || params_.paddle_start > params_.ticks) {
        throw std::invalid_argument("sparse_catcher: invalid parameters");
    }
    spec_.name = "sparse_catcher";
    spec_.observation_dim = 4;
    spec_.action_kind = ActionKind::Discrete;
    spec_.action_dim = 1;
    spec_.n_actions = 3;
    spec_.max_steps = params_.drops * params_.fall_steps;
    spec_.observation_names = {"paddle_x", "object_x", "object_y", "object_vy"};
    spec_.reward_description = "+1 when a falling object is caught, -1 when it is missed";
    paddle_ = params_.paddle_start;
}

std::vector<int> SparseCatcher::drop_columns() const
{
    // Odd ticks 1, 3, ..., i.e. the centres of ticks/2 equal bins.
    std::vector<int> cols;
    for (int c = 1; c < params_.ticks; c += 2) {
        cols.push_back(c);
    }
    return cols;
}

std::vector<double> SparseCatcher::reset(Rng& rng)
{
    const auto cols = drop_columns();
    drops_.clear();
    for (int d = 0; d < params_.drops; ++d) {
        drops_.push_back(cols[uniform_index(rng, cols.size())]);
    }
    drop_index_ = 0;
    paddle_ = params_.paddle_start;
    object_x_ = drops_[0];
    fall_ = 0;
    t_ = 0;
    return observation();
}

void SparseCatcher::set_drops(std::vector<int> columns)
{
    if (columns.size() != static_cast<std::size_t>(params_.drops)) {
        throw std::invalid_argument("sparse_catcher: need one column per drop");
    }
    drops_ = std::move(columns);
    drop_index_ = 0;
    paddle_ = params_.paddle_start;
    object_x_ = drops_[0];
    fall_ = 0;
    t_ = 0;
}

std::vector<double> SparseCatcher::observation() const
{
    const double tick = 1.0 / params_.ticks;
    return {paddle_ * tick, object_x_ * tick, 1.0 - static_cast<double>(fall_) / params_.fall_steps,
            -1.0 / params_.fall_steps};
}

StepResult SparseCatcher::step(std::span<const double> action)
{
    if (action.size() != 1) {
        throw std::invalid_argument("sparse_catcher expects a single action index");
    }
    const auto a = static_cast<int>(action[0]);
    if (a < 0 || a > 2) {
        throw std::invalid_argument("sparse_catcher: action must be 0..2");
    }
    paddle_ = std::clamp(paddle_ + (a - 1), 0, params_.ticks);
    ++fall_;
    ++t_;
    StepResult r;
    r.step = t_;
    if (fall_ >= params_.fall_steps) {
        r.reward = std::abs(paddle_ - object_x_) <= params_.catch_ticks ? 1.0 : -1.0;
        ++drop_index_;
        if (drop_index_ >= drops_.size()) {
            r.done = true;
            fall_ = params_.fall_steps;
        } else {
            object_x_ = drops_[drop_index_];
            fall_ = 0;
        }
    }
    r.observation = observation();
    return r;
}

std::vector<std::string> environment_names()
{
    return {"sparse_pointmass", "sparse_gridworld", "sparse_catcher"};
}

} // namespace lisr::env
