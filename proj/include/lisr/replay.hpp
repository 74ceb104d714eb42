#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "lisr/rng.hpp"

namespace lisr {

// One environment step. Discrete actions are stored as a single entry holding
// the action index.
struct Transition {
    std::vector<double> state;
    std::vector<double> action;
    double env_reward = 0.0;
    std::vector<double> next_state;
    bool done = false;

    bool operator==(const Transition&) const = default;
};

class InsufficientExperience : public std::runtime_error {
public:
    InsufficientExperience(std::size_t have, std::size_t want);
};

// Fixed-capacity ring shared by every actor and learner. Appends take an
// exclusive lock; sampling takes a shared lock, so a sampled transition is
// never observed half-written.
class ReplayBuffer {
public:
    ReplayBuffer(std::size_t capacity, std::size_t state_dim, std::size_t action_dim);

    ReplayBuffer(const ReplayBuffer&) = delete;
    ReplayBuffer& operator=(const ReplayBuffer&) = delete;

    void append(Transition t);
    void append_all(std::vector<Transition>&& ts);

    // n draws uniformly with replacement from the live contents.
    std::vector<Transition> sample(std::size_t n, Rng& rng) const;

    std::size_t size() const;
    std::size_t capacity() const { return capacity_; }
    std::uint64_t total_appends() const;
    std::size_t write_cursor() const;
    std::size_t state_dim() const { return state_dim_; }
    std::size_t action_dim() const { return action_dim_; }

    // Live contents from oldest to newest.
    std::vector<Transition> snapshot() const;
    // Direct slot access (ring order, not age order).
    Transition at(std::size_t slot) const;

    void clear();

    // Versioned text dump, restored bit-exactly.
    void dump(std::ostream& os) const;
    void restore(std::istream& is);
    void save(const std::string& path) const;
    void load(const std::string& path);

private:
    void check(const Transition& t) const;
    void append_locked(Transition&& t);

    std::size_t capacity_;
    std::size_t state_dim_;
    std::size_t action_dim_;
    std::vector<Transition> storage_;
    std::size_t size_ = 0;
    std::size_t cursor_ = 0;
    std::uint64_t total_ = 0;
    mutable std::shared_mutex mutex_;
};

} // namespace lisr
