#include "lisr/replay.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <stdexcept>

namespace lisr {

InsufficientExperience::InsufficientExperience(std::size_t have, std::size_t want)
    : std::runtime_error("insufficient experience: buffer holds " + std::to_string(have) + " transitions, "
                         + std::to_string(want) + " requested")
{
}

ReplayBuffer::ReplayBuffer(std::size_t capacity, std::size_t state_dim, std::size_t action_dim)
    : capacity_(capacity)
    , state_dim_(state_dim)
    , action_dim_(action_dim)
{
    if (capacity == 0) {
        throw std::invalid_argument("replay capacity must be positive");
    }
    // Grow lazily; a 1e6 ring of small vectors should not be paid for up front.
    storage_.reserve(std::min<std::size_t>(capacity, 1U << 16U));
}

void ReplayBuffer::check(const Transition& t) const
{
    if (t.state.size() != state_dim_ || t.next_state.size() != state_dim_) {
        throw std::invalid_argument("transition state dimension does not match the buffer");
    }
    if (t.action.size() != action_dim_) {
        throw std::invalid_argument("transition action dimension does not match the buffer");
    }
    if (!std::isfinite(t.env_reward)) {
        throw std::invalid_argument("transition reward must be finite");
    }
}

void ReplayBuffer::append_locked(Transition&& t)
{
    if (storage_.size() < capacity_) {
        storage_.push_back(std::move(t));
    } else {
        storage_[cursor_] = std::move(t);
    }
    cursor_ = (cursor_ + 1) % capacity_;
    size_ = std::min(size_ + 1, capacity_);
    ++total_;
}

void ReplayBuffer::append(Transition t)
{
    check(t);
    std::unique_lock lock(mutex_);
    append_locked(std::move(t));
}

void ReplayBuffer::append_all(std::vector<Transition>&& ts)
{
    for (const auto& t : ts) {
        check(t);
    }
    std::unique_lock lock(mutex_);
    for (auto& t : ts) {
        append_locked(std::move(t));
    }
}

std::vector<Transition> ReplayBuffer::sample(std::size_t n, Rng& rng) const
{
    std::shared_lock lock(mutex_);
    if (n == 0 || size_ < n) {
        throw InsufficientExperience(size_, n);
    }
    std::vector<Transition> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.push_back(storage_[uniform_index(rng, size_)]);
    }
    return out;
}

std::size_t ReplayBuffer::size() const
{
    std::shared_lock lock(mutex_);
    return size_;
}

std::uint64_t ReplayBuffer::total_appends() const
{
    std::shared_lock lock(mutex_);
    return total_;
}

std::size_t ReplayBuffer::write_cursor() const
{
    std::shared_lock lock(mutex_);
    return cursor_;
}

std::vector<Transition> ReplayBuffer::snapshot() const
{
    std::shared_lock lock(mutex_);
    std::vector<Transition> out;
    out.reserve(size_);
    const std::size_t start = size_ < capacity_ ? 0 : cursor_;
    for (std::size_t k = 0; k < size_; ++k) {
        out.push_back(storage_[(start + k) % capacity_]);
    }
    return out;
}

Transition ReplayBuffer::at(std::size_t slot) const
{
    std::shared_lock lock(mutex_);
    if (slot >= size_) {
        throw std::out_of_range("replay slot out of range");
    }
    return storage_[slot];
}

void ReplayBuffer::clear()
{
    std::unique_lock lock(mutex_);
    storage_.clear();
    size_ = 0;
    cursor_ = 0;
    total_ = 0;
}

// Dump layout:
//   lisr-replay 1
//   <capacity> <state_dim> <action_dim> <size> <total_appends>
//   one line per live transition, oldest first:
//     state... action... reward next_state... done   (hex floats, done as 0/1)

namespace {

void put(std::ostream& os, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%a", v);
    os << buf;
}

double get(std::istream& is)
{
    std::string tok;
    if (!(is >> tok)) {
        throw std::runtime_error("replay dump: truncated");
    }
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') {
        throw std::runtime_error("replay dump: bad number '" + tok + "'");
    }
    return v;
}

} // namespace

void ReplayBuffer::dump(std::ostream& os) const
{
    const auto live = snapshot();
    std::uint64_t total = 0;
    {
        std::shared_lock lock(mutex_);
        total = total_;
    }
    os << "lisr-replay 1\n";
    os << capacity_ << ' ' << state_dim_ << ' ' << action_dim_ << ' ' << live.size() << ' ' << total << '\n';
    for (const auto& t : live) {
        for (double v : t.state) {
            put(os, v);
            os << ' ';
        }
        for (double v : t.action) {
            put(os, v);
            os << ' ';
        }
        put(os, t.env_reward);
        for (double v : t.next_state) {
            os << ' ';
            put(os, v);
        }
        os << ' ' << (t.done ? 1 : 0) << '\n';
    }
}

void ReplayBuffer::restore(std::istream& is)
{
    std::string magic;
    int version = 0;
    if (!(is >> magic >> version) || magic != "lisr-replay" || version != 1) {
        throw std::runtime_error("replay dump: bad header");
    }
    std::size_t capacity = 0;
    std::size_t sdim = 0;
    std::size_t adim = 0;
    std::size_t count = 0;
    std::uint64_t total = 0;
    if (!(is >> capacity >> sdim >> adim >> count >> total)) {
        throw std::runtime_error("replay dump: bad dimensions line");
    }
    if (capacity != capacity_ || sdim != state_dim_ || adim != action_dim_ || count > capacity) {
        throw std::runtime_error("replay dump: shape does not match this buffer");
    }
    std::vector<Transition> items(count);
    for (auto& t : items) {
        t.state.resize(sdim);
        t.action.resize(adim);
        t.next_state.resize(sdim);
        for (auto& v : t.state) {
            v = get(is);
        }
        for (auto& v : t.action) {
            v = get(is);
        }
        t.env_reward = get(is);
        for (auto& v : t.next_state) {
            v = get(is);
        }
        int done = 0;
        if (!(is >> done)) {
            throw std::runtime_error("replay dump: truncated");
        }
        t.done = done != 0;
    }
    if (total < count || (count < capacity && total != count)) {
        throw std::runtime_error("replay dump: append counter inconsistent with contents");
    }
    // Put every item back in the slot it occupied, so the write cursor keeps
    // pointing at the oldest entry once the ring is full.
    const std::size_t start = count < capacity ? 0 : static_cast<std::size_t>(total % capacity);
    std::vector<Transition> ring(count);
    for (std::size_t k = 0; k < count; ++k) {
        ring[(start + k) % capacity] = std::move(items[k]);
    }
    std::unique_lock lock(mutex_);
    storage_ = std::move(ring);
    size_ = count;
    cursor_ = static_cast<std::size_t>(total % capacity);
    total_ = total;
}

void ReplayBuffer::save(const std::string& path) const
{
    std::ofstream os(path);
    if (!os) {
        throw std::runtime_error("cannot write " + path);
    }
    dump(os);
}

void ReplayBuffer::load(const std::string& path)
{
    std::ifstream is(path);
    if (!is) {
        throw std::runtime_error("cannot read " + path);
    }
    restore(is);
}

} // namespace lisr
