#pragma once

// Small fully connected networks stored as one flat parameter vector, with
// the genome operators used by the evolutionary half of the population.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lisr/kernels.hpp"
#include "lisr/rng.hpp"

namespace lisr::nn {

using kernels::Exec;

enum class Activation : std::uint8_t { Identity, Tanh };

struct LayerShape {
    std::size_t in = 0;
    std::size_t out = 0;
    Activation activation = Activation::Identity;
    std::size_t weight_offset = 0; // row-major out x in
    std::size_t bias_offset = 0;

    std::size_t weight_count() const { return in * out; }
};

// Canonical parameter order: for each layer, its weight matrix row-major,
// then its bias vector.
class Mlp {
public:
    Mlp() = default;
    // Zero-initialised network; `sizes` lists input, hidden..., output widths.
    Mlp(std::span<const std::size_t> sizes, Activation hidden, Activation output);

    // Weights and biases uniform in +-1/sqrt(fan_in).
    static Mlp random(std::span<const std::size_t> sizes, Activation hidden, Activation output, Rng& rng);

    std::size_t input_dim() const { return layers_.empty() ? 0 : layers_.front().in; }
    std::size_t output_dim() const { return layers_.empty() ? 0 : layers_.back().out; }
    const std::vector<LayerShape>& layers() const { return layers_; }
    std::size_t param_count() const { return params_.size(); }

    std::span<const double> params() const { return params_; }
    std::span<double> params() { return params_; }
    std::span<const double> weights(std::size_t layer) const;
    std::span<double> weights(std::size_t layer);
    std::span<const double> bias(std::size_t layer) const;
    std::span<double> bias(std::size_t layer);

    bool same_architecture(const Mlp& other) const;
    bool all_finite() const;

    bool operator==(const Mlp& other) const { return same_architecture(other) && params_ == other.params_; }

private:
    std::vector<LayerShape> layers_;
    std::vector<double> params_;
};

std::vector<double> forward(const Mlp& net, std::span<const double> input);

// Post-activation values of every layer for a batch; values[0] is the input.
struct Trace {
    std::size_t batch = 0;
    std::vector<std::vector<double>> values;

    std::span<const double> output() const { return values.back(); }
};

void forward_batch(const Mlp& net, std::span<const double> inputs, std::size_t batch, Trace& trace,
                   Exec exec = Exec::Serial);

// Reverse pass. Accumulates dLoss/dParams into `grad_params` (sized
// param_count) and returns dLoss/dInput for the batch.
std::vector<double> backward(const Mlp& net, const Trace& trace, std::span<const double> grad_output,
                             std::span<double> grad_params, Exec exec = Exec::Serial);

struct Adam {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::int64_t steps = 0;
    std::vector<double> m;
    std::vector<double> v;

    Adam() = default;
    explicit Adam(std::size_t n)
        : m(n, 0.0)
        , v(n, 0.0)
    {
    }
};

// One Adam update. Returns false (and leaves everything untouched) when the
// gradient has a non-finite entry.
bool adam_step(Mlp& net, Adam& opt, std::span<const double> grad, double lr);

// Backprop a loss gradient for `inputs` and apply an Adam step.
bool grad_step(Mlp& net, Adam& opt, std::span<const double> inputs, std::size_t batch,
               std::span<const double> grad_output, double lr, Exec exec = Exec::Serial);

// target <- tau * source + (1 - tau) * target
void soft_update(Mlp& target, const Mlp& source, double tau);

struct MutationParams {
    double mut_prob = 0.9;
    double mut_frac = 0.1;
    double mut_strength = 0.1;
    double supermut_prob = 0.05;
    double reset_prob = 0.05;
};

struct MutationStats {
    std::size_t super_events = 0;
    std::size_t reset_events = 0;
    std::size_t normal_events = 0;
    std::vector<std::size_t> touched; // flat parameter indices, in event order

    std::size_t events() const { return super_events + reset_events + normal_events; }
};

// Per weight matrix, ceil(mut_frac * |M|) perturbation events at uniform
// (i, j): super-mutation, else reset, else scaled Gaussian noise. Biases are
// never touched. mut_prob is applied by the caller.
void mutate_genome(Mlp& net, const MutationParams& params, Rng& rng, MutationStats* stats = nullptr);

// Single-point crossover on the canonical flat vector: child takes the
// elite's parameters before `split` and the other parent's from there on.
Mlp crossover_at(const Mlp& elite, const Mlp& other, std::size_t split);
Mlp crossover_genomes(const Mlp& elite, const Mlp& other, Rng& rng, std::size_t* split = nullptr);

// Text checkpoint: header, layer table, one hex-float per parameter.
void write_genome(std::ostream& os, const Mlp& net);
Mlp read_genome(std::istream& is);
void save_genome(const std::string& path, const Mlp& net);
Mlp load_genome(const std::string& path);

} // namespace lisr::nn
