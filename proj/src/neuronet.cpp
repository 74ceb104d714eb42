#include "lisr/neuronet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lisr::nn {

namespace {

std::string_view activation_name(Activation a)
{
    return a == Activation::Tanh ? "tanh" : "identity";
}

Activation activation_from_name(const std::string& s)
{
    if (s == "tanh") {
        return Activation::Tanh;
    }
    if (s == "identity") {
        return Activation::Identity;
    }
    throw std::runtime_error("genome checkpoint: unknown activation '" + s + "'");
}

void require_same(const Mlp& a, const Mlp& b, const char* what)
{
    if (!a.same_architecture(b)) {
        throw std::invalid_argument(std::string(what) + ": architecture mismatch");
    }
}

} // namespace

Mlp::Mlp(std::span<const std::size_t> sizes, Activation hidden, Activation output)
{
    if (sizes.size() < 2) {
        throw std::invalid_argument("an MLP needs at least input and output sizes");
    }
    std::size_t offset = 0;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        if (sizes[l] == 0 || sizes[l + 1] == 0) {
            throw std::invalid_argument("layer widths must be positive");
        }
        LayerShape shape;
        shape.in = sizes[l];
        shape.out = sizes[l + 1];
        shape.activation = (l + 2 == sizes.size()) ? output : hidden;
        shape.weight_offset = offset;
        offset += shape.weight_count();
        shape.bias_offset = offset;
        offset += shape.out;
        layers_.push_back(shape);
    }
    params_.assign(offset, 0.0);
}

Mlp Mlp::random(std::span<const std::size_t> sizes, Activation hidden, Activation output, Rng& rng)
{
    Mlp net(sizes, hidden, output);
    for (std::size_t l = 0; l < net.layers_.size(); ++l) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(net.layers_[l].in));
        std::uniform_real_distribution<double> dist(-bound, bound);
        for (double& w : net.weights(l)) {
            w = dist(rng);
        }
        for (double& b : net.bias(l)) {
            b = dist(rng);
        }
    }
    return net;
}

std::span<const double> Mlp::weights(std::size_t layer) const
{
    const auto& s = layers_.at(layer);
    return std::span<const double>(params_).subspan(s.weight_offset, s.weight_count());
}

std::span<double> Mlp::weights(std::size_t layer)
{
    const auto& s = layers_.at(layer);
    return std::span<double>(params_).subspan(s.weight_offset, s.weight_count());
}

std::span<const double> Mlp::bias(std::size_t layer) const
{
    const auto& s = layers_.at(layer);
    return std::span<const double>(params_).subspan(s.bias_offset, s.out);
}

std::span<double> Mlp::bias(std::size_t layer)
{
    const auto& s = layers_.at(layer);
    return std::span<double>(params_).subspan(s.bias_offset, s.out);
}

bool Mlp::same_architecture(const Mlp& other) const
{
    if (layers_.size() != other.layers_.size()) {
        return false;
    }
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const auto& a = layers_[l];
        const auto& b = other.layers_[l];
        if (a.in != b.in || a.out != b.out || a.activation != b.activation) {
            return false;
        }
    }
    return true;
}

bool Mlp::all_finite() const
{
    return std::all_of(params_.begin(), params_.end(), [](double p) { return std::isfinite(p); });
}

// ---------------------------------------------------------------------------

void forward_batch(const Mlp& net, std::span<const double> inputs, std::size_t batch, Trace& trace, Exec exec)
{
    const auto& layers = net.layers();
    if (inputs.size() != batch * net.input_dim()) {
        throw std::invalid_argument("forward: input size does not match batch x input_dim");
    }
    trace.batch = batch;
    trace.values.resize(layers.size() + 1);
    trace.values[0].assign(inputs.begin(), inputs.end());
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const auto& s = layers[l];
        auto& out = trace.values[l + 1];
        out.resize(batch * s.out);
        kernels::affine_forward(exec, net.weights(l), net.bias(l), trace.values[l], out, batch, s.in, s.out);
        if (s.activation == Activation::Tanh) {
            kernels::tanh_forward(exec, out);
        }
    }
}

std::vector<double> forward(const Mlp& net, std::span<const double> input)
{
    Trace trace;
    forward_batch(net, input, 1, trace);
    return std::move(trace.values.back());
}

std::vector<double> backward(const Mlp& net, const Trace& trace, std::span<const double> grad_output,
                             std::span<double> grad_params, Exec exec)
{
    const auto& layers = net.layers();
    const std::size_t batch = trace.batch;
    if (grad_params.size() != net.param_count()) {
        throw std::invalid_argument("backward: gradient buffer has the wrong size");
    }
    if (grad_output.size() != batch * net.output_dim()) {
        throw std::invalid_argument("backward: output gradient has the wrong size");
    }
    std::vector<double> delta(grad_output.begin(), grad_output.end());
    std::vector<double> below;
    for (std::size_t l = layers.size(); l-- > 0;) {
        const auto& s = layers[l];
        if (s.activation == Activation::Tanh) {
            kernels::tanh_backward(exec, trace.values[l + 1], delta);
        }
        kernels::affine_backward_params(exec, trace.values[l], delta,
                                        grad_params.subspan(s.weight_offset, s.weight_count()),
                                        grad_params.subspan(s.bias_offset, s.out), batch, s.in, s.out);
        below.assign(batch * s.in, 0.0);
        kernels::affine_backward_input(exec, net.weights(l), delta, below, batch, s.in, s.out);
        delta.swap(below);
    }
    return delta;
}

bool adam_step(Mlp& net, Adam& opt, std::span<const double> grad, double lr)
{
    const std::size_t n = net.param_count();
    if (grad.size() != n) {
        throw std::invalid_argument("adam_step: gradient has the wrong size");
    }
    if (opt.m.size() != n) {
        opt.m.assign(n, 0.0);
        opt.v.assign(n, 0.0);
        opt.steps = 0;
    }
    if (!std::all_of(grad.begin(), grad.end(), [](double g) { return std::isfinite(g); })) {
        return false;
    }
    opt.steps += 1;
    const double t = static_cast<double>(opt.steps);
    const double c1 = 1.0 - std::pow(opt.beta1, t);
    const double c2 = 1.0 - std::pow(opt.beta2, t);
    auto p = net.params();
    for (std::size_t i = 0; i < n; ++i) {
        opt.m[i] = opt.beta1 * opt.m[i] + (1.0 - opt.beta1) * grad[i];
        opt.v[i] = opt.beta2 * opt.v[i] + (1.0 - opt.beta2) * grad[i] * grad[i];
        const double mhat = opt.m[i] / c1;
        const double vhat = opt.v[i] / c2;
        p[i] -= lr * mhat / (std::sqrt(vhat) + opt.eps);
    }
    return true;
}

bool grad_step(Mlp& net, Adam& opt, std::span<const double> inputs, std::size_t batch,
               std::span<const double> grad_output, double lr, Exec exec)
{
    Trace trace;
    forward_batch(net, inputs, batch, trace, exec);
    std::vector<double> grad(net.param_count(), 0.0);
    backward(net, trace, grad_output, grad, exec);
    return adam_step(net, opt, grad, lr);
}

void soft_update(Mlp& target, const Mlp& source, double tau)
{
    require_same(target, source, "soft_update");
    if (!(tau > 0.0 && tau <= 1.0)) {
        throw std::invalid_argument("soft_update: tau must lie in (0, 1]");
    }
    auto t = target.params();
    auto s = source.params();
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = tau * s[i] + (1.0 - tau) * t[i];
    }
}

// ---------------------------------------------------------------------------
// Genome operators

void mutate_genome(Mlp& net, const MutationParams& params, Rng& rng, MutationStats* stats)
{
    auto p = net.params();
    for (const auto& layer : net.layers()) {
        const std::size_t size = layer.weight_count();
        const auto events = static_cast<std::size_t>(std::ceil(params.mut_frac * static_cast<double>(size)));
        for (std::size_t e = 0; e < events; ++e) {
            const std::size_t i = uniform_index(rng, layer.out);
            const std::size_t j = uniform_index(rng, layer.in);
            const std::size_t idx = layer.weight_offset + i * layer.in + j;
            const double old = p[idx];
            double updated = 0.0;
            if (uniform01(rng) < params.supermut_prob) {
                do {
                    updated = old * normal(rng, 100.0 * params.mut_strength);
                } while (!std::isfinite(updated));
                if (stats) {
                    ++stats->super_events;
                }
            } else if (uniform01(rng) < params.reset_prob) {
                updated = normal(rng, 1.0);
                if (stats) {
                    ++stats->reset_events;
                }
            } else {
                do {
                    updated = old * normal(rng, params.mut_strength);
                } while (!std::isfinite(updated));
                if (stats) {
                    ++stats->normal_events;
                }
            }
            p[idx] = updated;
            if (stats) {
                stats->touched.push_back(idx);
            }
        }
    }
}

Mlp crossover_at(const Mlp& elite, const Mlp& other, std::size_t split)
{
    require_same(elite, other, "crossover");
    if (split > elite.param_count()) {
        throw std::out_of_range("crossover split point beyond parameter count");
    }
    Mlp child = other;
    auto src = elite.params();
    std::copy(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(split), child.params().begin());
    return child;
}

Mlp crossover_genomes(const Mlp& elite, const Mlp& other, Rng& rng, std::size_t* split)
{
    require_same(elite, other, "crossover");
    const std::size_t point = std::uniform_int_distribution<std::size_t>(0, elite.param_count())(rng);
    if (split) {
        *split = point;
    }
    return crossover_at(elite, other, point);
}

// ---------------------------------------------------------------------------
// Checkpoint
//
//   lisr-mlp 1
//   layers <L>
//   <in> <out> <tanh|identity>     (L lines)
//   params <N>
//   <hex float>                    (N lines, canonical order)

void write_genome(std::ostream& os, const Mlp& net)
{
    os << "lisr-mlp 1\n";
    os << "layers " << net.layers().size() << '\n';
    for (const auto& s : net.layers()) {
        os << s.in << ' ' << s.out << ' ' << activation_name(s.activation) << '\n';
    }
    os << "params " << net.param_count() << '\n';
    char buf[64];
    for (double p : net.params()) {
        std::snprintf(buf, sizeof(buf), "%a", p);
        os << buf << '\n';
    }
}

Mlp read_genome(std::istream& is)
{
    std::string magic;
    int version = 0;
    if (!(is >> magic >> version) || magic != "lisr-mlp" || version != 1) {
        throw std::runtime_error("genome checkpoint: bad header");
    }
    std::string key;
    std::size_t n_layers = 0;
    if (!(is >> key >> n_layers) || key != "layers" || n_layers == 0) {
        throw std::runtime_error("genome checkpoint: bad layer count");
    }
    std::vector<std::size_t> sizes;
    std::vector<Activation> acts;
    for (std::size_t l = 0; l < n_layers; ++l) {
        std::size_t in = 0;
        std::size_t out = 0;
        std::string act;
        if (!(is >> in >> out >> act)) {
            throw std::runtime_error("genome checkpoint: truncated layer table");
        }
        if (l == 0) {
            sizes.push_back(in);
        } else if (sizes.back() != in) {
            throw std::runtime_error("genome checkpoint: layer widths do not chain");
        }
        sizes.push_back(out);
        acts.push_back(activation_from_name(act));
    }
    const Activation hidden = n_layers > 1 ? acts.front() : acts.back();
    for (std::size_t l = 0; l + 1 < n_layers; ++l) {
        if (acts[l] != hidden) {
            throw std::runtime_error("genome checkpoint: mixed hidden activations are not supported");
        }
    }
    Mlp net(sizes, hidden, acts.back());
    std::size_t n_params = 0;
    if (!(is >> key >> n_params) || key != "params" || n_params != net.param_count()) {
        throw std::runtime_error("genome checkpoint: parameter count does not match layer table");
    }
    auto p = net.params();
    std::string tok;
    for (std::size_t i = 0; i < n_params; ++i) {
        if (!(is >> tok)) {
            throw std::runtime_error("genome checkpoint: truncated parameter list");
        }
        char* end = nullptr;
        p[i] = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0') {
            throw std::runtime_error("genome checkpoint: bad number '" + tok + "'");
        }
    }
    return net;
}

void save_genome(const std::string& path, const Mlp& net)
{
    std::ofstream os(path);
    if (!os) {
        throw std::runtime_error("cannot write " + path);
    }
    write_genome(os, net);
}

Mlp load_genome(const std::string& path)
{
    std::ifstream is(path);
    if (!is) {
        throw std::runtime_error("cannot read " + path);
    }
    return read_genome(is);
}

} // namespace lisr::nn
