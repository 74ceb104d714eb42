#include "lisr/kernels.hpp"

#include <cmath>

#ifdef LISR_HAVE_OPENMP
#include <omp.h>
#endif

namespace lisr::kernels {

namespace {

// Below this many multiply-adds the fork/join costs more than it saves.
constexpr std::size_t kParallelThreshold = 1U << 14U;

void forward_row(const double* w, const double* bias, const double* xb, double* yb, std::size_t in,
                 std::size_t out)
{
    for (std::size_t o = 0; o < out; ++o) {
        const double* wo = w + o * in;
        double acc = bias[o];
        for (std::size_t i = 0; i < in; ++i) {
            acc += wo[i] * xb[i];
        }
        yb[o] = acc;
    }
}

void param_grad_row(const double* x, const double* dy, double* dw, double* db, std::size_t o, std::size_t batch,
                    std::size_t in, std::size_t out)
{
    double* dwo = dw + o * in;
    double bsum = 0.0;
    for (std::size_t b = 0; b < batch; ++b) {
        const double g = dy[b * out + o];
        if (g == 0.0) {
            continue;
        }
        bsum += g;
        const double* xb = x + b * in;
        for (std::size_t i = 0; i < in; ++i) {
            dwo[i] += g * xb[i];
        }
    }
    db[o] += bsum;
}

void input_grad_row(const double* w, const double* dyb, double* dxb, std::size_t in, std::size_t out)
{
    for (std::size_t i = 0; i < in; ++i) {
        dxb[i] = 0.0;
    }
    for (std::size_t o = 0; o < out; ++o) {
        const double g = dyb[o];
        if (g == 0.0) {
            continue;
        }
        const double* wo = w + o * in;
        for (std::size_t i = 0; i < in; ++i) {
            dxb[i] += g * wo[i];
        }
    }
}

bool go_parallel(Exec exec, std::size_t work)
{
#ifdef LISR_HAVE_OPENMP
    return exec == Exec::Parallel && work >= kParallelThreshold && omp_get_max_threads() > 1;
#else
    (void)exec;
    (void)work;
    return false;
#endif
}

} // namespace

void affine_forward(Exec exec, std::span<const double> weights, std::span<const double> bias,
                    std::span<const double> x, std::span<double> y, std::size_t batch, std::size_t in,
                    std::size_t out)
{
    const double* w = weights.data();
    const double* bp = bias.data();
    const double* xp = x.data();
    double* yp = y.data();
    if (go_parallel(exec, batch * in * out)) {
        const auto n = static_cast<long>(batch);
#pragma omp parallel for schedule(static)
        for (long b = 0; b < n; ++b) {
            const auto bu = static_cast<std::size_t>(b);
            forward_row(w, bp, xp + bu * in, yp + bu * out, in, out);
        }
        return;
    }
    for (std::size_t b = 0; b < batch; ++b) {
        forward_row(w, bp, xp + b * in, yp + b * out, in, out);
    }
}

void affine_backward_params(Exec exec, std::span<const double> x, std::span<const double> dy,
                            std::span<double> dweights, std::span<double> dbias, std::size_t batch,
                            std::size_t in, std::size_t out)
{
    if (go_parallel(exec, batch * in * out)) {
        const auto n = static_cast<long>(out);
#pragma omp parallel for schedule(static)
        for (long o = 0; o < n; ++o) {
            param_grad_row(x.data(), dy.data(), dweights.data(), dbias.data(), static_cast<std::size_t>(o), batch,
                           in, out);
        }
        return;
    }
    for (std::size_t o = 0; o < out; ++o) {
        param_grad_row(x.data(), dy.data(), dweights.data(), dbias.data(), o, batch, in, out);
    }
}

void affine_backward_input(Exec exec, std::span<const double> weights, std::span<const double> dy,
                           std::span<double> dx, std::size_t batch, std::size_t in, std::size_t out)
{
    if (go_parallel(exec, batch * in * out)) {
        const auto n = static_cast<long>(batch);
#pragma omp parallel for schedule(static)
        for (long b = 0; b < n; ++b) {
            const auto bu = static_cast<std::size_t>(b);
            input_grad_row(weights.data(), dy.data() + bu * out, dx.data() + bu * in, in, out);
        }
        return;
    }
    for (std::size_t b = 0; b < batch; ++b) {
        input_grad_row(weights.data(), dy.data() + b * out, dx.data() + b * in, in, out);
    }
}

void tanh_forward(Exec exec, std::span<double> values)
{
    double* v = values.data();
    const auto n = static_cast<long>(values.size());
    if (go_parallel(exec, values.size() * 16)) {
#pragma omp parallel for schedule(static)
        for (long i = 0; i < n; ++i) {
            v[i] = std::tanh(v[i]);
        }
        return;
    }
    for (long i = 0; i < n; ++i) {
        v[i] = std::tanh(v[i]);
    }
}

void tanh_backward(Exec exec, std::span<const double> post, std::span<double> grad)
{
    const double* p = post.data();
    double* g = grad.data();
    const auto n = static_cast<long>(grad.size());
    if (go_parallel(exec, grad.size() * 16)) {
#pragma omp parallel for schedule(static)
        for (long i = 0; i < n; ++i) {
            g[i] *= 1.0 - p[i] * p[i];
        }
        return;
    }
    for (long i = 0; i < n; ++i) {
        g[i] *= 1.0 - p[i] * p[i];
    }
}

int parallel_threads()
{
#ifdef LISR_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace lisr::kernels
