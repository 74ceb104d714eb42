#pragma once

// Dense batch kernels behind the MLP. Each kernel has a serial reference and
// an OpenMP version; both accumulate every output in the same order, so the
// two are bit-identical and either can back a deterministic run.

#include <cstddef>
#include <span>

namespace lisr::kernels {

enum class Exec { Serial, Parallel };

// Y[b,o] = sum_i W[o,i] * X[b,i] + bias[o]   (W row-major out x in)
void affine_forward(Exec exec, std::span<const double> weights, std::span<const double> bias,
                    std::span<const double> x, std::span<double> y, std::size_t batch, std::size_t in,
                    std::size_t out);

// dW[o,i] += sum_b dY[b,o] * X[b,i];  dBias[o] += sum_b dY[b,o]
void affine_backward_params(Exec exec, std::span<const double> x, std::span<const double> dy,
                            std::span<double> dweights, std::span<double> dbias, std::size_t batch,
                            std::size_t in, std::size_t out);

// dX[b,i] = sum_o dY[b,o] * W[o,i]
void affine_backward_input(Exec exec, std::span<const double> weights, std::span<const double> dy,
                           std::span<double> dx, std::size_t batch, std::size_t in, std::size_t out);

void tanh_forward(Exec exec, std::span<double> values);
// dPre = dPost * (1 - post^2)
void tanh_backward(Exec exec, std::span<const double> post, std::span<double> grad);

// Number of threads the parallel kernels would use.
int parallel_threads();

} // namespace lisr::kernels
