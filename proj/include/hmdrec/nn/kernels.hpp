#pragma once

// Single-example reference kernels. These are written as plain nested loops
// with a fixed accumulation order; the batched engine in batched.hpp is
// checked against them.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace hmdrec::nn {

/// Feature map with `channels` rows of `length` samples, row-major by channel.
struct Array2 {
    std::size_t channels = 0;
    std::size_t length = 0;
    std::vector<double> values;

    Array2() = default;
    Array2(std::size_t c, std::size_t l, double fill = 0.0) : channels(c), length(l), values(c * l, fill) {}
    Array2(std::size_t c, std::size_t l, std::vector<double> v);

    double& operator()(std::size_t c, std::size_t i) { return values[c * length + i]; }
    double operator()(std::size_t c, std::size_t i) const { return values[c * length + i]; }
};

/// weights are [out_channels][in_channels][kernel_size], row-major.
struct Conv1DLayer {
    std::size_t out_channels = 0;
    std::size_t in_channels = 0;
    std::size_t kernel_size = 1;
    std::size_t stride = 1;
    std::size_t padding = 0;
    std::vector<double> weights;
    std::vector<double> bias;

    Conv1DLayer() = default;
    Conv1DLayer(std::size_t out_ch, std::size_t in_ch, std::size_t kernel, std::size_t stride_, std::size_t pad);

    std::size_t output_length(std::size_t input_length) const;
    double weight(std::size_t o, std::size_t c, std::size_t k) const {
        return weights[(o * in_channels + c) * kernel_size + k];
    }
    void validate() const;
};

/// weights are [out_dim][in_dim], row-major.
struct DenseLayer {
    std::size_t out_dim = 0;
    std::size_t in_dim = 0;
    std::vector<double> weights;
    std::vector<double> bias;

    DenseLayer() = default;
    DenseLayer(std::size_t out, std::size_t in);

    void validate() const;
};

enum class Mode { Train, Eval };

// Forward kernels

Array2 conv1d_forward(const Array2& input, const Conv1DLayer& layer);

struct PoolResult {
    Array2 output;
    std::vector<std::size_t> argmax;  // input position per output cell, same layout as output.values
};

/// Non-overlapping max pooling (stride == kernel); ties go to the lowest index.
PoolResult maxpool1d_forward(const Array2& input, std::size_t kernel);

std::vector<double> dense_forward(std::span<const double> input, const DenseLayer& layer, bool apply_relu);

void relu_inplace(std::span<double> values);

struct LossResult {
    double loss = 0.0;
    std::vector<double> grad_logits;
};

LossResult softmax_cross_entropy(std::span<const double> logits, std::size_t label);

struct DropoutResult {
    std::vector<double> output;
    std::vector<double> mask;  // 0 or 1/(1-rate); all ones in eval mode
};

/// Inverted dropout: kept units are scaled by 1/(1-rate), eval is identity.
DropoutResult dropout_apply(std::span<const double> input, double rate, Mode mode, std::mt19937_64& rng);

// Backward kernels

struct ConvGrad {
    Array2 grad_input;
    std::vector<double> grad_weights;
    std::vector<double> grad_bias;
};

ConvGrad conv1d_backward(const Array2& input, const Conv1DLayer& layer, const Array2& grad_output);

Array2 maxpool1d_backward(const Array2& grad_output, std::span<const std::size_t> argmax, std::size_t input_length);

struct DenseGrad {
    std::vector<double> grad_input;
    std::vector<double> grad_weights;
    std::vector<double> grad_bias;
};

/// `output` is the layer's forward output; when `applied_relu` the gradient is
/// masked where output == 0.
DenseGrad dense_backward(std::span<const double> input, const DenseLayer& layer, std::span<const double> output,
                         bool applied_relu, std::span<const double> grad_output);

}  // namespace hmdrec::nn
