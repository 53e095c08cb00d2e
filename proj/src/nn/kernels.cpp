#include "hmdrec/nn/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hmdrec/error.hpp"

namespace hmdrec::nn {

Array2::Array2(std::size_t c, std::size_t l, std::vector<double> v) : channels(c), length(l), values(std::move(v)) {
    if (values.size() != c * l) {
        throw ConfigError("Array2: " + std::to_string(values.size()) + " values for shape " + std::to_string(c) + "x" +
                          std::to_string(l));
    }
}

Conv1DLayer::Conv1DLayer(std::size_t out_ch, std::size_t in_ch, std::size_t kernel, std::size_t stride_,
                         std::size_t pad)
    : out_channels(out_ch),
      in_channels(in_ch),
      kernel_size(kernel),
      stride(stride_),
      padding(pad),
      weights(out_ch * in_ch * kernel, 0.0),
      bias(out_ch, 0.0) {
    validate();
}

void Conv1DLayer::validate() const {
    if (kernel_size < 1) throw ConfigError("conv1d: kernel_size must be >= 1");
    if (stride < 1) throw ConfigError("conv1d: stride must be >= 1");
    if (weights.size() != out_channels * in_channels * kernel_size || bias.size() != out_channels) {
        throw ConfigError("conv1d: parameter arrays do not match declared shape");
    }
}

std::size_t Conv1DLayer::output_length(std::size_t input_length) const {
    const std::size_t padded = input_length + 2 * padding;
    if (padded < kernel_size) {
        throw ConfigError("conv1d: input length " + std::to_string(input_length) + " with padding " +
                          std::to_string(padding) + " is shorter than kernel " + std::to_string(kernel_size));
    }
    return (padded - kernel_size) / stride + 1;
}

DenseLayer::DenseLayer(std::size_t out, std::size_t in)
    : out_dim(out), in_dim(in), weights(out * in, 0.0), bias(out, 0.0) {}

void DenseLayer::validate() const {
    if (weights.size() != out_dim * in_dim || bias.size() != out_dim) {
        throw ConfigError("dense: parameter arrays do not match declared shape");
    }
}

Array2 conv1d_forward(const Array2& input, const Conv1DLayer& layer) {
    layer.validate();
    if (input.channels != layer.in_channels) {
        throw ConfigError("conv1d: input has " + std::to_string(input.channels) + " channels, layer expects " +
                          std::to_string(layer.in_channels));
    }
    const std::size_t out_len = layer.output_length(input.length);
    const auto pad = static_cast<std::ptrdiff_t>(layer.padding);
    const auto len = static_cast<std::ptrdiff_t>(input.length);
    Array2 out(layer.out_channels, out_len);
    for (std::size_t o = 0; o < layer.out_channels; ++o) {
        for (std::size_t j = 0; j < out_len; ++j) {
            double acc = layer.bias[o];
            for (std::size_t c = 0; c < layer.in_channels; ++c) {
                for (std::size_t k = 0; k < layer.kernel_size; ++k) {
                    const auto pos = static_cast<std::ptrdiff_t>(j * layer.stride + k) - pad;
                    const double x = (pos < 0 || pos >= len) ? 0.0 : input(c, static_cast<std::size_t>(pos));
                    acc += layer.weight(o, c, k) * x;
                }
            }
            out(o, j) = acc;
        }
    }
    return out;
}

PoolResult maxpool1d_forward(const Array2& input, std::size_t kernel) {
    if (kernel < 1) throw ConfigError("maxpool: kernel must be >= 1");
    if (input.length < kernel) {
        throw ConfigError("maxpool: input length " + std::to_string(input.length) + " < kernel " +
                          std::to_string(kernel));
    }
    const std::size_t out_len = (input.length - kernel) / kernel + 1;
    PoolResult r{Array2(input.channels, out_len), std::vector<std::size_t>(input.channels * out_len)};
    for (std::size_t c = 0; c < input.channels; ++c) {
        for (std::size_t j = 0; j < out_len; ++j) {
            std::size_t best = j * kernel;
            for (std::size_t i = best + 1; i < j * kernel + kernel; ++i) {
                if (input(c, i) > input(c, best)) best = i;
            }
            r.output(c, j) = input(c, best);
            r.argmax[c * out_len + j] = best;
        }
    }
    return r;
}

std::vector<double> dense_forward(std::span<const double> input, const DenseLayer& layer, bool apply_relu) {
    layer.validate();
    if (input.size() != layer.in_dim) {
        throw ConfigError("dense: input length " + std::to_string(input.size()) + " != in_dim " +
                          std::to_string(layer.in_dim));
    }
    std::vector<double> out(layer.out_dim);
    for (std::size_t o = 0; o < layer.out_dim; ++o) {
        double acc = layer.bias[o];
        const double* row = layer.weights.data() + o * layer.in_dim;
        for (std::size_t i = 0; i < layer.in_dim; ++i) acc += row[i] * input[i];
        out[o] = acc;
    }
    if (apply_relu) relu_inplace(out);
    return out;
}

void relu_inplace(std::span<double> values) {
    for (double& v : values) v = v > 0.0 ? v : 0.0;
}

LossResult softmax_cross_entropy(std::span<const double> logits, std::size_t label) {
    if (logits.empty()) throw ConfigError("softmax_cross_entropy: empty logits");
    if (label >= logits.size()) throw ConfigError("softmax_cross_entropy: label index out of range");
    double max_logit = -std::numeric_limits<double>::infinity();
    for (double z : logits) {
        if (!std::isfinite(z)) throw NumericError("softmax_cross_entropy: non-finite logit");
        max_logit = std::max(max_logit, z);
    }
    double sum = 0.0;
    for (double z : logits) sum += std::exp(z - max_logit);
    const double log_sum = std::log(sum);

    LossResult r;
    r.loss = -(logits[label] - max_logit - log_sum);
    r.grad_logits.resize(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) {
        r.grad_logits[i] = std::exp(logits[i] - max_logit - log_sum) - (i == label ? 1.0 : 0.0);
    }
    return r;
}

DropoutResult dropout_apply(std::span<const double> input, double rate, Mode mode, std::mt19937_64& rng) {
    if (!(rate >= 0.0 && rate < 1.0)) throw ConfigError("dropout: rate must be in [0, 1)");
    DropoutResult r{std::vector<double>(input.begin(), input.end()), std::vector<double>(input.size(), 1.0)};
    if (mode == Mode::Eval || rate == 0.0) return r;
    const double scale = 1.0 / (1.0 - rate);
    std::bernoulli_distribution keep(1.0 - rate);
    for (std::size_t i = 0; i < input.size(); ++i) {
        r.mask[i] = keep(rng) ? scale : 0.0;
        r.output[i] = input[i] * r.mask[i];
    }
    return r;
}

ConvGrad conv1d_backward(const Array2& input, const Conv1DLayer& layer, const Array2& grad_output) {
    const std::size_t out_len = layer.output_length(input.length);
    if (input.channels != layer.in_channels || grad_output.channels != layer.out_channels ||
        grad_output.length != out_len) {
        throw ConfigError("conv1d_backward: shape mismatch");
    }
    const auto pad = static_cast<std::ptrdiff_t>(layer.padding);
    const auto len = static_cast<std::ptrdiff_t>(input.length);
    ConvGrad g{Array2(input.channels, input.length), std::vector<double>(layer.weights.size(), 0.0),
               std::vector<double>(layer.out_channels, 0.0)};
    for (std::size_t o = 0; o < layer.out_channels; ++o) {
        for (std::size_t j = 0; j < out_len; ++j) {
            const double go = grad_output(o, j);
            g.grad_bias[o] += go;
            for (std::size_t c = 0; c < layer.in_channels; ++c) {
                for (std::size_t k = 0; k < layer.kernel_size; ++k) {
                    const auto pos = static_cast<std::ptrdiff_t>(j * layer.stride + k) - pad;
                    if (pos < 0 || pos >= len) continue;
                    const auto p = static_cast<std::size_t>(pos);
                    g.grad_weights[(o * layer.in_channels + c) * layer.kernel_size + k] += go * input(c, p);
                    g.grad_input(c, p) += go * layer.weight(o, c, k);
                }
            }
        }
    }
    return g;
}

Array2 maxpool1d_backward(const Array2& grad_output, std::span<const std::size_t> argmax, std::size_t input_length) {
    if (argmax.size() != grad_output.values.size()) throw ConfigError("maxpool_backward: argmax size mismatch");
    Array2 g(grad_output.channels, input_length);
    for (std::size_t c = 0; c < grad_output.channels; ++c) {
        for (std::size_t j = 0; j < grad_output.length; ++j) {
            const std::size_t idx = c * grad_output.length + j;
            g(c, argmax[idx]) += grad_output.values[idx];
        }
    }
    return g;
}

DenseGrad dense_backward(std::span<const double> input, const DenseLayer& layer, std::span<const double> output,
                         bool applied_relu, std::span<const double> grad_output) {
    if (input.size() != layer.in_dim || output.size() != layer.out_dim || grad_output.size() != layer.out_dim) {
        throw ConfigError("dense_backward: shape mismatch");
    }
    DenseGrad g{std::vector<double>(layer.in_dim, 0.0), std::vector<double>(layer.weights.size(), 0.0),
                std::vector<double>(layer.out_dim, 0.0)};
    for (std::size_t o = 0; o < layer.out_dim; ++o) {
        const double go = (applied_relu && output[o] <= 0.0) ? 0.0 : grad_output[o];
        g.grad_bias[o] = go;
        for (std::size_t i = 0; i < layer.in_dim; ++i) {
            g.grad_weights[o * layer.in_dim + i] = go * input[i];
            g.grad_input[i] += go * layer.weights[o * layer.in_dim + i];
        }
    }
    return g;
}

}  // namespace hmdrec::nn
