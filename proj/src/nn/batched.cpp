#include "hmdrec/nn/batched.hpp"

#include <string>

#include "hmdrec/error.hpp"

namespace hmdrec::nn {

namespace {

using Index = Eigen::Index;

// Plain loops: Eigen's vectorized reductions change summation order with the
// destination's alignment, which breaks run-to-run reproducibility.
void add_row_sums(const Matrix& m, std::span<double> out) {
    for (Index r = 0; r < m.rows(); ++r) {
        double acc = 0.0;
        for (Index c = 0; c < m.cols(); ++c) acc += m(r, c);
        out[static_cast<std::size_t>(r)] += acc;
    }
}

Eigen::Map<const RowMajorMatrix> weight_map(const std::vector<double>& w, std::size_t rows, std::size_t cols) {
    return {w.data(), static_cast<Index>(rows), static_cast<Index>(cols)};
}

Eigen::Map<RowMajorMatrix> grad_map(std::span<double> g, std::size_t rows, std::size_t cols) {
    if (g.size() != rows * cols) throw ConfigError("gradient buffer does not match parameter shape");
    return {g.data(), static_cast<Index>(rows), static_cast<Index>(cols)};
}

}  // namespace

FeatureBatch make_feature_batch(std::span<const Array2> examples) {
    if (examples.empty()) throw ConfigError("make_feature_batch: empty batch");
    const std::size_t c = examples.front().channels;
    const std::size_t len = examples.front().length;
    FeatureBatch fb{Matrix(static_cast<Index>(c), static_cast<Index>(len * examples.size())), len, examples.size()};
    for (std::size_t b = 0; b < examples.size(); ++b) {
        const Array2& ex = examples[b];
        if (ex.channels != c || ex.length != len) throw ConfigError("make_feature_batch: ragged batch");
        for (std::size_t ch = 0; ch < c; ++ch) {
            for (std::size_t i = 0; i < len; ++i) {
                fb.data(static_cast<Index>(ch), static_cast<Index>(b * len + i)) = ex(ch, i);
            }
        }
    }
    return fb;
}

Array2 extract_example(const FeatureBatch& batch, std::size_t b) {
    Array2 a(batch.channels(), batch.length);
    for (std::size_t c = 0; c < a.channels; ++c) {
        for (std::size_t i = 0; i < a.length; ++i) {
            a(c, i) = batch.data(static_cast<Index>(c), static_cast<Index>(b * batch.length + i));
        }
    }
    return a;
}

FeatureBatch conv1d_forward_batch(const FeatureBatch& input, const Conv1DLayer& layer, Matrix& columns) {
    layer.validate();
    if (input.channels() != layer.in_channels) {
        throw ConfigError("conv1d: input has " + std::to_string(input.channels()) + " channels, layer expects " +
                          std::to_string(layer.in_channels));
    }
    const std::size_t in_len = input.length;
    const std::size_t out_len = layer.output_length(in_len);
    const std::size_t kernel = layer.kernel_size;
    const auto pad = static_cast<std::ptrdiff_t>(layer.padding);
    const auto len = static_cast<std::ptrdiff_t>(in_len);

    columns.resize(static_cast<Index>(layer.in_channels * kernel), static_cast<Index>(input.batch * out_len));
    for (std::size_t b = 0; b < input.batch; ++b) {
        for (std::size_t j = 0; j < out_len; ++j) {
            double* col = columns.col(static_cast<Index>(b * out_len + j)).data();
            for (std::size_t c = 0; c < layer.in_channels; ++c) {
                for (std::size_t k = 0; k < kernel; ++k) {
                    const auto pos = static_cast<std::ptrdiff_t>(j * layer.stride + k) - pad;
                    col[c * kernel + k] = (pos < 0 || pos >= len)
                                              ? 0.0
                                              : input.data(static_cast<Index>(c), static_cast<Index>(b * in_len) + pos);
                }
            }
        }
    }

    FeatureBatch out{Matrix(static_cast<Index>(layer.out_channels), columns.cols()), out_len, input.batch};
    out.data.noalias() = weight_map(layer.weights, layer.out_channels, layer.in_channels * kernel) * columns;
    out.data.colwise() += Eigen::Map<const Eigen::VectorXd>(layer.bias.data(), static_cast<Index>(layer.out_channels));
    return out;
}

void conv1d_backward_batch(const Matrix& columns, std::size_t input_length, const Conv1DLayer& layer,
                           const FeatureBatch& grad_output, std::span<double> grad_weights,
                           std::span<double> grad_bias, FeatureBatch* grad_input) {
    const std::size_t kernel = layer.kernel_size;
    const std::size_t out_len = grad_output.length;
    if (grad_bias.size() != layer.out_channels || columns.cols() != grad_output.data.cols()) {
        throw ConfigError("conv1d_backward_batch: shape mismatch");
    }
    auto gw = grad_map(grad_weights, layer.out_channels, layer.in_channels * kernel);
    gw.noalias() += grad_output.data * columns.transpose();
    add_row_sums(grad_output.data, grad_bias);

    if (grad_input == nullptr) return;
    const Matrix dcol =
        weight_map(layer.weights, layer.out_channels, layer.in_channels * kernel).transpose() * grad_output.data;
    const auto pad = static_cast<std::ptrdiff_t>(layer.padding);
    const auto len = static_cast<std::ptrdiff_t>(input_length);
    grad_input->length = input_length;
    grad_input->batch = grad_output.batch;
    grad_input->data = Matrix::Zero(static_cast<Index>(layer.in_channels),
                                    static_cast<Index>(input_length * grad_output.batch));
    for (std::size_t b = 0; b < grad_output.batch; ++b) {
        for (std::size_t j = 0; j < out_len; ++j) {
            const double* col = dcol.col(static_cast<Index>(b * out_len + j)).data();
            for (std::size_t c = 0; c < layer.in_channels; ++c) {
                for (std::size_t k = 0; k < kernel; ++k) {
                    const auto pos = static_cast<std::ptrdiff_t>(j * layer.stride + k) - pad;
                    if (pos < 0 || pos >= len) continue;
                    grad_input->data(static_cast<Index>(c), static_cast<Index>(b * input_length) + pos) +=
                        col[c * kernel + k];
                }
            }
        }
    }
}

FeatureBatch maxpool1d_forward_batch(const FeatureBatch& input, std::size_t kernel, std::vector<Index>& argmax) {
    if (kernel < 1) throw ConfigError("maxpool: kernel must be >= 1");
    if (input.length < kernel) {
        throw ConfigError("maxpool: input length " + std::to_string(input.length) + " < kernel " +
                          std::to_string(kernel));
    }
    const std::size_t out_len = (input.length - kernel) / kernel + 1;
    const Index channels = input.data.rows();
    FeatureBatch out{Matrix(channels, static_cast<Index>(out_len * input.batch)), out_len, input.batch};
    argmax.resize(static_cast<std::size_t>(out.data.size()));
    for (std::size_t b = 0; b < input.batch; ++b) {
        for (std::size_t j = 0; j < out_len; ++j) {
            const Index ocol = static_cast<Index>(b * out_len + j);
            const Index first = static_cast<Index>(b * input.length + j * kernel);
            for (Index c = 0; c < channels; ++c) {
                Index best = first;
                for (Index i = first + 1; i < first + static_cast<Index>(kernel); ++i) {
                    if (input.data(c, i) > input.data(c, best)) best = i;
                }
                out.data(c, ocol) = input.data(c, best);
                argmax[static_cast<std::size_t>(ocol * channels + c)] = best;
            }
        }
    }
    return out;
}

FeatureBatch maxpool1d_backward_batch(const FeatureBatch& grad_output, std::span<const Index> argmax,
                                      std::size_t input_length) {
    if (argmax.size() != static_cast<std::size_t>(grad_output.data.size())) {
        throw ConfigError("maxpool_backward: argmax size mismatch");
    }
    const Index channels = grad_output.data.rows();
    FeatureBatch g{Matrix::Zero(channels, static_cast<Index>(input_length * grad_output.batch)), input_length,
                   grad_output.batch};
    for (Index col = 0; col < grad_output.data.cols(); ++col) {
        for (Index c = 0; c < channels; ++c) {
            g.data(c, argmax[static_cast<std::size_t>(col * channels + c)]) += grad_output.data(c, col);
        }
    }
    return g;
}

Matrix dense_forward_batch(const Matrix& input, const DenseLayer& layer) {
    layer.validate();
    if (static_cast<std::size_t>(input.rows()) != layer.in_dim) {
        throw ConfigError("dense: input length " + std::to_string(input.rows()) + " != in_dim " +
                          std::to_string(layer.in_dim));
    }
    Matrix out(static_cast<Index>(layer.out_dim), input.cols());
    out.noalias() = weight_map(layer.weights, layer.out_dim, layer.in_dim) * input;
    out.colwise() += Eigen::Map<const Eigen::VectorXd>(layer.bias.data(), static_cast<Index>(layer.out_dim));
    return out;
}

void dense_backward_batch(const Matrix& input, const DenseLayer& layer, const Matrix& grad_output,
                          std::span<double> grad_weights, std::span<double> grad_bias, Matrix* grad_input) {
    if (grad_bias.size() != layer.out_dim || static_cast<std::size_t>(grad_output.rows()) != layer.out_dim) {
        throw ConfigError("dense_backward_batch: shape mismatch");
    }
    auto gw = grad_map(grad_weights, layer.out_dim, layer.in_dim);
    gw.noalias() += grad_output * input.transpose();
    add_row_sums(grad_output, grad_bias);
    if (grad_input != nullptr) {
        grad_input->noalias() = weight_map(layer.weights, layer.out_dim, layer.in_dim).transpose() * grad_output;
    }
}

}  // namespace hmdrec::nn
