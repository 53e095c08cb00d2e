#pragma once

// Mini-batch versions of the reference kernels, built on im2col + GEMM.
// A batch of feature maps is a (channels x batch*length) column-major matrix;
// column b*length + i holds position i of example b.

#include <Eigen/Core>
#include <cstddef>
#include <span>
#include <vector>

#include "hmdrec/nn/kernels.hpp"

namespace hmdrec::nn {

using Matrix = Eigen::MatrixXd;
using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct FeatureBatch {
    Matrix data;
    std::size_t length = 0;
    std::size_t batch = 0;

    std::size_t channels() const { return static_cast<std::size_t>(data.rows()); }
};

FeatureBatch make_feature_batch(std::span<const Array2> examples);
Array2 extract_example(const FeatureBatch& batch, std::size_t b);

/// Writes the unrolled input into `columns` (kept for the backward pass).
FeatureBatch conv1d_forward_batch(const FeatureBatch& input, const Conv1DLayer& layer, Matrix& columns);

/// Accumulates parameter gradients; fills `grad_input` when non-null.
void conv1d_backward_batch(const Matrix& columns, std::size_t input_length, const Conv1DLayer& layer,
                           const FeatureBatch& grad_output, std::span<double> grad_weights,
                           std::span<double> grad_bias, FeatureBatch* grad_input);

FeatureBatch maxpool1d_forward_batch(const FeatureBatch& input, std::size_t kernel, std::vector<Eigen::Index>& argmax);

FeatureBatch maxpool1d_backward_batch(const FeatureBatch& grad_output, std::span<const Eigen::Index> argmax,
                                      std::size_t input_length);

/// input is (in_dim x batch); returns (out_dim x batch) pre-activations.
Matrix dense_forward_batch(const Matrix& input, const DenseLayer& layer);

void dense_backward_batch(const Matrix& input, const DenseLayer& layer, const Matrix& grad_output,
                          std::span<double> grad_weights, std::span<double> grad_bias, Matrix* grad_input);

}  // namespace hmdrec::nn
