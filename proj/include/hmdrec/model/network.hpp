#pragma once

// Multi-stream 1-D CNN. Each stream is conv -> ReLU -> pool, conv -> ReLU ->
// pool, conv -> ReLU over its own channel groups; the flattened streams are
// concatenated, passed through dropout, two ReLU dense layers and a linear
// output layer that emits raw class scores.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "hmdrec/data/tracking.hpp"
#include "hmdrec/model/class_label.hpp"
#include "hmdrec/nn/adam.hpp"
#include "hmdrec/nn/batched.hpp"
#include "hmdrec/nn/kernels.hpp"

namespace hmdrec::model {

struct StreamSpec {
    std::vector<data::ChannelGroup> groups;

    std::size_t in_channels() const { return 3 * groups.size(); }
    bool operator==(const StreamSpec&) const = default;
};

struct NetworkConfig {
    std::size_t window_len = data::kWindowLength;
    std::vector<StreamSpec> streams;
    std::vector<std::size_t> conv_channels{64, 128, 256};
    std::size_t kernel = 7;
    std::size_t stride = 1;
    std::size_t padding = 2;
    std::size_t pool = 3;  // pooling stride equals its kernel
    std::vector<std::size_t> fc{1024, 512};
    std::vector<ClassLabel> classes = all_classes();
    double dropout = 0.2;

    /// Body stream on linear velocity, head stream on angular velocity and
    /// acceleration, all 18 classes.
    static NetworkConfig two_stream();
    /// One stream over linear velocity + angular velocity + angular acceleration.
    static NetworkConfig single_stream();
    /// One stream over the given groups, restricted to `classes`.
    static NetworkConfig single(std::vector<data::ChannelGroup> groups, std::vector<ClassLabel> classes);

    std::size_t n_classes() const { return classes.size(); }
    bool operator==(const NetworkConfig&) const = default;
};

/// Per-stream feature lengths after each conv / pool stage.
struct ShapeTrace {
    std::vector<std::size_t> lengths;  // e.g. [38, 12, 10, 3, 1]
    std::size_t stream_features = 0;   // channels * final length
    std::size_t concat_features = 0;
};

/// Throws ConfigError when any stage cannot be built.
ShapeTrace shape_trace(const NetworkConfig& config);
void validate(const NetworkConfig& config);

struct NetworkWeights {
    NetworkConfig config;
    std::vector<std::vector<nn::Conv1DLayer>> streams;
    std::vector<nn::DenseLayer> dense;  // hidden layers then the output layer

    /// Parameter arrays in declared order: each stream's conv weights/bias,
    /// then each dense layer's weights/bias.
    std::vector<std::span<double>> parameter_arrays();
    std::vector<std::span<const double>> parameter_arrays() const;
    std::vector<std::size_t> parameter_sizes() const;
    std::size_t parameter_count() const;

    /// Output row of a class; throws if the network does not score it.
    std::size_t output_index(ClassLabel label) const;
};

using TwoStreamWeights = NetworkWeights;

/// He-normal weights (variance 2/fan_in), zero biases.
NetworkWeights init_weights(const NetworkConfig& config, std::uint64_t seed);
NetworkWeights build_single_stream(std::uint64_t seed);

/// Per-stream input batches for a set of windows (or raw sample spans).
struct NetworkInput {
    std::vector<nn::FeatureBatch> streams;
    std::size_t batch = 0;
};

NetworkInput make_input(const NetworkConfig& config, std::span<const data::Window> windows);
NetworkInput make_input(const NetworkConfig& config, std::span<const data::Window* const> windows);
NetworkInput make_input(const NetworkConfig& config, std::span<const data::TrackingSample> window_samples);

/// Everything the backward pass needs from a forward pass.
struct ForwardCache {
    struct ConvStage {
        nn::Matrix columns;
        std::size_t input_length = 0;
        nn::FeatureBatch activation;  // post-ReLU conv output
        std::vector<Eigen::Index> pool_argmax;
        bool pooled = false;
    };
    std::vector<std::vector<ConvStage>> streams;
    nn::Matrix dropout_mask;
    std::vector<nn::Matrix> dense_inputs;  // input of each dense layer
    std::size_t batch = 0;
    bool valid = false;
};

/// Scores are (n_classes x batch). Train mode applies dropout drawn from rng.
nn::Matrix forward_batch(const NetworkWeights& weights, const NetworkInput& input, nn::Mode mode,
                         std::mt19937_64& rng, ForwardCache* cache = nullptr);

/// Scores for one example given one [channels x window_len] array per stream.
std::vector<double> forward(const NetworkWeights& weights, std::span<const nn::Array2> stream_inputs, nn::Mode mode,
                            std::mt19937_64& rng);

/// Eval-mode scores for a single window of samples.
std::vector<double> predict_scores(const NetworkWeights& weights, std::span<const data::TrackingSample> window_samples);

/// Gradients of every parameter given d(loss)/d(scores).
nn::GradientSet network_backward(const NetworkWeights& weights, const ForwardCache& cache,
                                 const nn::Matrix& grad_scores);

struct BatchLoss {
    double mean_loss = 0.0;
    nn::Matrix grad_scores;  // gradient of the mean loss
};

/// Mean softmax cross-entropy over the batch; targets are output indices.
BatchLoss softmax_cross_entropy_batch(const nn::Matrix& scores, std::span<const std::size_t> targets);

}  // namespace hmdrec::model
