#include "hmdrec/model/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hmdrec/error.hpp"

namespace hmdrec::model {

using data::ChannelGroup;
using Eigen::Index;

NetworkConfig NetworkConfig::two_stream() {
    NetworkConfig c;
    c.streams = {StreamSpec{{ChannelGroup::LinearVelocity}},
                 StreamSpec{{ChannelGroup::AngularVelocity, ChannelGroup::AngularAcceleration}}};
    return c;
}

NetworkConfig NetworkConfig::single_stream() {
    NetworkConfig c;
    c.streams = {StreamSpec{
        {ChannelGroup::LinearVelocity, ChannelGroup::AngularVelocity, ChannelGroup::AngularAcceleration}}};
    return c;
}

NetworkConfig NetworkConfig::single(std::vector<data::ChannelGroup> groups, std::vector<ClassLabel> classes) {
    NetworkConfig c;
    c.streams = {StreamSpec{std::move(groups)}};
    c.classes = std::move(classes);
    return c;
}

ShapeTrace shape_trace(const NetworkConfig& config) {
    if (config.conv_channels.empty()) throw ConfigError("network: at least one conv layer is required");
    if (config.kernel < 1 || config.stride < 1 || config.pool < 1) {
        throw ConfigError("network: kernel, stride and pool must be >= 1");
    }
    ShapeTrace t;
    std::size_t len = config.window_len;
    for (std::size_t i = 0; i < config.conv_channels.size(); ++i) {
        if (len + 2 * config.padding < config.kernel) {
            throw ConfigError("network: conv " + std::to_string(i + 1) + " input length " + std::to_string(len) +
                              " too short for kernel " + std::to_string(config.kernel));
        }
        len = (len + 2 * config.padding - config.kernel) / config.stride + 1;
        t.lengths.push_back(len);
        if (i + 1 < config.conv_channels.size()) {
            if (len < config.pool) {
                throw ConfigError("network: pool " + std::to_string(i + 1) + " input length " + std::to_string(len) +
                                  " < pool kernel " + std::to_string(config.pool));
            }
            len = (len - config.pool) / config.pool + 1;
            t.lengths.push_back(len);
        }
    }
    t.stream_features = config.conv_channels.back() * len;
    t.concat_features = t.stream_features * config.streams.size();
    return t;
}

void validate(const NetworkConfig& config) {
    if (config.streams.empty()) throw ConfigError("network: no input streams");
    for (const auto& s : config.streams) {
        if (s.groups.empty()) throw ConfigError("network: stream without channel groups");
    }
    if (config.classes.empty()) throw ConfigError("network: no output classes");
    for (ClassLabel c : config.classes) {
        if (!is_valid(c)) throw ConfigError("network: invalid class in output set");
    }
    if (!(config.dropout >= 0.0 && config.dropout < 1.0)) throw ConfigError("network: dropout must be in [0, 1)");
    shape_trace(config);
}

std::vector<std::span<double>> NetworkWeights::parameter_arrays() {
    std::vector<std::span<double>> out;
    for (auto& stream : streams) {
        for (auto& conv : stream) {
            out.emplace_back(conv.weights);
            out.emplace_back(conv.bias);
        }
    }
    for (auto& d : dense) {
        out.emplace_back(d.weights);
        out.emplace_back(d.bias);
    }
    return out;
}

std::vector<std::span<const double>> NetworkWeights::parameter_arrays() const {
    std::vector<std::span<const double>> out;
    for (const auto& stream : streams) {
        for (const auto& conv : stream) {
            out.emplace_back(conv.weights);
            out.emplace_back(conv.bias);
        }
    }
    for (const auto& d : dense) {
        out.emplace_back(d.weights);
        out.emplace_back(d.bias);
    }
    return out;
}

std::vector<std::size_t> NetworkWeights::parameter_sizes() const {
    std::vector<std::size_t> sizes;
    for (auto a : parameter_arrays()) sizes.push_back(a.size());
    return sizes;
}

std::size_t NetworkWeights::parameter_count() const {
    std::size_t n = 0;
    for (auto s : parameter_sizes()) n += s;
    return n;
}

std::size_t NetworkWeights::output_index(ClassLabel label) const {
    for (std::size_t i = 0; i < config.classes.size(); ++i) {
        if (config.classes[i] == label) return i;
    }
    throw ConfigError("network does not score class " + std::string(name_of(label)));
}

NetworkWeights init_weights(const NetworkConfig& config, std::uint64_t seed) {
    validate(config);
    const ShapeTrace trace = shape_trace(config);
    NetworkWeights w;
    w.config = config;
    std::mt19937_64 rng(seed);
    auto he_fill = [&rng](std::vector<double>& values, std::size_t fan_in) {
        std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / static_cast<double>(fan_in)));
        for (double& v : values) v = dist(rng);
    };
    for (const auto& stream : config.streams) {
        std::vector<nn::Conv1DLayer> layers;
        std::size_t in_ch = stream.in_channels();
        for (std::size_t out_ch : config.conv_channels) {
            nn::Conv1DLayer layer(out_ch, in_ch, config.kernel, config.stride, config.padding);
            he_fill(layer.weights, in_ch * config.kernel);
            layers.push_back(std::move(layer));
            in_ch = out_ch;
        }
        w.streams.push_back(std::move(layers));
    }
    std::size_t in_dim = trace.concat_features;
    std::vector<std::size_t> dims = config.fc;
    dims.push_back(config.n_classes());
    for (std::size_t out_dim : dims) {
        nn::DenseLayer layer(out_dim, in_dim);
        he_fill(layer.weights, in_dim);
        w.dense.push_back(std::move(layer));
        in_dim = out_dim;
    }
    return w;
}

NetworkWeights build_single_stream(std::uint64_t seed) { return init_weights(NetworkConfig::single_stream(), seed); }

namespace {

template <typename SampleSpanOf>
NetworkInput make_input_impl(const NetworkConfig& config, std::size_t batch, SampleSpanOf samples_of) {
    if (batch == 0) throw ConfigError("make_input: empty batch");
    NetworkInput in;
    in.batch = batch;
    const std::size_t len = config.window_len;
    for (const auto& stream : config.streams) {
        nn::FeatureBatch fb{nn::Matrix(static_cast<Index>(stream.in_channels()), static_cast<Index>(batch * len)), len,
                            batch};
        for (std::size_t b = 0; b < batch; ++b) {
            std::span<const data::TrackingSample> samples = samples_of(b);
            if (samples.size() != len) {
                throw ConfigError("make_input: window has " + std::to_string(samples.size()) + " samples, expected " +
                                  std::to_string(len));
            }
            for (std::size_t i = 0; i < len; ++i) {
                double* col = fb.data.col(static_cast<Index>(b * len + i)).data();
                std::size_t row = 0;
                for (ChannelGroup g : stream.groups) {
                    const data::Vec3& v = data::channel_values(samples[i], g);
                    col[row++] = v[0];
                    col[row++] = v[1];
                    col[row++] = v[2];
                }
            }
        }
        in.streams.push_back(std::move(fb));
    }
    return in;
}

}  // namespace

NetworkInput make_input(const NetworkConfig& config, std::span<const data::Window> windows) {
    return make_input_impl(config, windows.size(), [&](std::size_t b) { return windows[b].samples(); });
}

NetworkInput make_input(const NetworkConfig& config, std::span<const data::Window* const> windows) {
    return make_input_impl(config, windows.size(), [&](std::size_t b) { return windows[b]->samples(); });
}

NetworkInput make_input(const NetworkConfig& config, std::span<const data::TrackingSample> window_samples) {
    return make_input_impl(config, 1, [&](std::size_t) { return window_samples; });
}

nn::Matrix forward_batch(const NetworkWeights& weights, const NetworkInput& input, nn::Mode mode,
                         std::mt19937_64& rng, ForwardCache* cache) {
    const NetworkConfig& cfg = weights.config;
    if (input.streams.size() != weights.streams.size()) {
        throw ConfigError("forward: got " + std::to_string(input.streams.size()) + " input streams, network has " +
                          std::to_string(weights.streams.size()));
    }
    const std::size_t batch = input.batch;
    const ShapeTrace trace = shape_trace(cfg);
    if (cache) {
        cache->valid = false;
        cache->streams.assign(weights.streams.size(), {});
        cache->dense_inputs.clear();
        cache->batch = batch;
    }

    nn::Matrix concat(static_cast<Index>(trace.concat_features), static_cast<Index>(batch));
    for (std::size_t s = 0; s < weights.streams.size(); ++s) {
        const nn::FeatureBatch& x0 = input.streams[s];
        if (x0.channels() != cfg.streams[s].in_channels() || x0.length != cfg.window_len || x0.batch != batch) {
            throw ConfigError("forward: stream " + std::to_string(s) + " input has shape " +
                              std::to_string(x0.channels()) + "x" + std::to_string(x0.length) + ", expected " +
                              std::to_string(cfg.streams[s].in_channels()) + "x" + std::to_string(cfg.window_len));
        }
        nn::FeatureBatch x = x0;
        const auto& layers = weights.streams[s];
        for (std::size_t l = 0; l < layers.size(); ++l) {
            ForwardCache::ConvStage stage;
            stage.input_length = x.length;
            nn::FeatureBatch y = nn::conv1d_forward_batch(x, layers[l], stage.columns);
            y.data = y.data.cwiseMax(0.0);
            const bool pooled = l + 1 < layers.size();
            if (pooled) {
                x = nn::maxpool1d_forward_batch(y, cfg.pool, stage.pool_argmax);
            } else {
                x = y;
            }
            if (cache) {
                stage.pooled = pooled;
                stage.activation = std::move(y);
                cache->streams[s].push_back(std::move(stage));
            }
        }
        // Flatten channel-major: feature c*len + j.
        const Index channels = x.data.rows();
        const Index len = static_cast<Index>(x.length);
        const Index offset = static_cast<Index>(s * trace.stream_features);
        for (Index b = 0; b < static_cast<Index>(batch); ++b) {
            for (Index c = 0; c < channels; ++c) {
                for (Index j = 0; j < len; ++j) concat(offset + c * len + j, b) = x.data(c, b * len + j);
            }
        }
    }

    nn::Matrix mask = nn::Matrix::Ones(concat.rows(), concat.cols());
    if (mode == nn::Mode::Train && cfg.dropout > 0.0) {
        std::bernoulli_distribution keep(1.0 - cfg.dropout);
        const double scale = 1.0 / (1.0 - cfg.dropout);
        for (Index i = 0; i < mask.size(); ++i) mask.data()[i] = keep(rng) ? scale : 0.0;
        concat = concat.cwiseProduct(mask);
    }
    if (cache) cache->dropout_mask = std::move(mask);

    nn::Matrix h = std::move(concat);
    for (std::size_t l = 0; l < weights.dense.size(); ++l) {
        nn::Matrix out = nn::dense_forward_batch(h, weights.dense[l]);
        if (l + 1 < weights.dense.size()) out = out.cwiseMax(0.0);
        if (cache) cache->dense_inputs.push_back(std::move(h));
        h = std::move(out);
    }
    if (cache) cache->valid = true;
    return h;
}

std::vector<double> forward(const NetworkWeights& weights, std::span<const nn::Array2> stream_inputs, nn::Mode mode,
                            std::mt19937_64& rng) {
    NetworkInput in;
    in.batch = 1;
    for (const nn::Array2& a : stream_inputs) in.streams.push_back(nn::make_feature_batch(std::span(&a, 1)));
    const nn::Matrix scores = forward_batch(weights, in, mode, rng);
    return {scores.data(), scores.data() + scores.size()};
}

std::vector<double> predict_scores(const NetworkWeights& weights,
                                   std::span<const data::TrackingSample> window_samples) {
    std::mt19937_64 unused(0);
    const nn::Matrix scores =
        forward_batch(weights, make_input(weights.config, window_samples), nn::Mode::Eval, unused);
    return {scores.data(), scores.data() + scores.size()};
}

nn::GradientSet network_backward(const NetworkWeights& weights, const ForwardCache& cache,
                                 const nn::Matrix& grad_scores) {
    if (!cache.valid) throw StateError("network_backward: no cached forward pass");
    if (static_cast<std::size_t>(grad_scores.cols()) != cache.batch ||
        static_cast<std::size_t>(grad_scores.rows()) != weights.config.n_classes()) {
        throw ConfigError("network_backward: gradient shape does not match the cached batch");
    }
    const NetworkConfig& cfg = weights.config;
    const ShapeTrace trace = shape_trace(cfg);
    nn::GradientSet grads;
    for (std::size_t n : weights.parameter_sizes()) grads.arrays.emplace_back(n, 0.0);
    const std::size_t n_conv = cfg.conv_channels.size();
    const std::size_t dense_base = 2 * weights.streams.size() * n_conv;

    nn::Matrix g = grad_scores;
    for (std::size_t l = weights.dense.size(); l-- > 0;) {
        nn::Matrix g_in;
        nn::dense_backward_batch(cache.dense_inputs[l], weights.dense[l], g, grads.arrays[dense_base + 2 * l],
                                 grads.arrays[dense_base + 2 * l + 1], &g_in);
        if (l > 0) {
            g = g_in.cwiseProduct((cache.dense_inputs[l].array() > 0.0).cast<double>().matrix());
        } else {
            g = g_in.cwiseProduct(cache.dropout_mask);
        }
    }

    const std::size_t batch = cache.batch;
    for (std::size_t s = 0; s < weights.streams.size(); ++s) {
        const auto& stages = cache.streams[s];
        const auto& layers = weights.streams[s];
        const Index channels = static_cast<Index>(cfg.conv_channels.back());
        const std::size_t last_len = stages.back().activation.length;
        const Index len = static_cast<Index>(last_len);
        const Index offset = static_cast<Index>(s * trace.stream_features);
        nn::FeatureBatch gx{nn::Matrix(channels, static_cast<Index>(batch * last_len)), last_len, batch};
        for (Index b = 0; b < static_cast<Index>(batch); ++b) {
            for (Index c = 0; c < channels; ++c) {
                for (Index j = 0; j < len; ++j) gx.data(c, b * len + j) = g(offset + c * len + j, b);
            }
        }
        for (std::size_t l = layers.size(); l-- > 0;) {
            const auto& stage = stages[l];
            nn::FeatureBatch gy = stage.pooled
                                      ? nn::maxpool1d_backward_batch(gx, stage.pool_argmax, stage.activation.length)
                                      : std::move(gx);
            gy.data = gy.data.cwiseProduct((stage.activation.data.array() > 0.0).cast<double>().matrix());
            const std::size_t idx = 2 * (s * n_conv + l);
            nn::FeatureBatch g_in;
            nn::conv1d_backward_batch(stage.columns, stage.input_length, layers[l], gy, grads.arrays[idx],
                                      grads.arrays[idx + 1], l > 0 ? &g_in : nullptr);
            gx = std::move(g_in);
        }
    }
    return grads;
}

BatchLoss softmax_cross_entropy_batch(const nn::Matrix& scores, std::span<const std::size_t> targets) {
    const Index n = scores.cols();
    if (static_cast<std::size_t>(n) != targets.size() || n == 0) {
        throw ConfigError("softmax_cross_entropy_batch: target count does not match batch");
    }
    BatchLoss r;
    r.grad_scores.resize(scores.rows(), n);
    double total = 0.0;
    for (Index b = 0; b < n; ++b) {
        const auto col = scores.col(b);
        const std::size_t label = targets[static_cast<std::size_t>(b)];
        if (label >= static_cast<std::size_t>(scores.rows())) throw ConfigError("target index out of range");
        if (!col.allFinite()) throw NumericError("softmax_cross_entropy_batch: non-finite score");
        double max_score = col(0);
        for (Index i = 1; i < col.size(); ++i) max_score = std::max(max_score, col(i));
        double sum = 0.0;
        for (Index i = 0; i < col.size(); ++i) sum += std::exp(col(i) - max_score);
        const double log_sum = std::log(sum);
        total += -(col(static_cast<Index>(label)) - max_score - log_sum);
        for (Index i = 0; i < col.size(); ++i) r.grad_scores(i, b) = std::exp(col(i) - max_score - log_sum);
        r.grad_scores(static_cast<Index>(label), b) -= 1.0;
    }
    r.mean_loss = total / static_cast<double>(n);
    r.grad_scores /= static_cast<double>(n);
    return r;
}

}  // namespace hmdrec::model
