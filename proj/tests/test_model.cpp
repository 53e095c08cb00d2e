#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "fixtures.hpp"
#include "hmdrec/error.hpp"
#include "hmdrec/harness/report.hpp"
#include "hmdrec/model/training.hpp"
#include "hmdrec/model/weights_io.hpp"
#include "oracles.hpp"

using namespace hmdrec;
using namespace hmdrec::model;

namespace {

double sample_std(std::span<const double> v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::vector<std::vector<double>> flatten(const NetworkWeights& w) {
    std::vector<std::vector<double>> out;
    for (auto a : w.parameter_arrays()) out.emplace_back(a.begin(), a.end());
    return out;
}

std::vector<data::Window> pick(std::span<const data::Window> windows, std::initializer_list<ClassLabel> classes,
                               std::size_t per_class) {
    std::vector<data::Window> out;
    for (ClassLabel c : classes) {
        std::size_t n = 0;
        for (const auto& w : windows) {
            if (w.label() == c && n < per_class && w.start() % 3 == 0) {
                out.push_back(w);
                ++n;
            }
        }
    }
    return out;
}

}  // namespace

TEST_CASE("class labels") {
    CHECK(index_of(ClassLabel::BeingIdle) == 0);
    CHECK(index_of(ClassLabel::JoggingInPlace) == 9);
    CHECK(index_of(ClassLabel::Shaking) == 17);
    CHECK(index_of(ClassLabel::Invalid) == -1);
    CHECK(all_classes().size() == 18);
    CHECK(body_actions().size() == 10);
    CHECK(head_gestures().size() == 8);
    for (ClassLabel c : all_classes()) CHECK(parse_label(name_of(c)) == c);
    CHECK_FALSE(parse_label("Dancing").has_value());
    CHECK(argmax(std::vector<double>{1.0, 3.0, 3.0, 2.0}) == 1);
}

TEST_CASE("argmax is invariant under a constant shift") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        auto s = oracle::random_vector(18, rng, -50.0, 50.0);
        const std::size_t before = argmax(s);
        const double shift = oracle::random_vector(1, rng, -1000.0, 1000.0)[0];
        for (double& x : s) x += shift;
        CHECK(argmax(s) == before);
    }
}

TEST_CASE("shape contract") {
    const ShapeTrace two = shape_trace(NetworkConfig::two_stream());
    CHECK(two.lengths == std::vector<std::size_t>{38, 12, 10, 3, 1});
    CHECK(two.stream_features == 256);
    CHECK(two.concat_features == 512);
    CHECK(NetworkConfig::two_stream().n_classes() == 18);

    const NetworkConfig single = NetworkConfig::single_stream();
    CHECK(single.streams.size() == 1);
    CHECK(single.streams[0].in_channels() == 9);
    const ShapeTrace one = shape_trace(single);
    CHECK(one.lengths == std::vector<std::size_t>{38, 12, 10, 3, 1});
    CHECK(one.concat_features == 256);
    const NetworkWeights w = build_single_stream(3);
    CHECK(w.dense[0].in_dim == 256);
    CHECK(w.dense.back().out_dim == 18);

    NetworkConfig broken = NetworkConfig::two_stream();
    broken.window_len = 20;
    CHECK_THROWS_AS(shape_trace(broken), ConfigError);
    broken = NetworkConfig::two_stream();
    broken.classes.clear();
    CHECK_THROWS_AS(validate(broken), ConfigError);
}

TEST_CASE("initialization") {
    const NetworkWeights a = init_weights(NetworkConfig::two_stream(), 42);
    const NetworkWeights b = init_weights(NetworkConfig::two_stream(), 42);
    const NetworkWeights c = init_weights(NetworkConfig::two_stream(), 43);
    CHECK(flatten(a) == flatten(b));
    CHECK(flatten(a) != flatten(c));
    for (const auto& stream : a.streams) {
        for (const auto& layer : stream) CHECK(std::all_of(layer.bias.begin(), layer.bias.end(), [](double v) { return v == 0.0; }));
    }
    for (const auto& layer : a.dense) {
        CHECK(std::all_of(layer.bias.begin(), layer.bias.end(), [](double v) { return v == 0.0; }));
        if (layer.in_dim >= 1000) {
            const double want = std::sqrt(2.0 / static_cast<double>(layer.in_dim));
            CHECK(std::abs(sample_std(layer.weights) / want - 1.0) < 0.10);
        }
    }
    // The 512 -> 1024 and 1024 -> 512 layers: only the latter has fan-in >= 1000.
    CHECK(a.dense[1].in_dim == 1024);
}

TEST_CASE("network gradients match finite differences on tiny two-stream networks") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 3; ++trial) {
        const NetworkConfig cfg = oracle::tiny_two_stream(rng);
        const NetworkWeights w = init_weights(cfg, rng());
        const NetworkInput input = oracle::random_input(cfg, 3, rng);
        std::vector<std::size_t> targets;
        for (std::size_t b = 0; b < 3; ++b) targets.push_back(rng() % cfg.n_classes());
        const oracle::GradCheck r = oracle::network_gradcheck(w, input, targets, rng());
        CHECK(r.parameters == w.parameter_count());
        CHECK(r.max_relative_error < 1e-4);
    }
}

TEST_CASE("backward needs a forward cache; gradients are deterministic") {
    std::mt19937_64 rng(7);
    const NetworkConfig cfg = oracle::tiny_two_stream(rng);
    const NetworkWeights w = init_weights(cfg, 1);
    CHECK_THROWS_AS(network_backward(w, ForwardCache{}, nn::Matrix::Zero(static_cast<Eigen::Index>(cfg.n_classes()), 1)),
                    StateError);

    const NetworkInput input = oracle::random_input(cfg, 4, rng);
    const std::vector<std::size_t> targets{0, 1, 0, 1};
    auto grads = [&] {
        std::mt19937_64 drop(5);
        ForwardCache cache;
        const nn::Matrix s = forward_batch(w, input, nn::Mode::Train, drop, &cache);
        const BatchLoss loss = softmax_cross_entropy_batch(s, targets);
        double sum = 0.0;
        for (Eigen::Index b = 0; b < loss.grad_scores.cols(); ++b) sum += loss.grad_scores.col(b).sum();
        CHECK(std::abs(sum) < 1e-12);
        return network_backward(w, cache, loss.grad_scores).arrays;
    };
    CHECK(grads() == grads());
}

TEST_CASE("eval-mode forward is deterministic and matches the batched path") {
    const NetworkWeights w = init_weights(NetworkConfig::two_stream(), 9);
    const auto& windows = fixture::small_split().test;
    std::mt19937_64 rng(1);
    const auto s1 = predict_scores(w, windows[10].samples());
    const auto s2 = predict_scores(w, windows[10].samples());
    CHECK(s1 == s2);
    const nn::Matrix batch = score_windows(w, std::span(windows).subspan(8, 4));
    for (std::size_t i = 0; i < 18; ++i) {
        CHECK(batch(static_cast<Eigen::Index>(i), 2) == doctest::Approx(s1[i]).epsilon(1e-12));
    }
}

TEST_CASE("fresh model scores at chance level") {
    const NetworkWeights w = init_weights(NetworkConfig::two_stream(), 77);
    const Evaluation e = evaluate(w, fixture::small_split().test);
    CHECK(e.accuracy >= 0.02);
    CHECK(e.accuracy <= 0.12);
}

TEST_CASE("evaluate bookkeeping") {
    const auto& test = fixture::small_split().test;
    const Evaluation perfect = evaluate_predictions(test, [](const data::Window& w) { return w.label(); });
    CHECK(perfect.accuracy == 1.0);
    CHECK(perfect.total == test.size());
    for (std::size_t p = 0; p < kNumClasses; ++p) {
        for (std::size_t t = 0; t < kNumClasses; ++t) {
            if (p != t) CHECK(perfect.confusion[p][t] == 0);
        }
    }

    const NetworkWeights w = init_weights(NetworkConfig::two_stream(), 5);
    const Evaluation e = evaluate(w, test);
    std::uint64_t total = 0;
    for (const auto& row : e.confusion) {
        for (auto v : row) total += v;
    }
    CHECK(total == test.size());
    // Accuracy equals the support-weighted mean of per-class recall.
    double weighted = 0.0;
    for (const auto& m : harness::class_metrics(e.confusion, all_classes())) {
        if (m.recall) weighted += *m.recall * static_cast<double>(m.support);
    }
    CHECK(e.accuracy == doctest::Approx(weighted / static_cast<double>(test.size())).epsilon(1e-12));

    CHECK_THROWS_AS(evaluate(w, std::span<const data::Window>{}), ConfigError);
}

TEST_CASE("fit sanity: idle vs jumping separates completely") {
    NetworkConfig cfg = NetworkConfig::two_stream();
    cfg.classes = {ClassLabel::BeingIdle, ClassLabel::Jumping};
    const auto train = pick(fixture::small_split().train, {ClassLabel::BeingIdle, ClassLabel::Jumping}, 100);
    REQUIRE(train.size() == 200);
    TrainConfig tc;
    tc.batch_size = 16;
    tc.epochs = 20;
    tc.seed = 3;
    tc.target_accuracy = 1.0;
    const FitResult r = fit(init_weights(cfg, 1), train, train, tc);
    CHECK(r.history.size() <= 20);
    CHECK(r.history.back().test_accuracy == 1.0);
    CHECK(r.history.back().mean_loss < r.history.front().mean_loss);
}

TEST_CASE("fit is independent of training-set order and rejects bad input") {
    NetworkConfig cfg = NetworkConfig::two_stream();
    cfg.classes = {ClassLabel::SteppingInPlace, ClassLabel::Nodding, ClassLabel::Shaking};
    auto train = pick(fixture::small_split().train, {ClassLabel::SteppingInPlace, ClassLabel::Nodding, ClassLabel::Shaking}, 20);
    TrainConfig tc;
    tc.batch_size = 8;
    tc.epochs = 2;
    tc.seed = 11;
    const FitResult a = fit(init_weights(cfg, 4), train, {}, tc);
    std::reverse(train.begin(), train.end());
    std::shuffle(train.begin(), train.end(), std::mt19937_64(1));
    const FitResult b = fit(init_weights(cfg, 4), train, {}, tc);
    CHECK(flatten(a.weights) == flatten(b.weights));
    CHECK(std::isnan(a.history[0].test_accuracy));

    CHECK_THROWS_AS(fit(init_weights(cfg, 4), std::span<const data::Window>{}, {}, tc), ConfigError);
    TrainConfig bad = tc;
    bad.batch_size = 0;
    CHECK_THROWS_AS(fit(init_weights(cfg, 4), train, {}, bad), ConfigError);
    bad = tc;
    bad.learning_rate = -1.0;
    CHECK_THROWS_AS(fit(init_weights(cfg, 4), train, {}, bad), ConfigError);
}

TEST_CASE("weight files") {
    const NetworkWeights w = init_weights(NetworkConfig::two_stream(), 8);
    const auto bytes = encode_weights(w);
    REQUIRE(bytes.size() > 16);

    const NetworkWeights back = decode_weights(bytes);
    CHECK(back.config == w.config);
    CHECK(flatten(back) == flatten(w));
    CHECK(encode_weights(back) == bytes);

    auto corrupt = bytes;
    corrupt[0] = 'X';
    CHECK_THROWS_AS(decode_weights(corrupt), MagicMismatchError);

    corrupt = bytes;
    corrupt[8] = 9;
    CHECK_THROWS_AS(decode_weights(corrupt), VersionMismatchError);

    for (std::size_t cut : {std::size_t{4}, std::size_t{20}, bytes.size() / 2, bytes.size() - 1}) {
        CHECK_THROWS_AS(decode_weights(std::span(bytes).first(cut)), TruncatedFileError);
    }

    CHECK_THROWS_AS(decode_weights(bytes, NetworkConfig::single_stream()), TopologyMismatchError);
    CHECK_NOTHROW(decode_weights(bytes, NetworkConfig::two_stream()));

    auto longer = bytes;
    longer.push_back(0);
    CHECK_THROWS_AS(decode_weights(longer), TopologyMismatchError);

    const auto path = std::filesystem::temp_directory_path() / "hmdrec_weights_test.bin";
    save_weights(w, path);
    CHECK(flatten(load_weights(path)) == flatten(w));
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_weights(path), IoError);
}
