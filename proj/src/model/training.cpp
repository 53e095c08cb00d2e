#include "hmdrec/model/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <tuple>

#include "hmdrec/error.hpp"
#include "hmdrec/seed.hpp"

namespace hmdrec::model {

namespace {

constexpr std::size_t kEvalChunk = 512;

std::vector<const data::Window*> canonical_order(std::span<const data::Window> windows) {
    std::vector<const data::Window*> order;
    order.reserve(windows.size());
    for (const auto& w : windows) order.push_back(&w);
    auto key = [](const data::Window* w) {
        return std::make_tuple(w->trial().subject_id, index_of(w->label()), w->trial().trial_index, w->start());
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](const data::Window* a, const data::Window* b) { return key(a) < key(b); });
    return order;
}

void fisher_yates(std::vector<const data::Window*>& items, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = items.size(); i > 1; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i - 1);
        std::swap(items[i - 1], items[pick(rng)]);
    }
}

}  // namespace

nn::Matrix score_windows(const NetworkWeights& weights, std::span<const data::Window> windows) {
    nn::Matrix scores(static_cast<Eigen::Index>(weights.config.n_classes()), static_cast<Eigen::Index>(windows.size()));
    std::mt19937_64 unused(0);
    for (std::size_t first = 0; first < windows.size(); first += kEvalChunk) {
        const std::size_t n = std::min(kEvalChunk, windows.size() - first);
        const NetworkInput in = make_input(weights.config, windows.subspan(first, n));
        scores.middleCols(static_cast<Eigen::Index>(first), static_cast<Eigen::Index>(n)) =
            forward_batch(weights, in, nn::Mode::Eval, unused);
    }
    return scores;
}

Evaluation evaluate_predictions(std::span<const data::Window> dataset,
                                const std::function<ClassLabel(const data::Window&)>& predict) {
    if (dataset.empty()) throw ConfigError("evaluate: empty dataset");
    Evaluation e;
    std::size_t correct = 0;
    for (const auto& w : dataset) {
        const ClassLabel p = predict(w);
        if (!is_valid(p)) throw ConfigError("evaluate: predictor returned an invalid class");
        e.confusion[static_cast<std::size_t>(index_of(p))][static_cast<std::size_t>(index_of(w.label()))] += 1;
        if (p == w.label()) ++correct;
    }
    e.total = dataset.size();
    e.accuracy = static_cast<double>(correct) / static_cast<double>(e.total);
    return e;
}

Evaluation evaluate(const NetworkWeights& weights, std::span<const data::Window> dataset) {
    if (dataset.empty()) throw ConfigError("evaluate: empty dataset");
    for (const auto& w : dataset) weights.output_index(w.label());
    const nn::Matrix scores = score_windows(weights, dataset);
    std::size_t next = 0;
    return evaluate_predictions(dataset, [&](const data::Window&) {
        const auto col = scores.col(static_cast<Eigen::Index>(next++));
        return weights.config.classes[argmax(std::span<const double>(col.data(), static_cast<std::size_t>(col.size())))];
    });
}

std::vector<data::Window> filter_classes(std::span<const data::Window> windows, std::span<const ClassLabel> classes) {
    std::vector<data::Window> out;
    for (const auto& w : windows) {
        if (std::find(classes.begin(), classes.end(), w.label()) != classes.end()) out.push_back(w);
    }
    return out;
}

void TrainConfig::validate() const {
    if (batch_size < 1) throw ConfigError("fit: batch_size must be >= 1");
    if (epochs < 1) throw ConfigError("fit: epochs must be >= 1");
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw ConfigError("fit: learning_rate must be positive and finite");
    }
    if (target_accuracy && !(*target_accuracy > 0.0 && *target_accuracy <= 1.0)) {
        throw ConfigError("fit: target_accuracy must be in (0, 1]");
    }
}

FitResult fit(NetworkWeights weights, std::span<const data::Window> train, std::span<const data::Window> test,
              const TrainConfig& cfg, const EpochCallback& on_epoch) {
    cfg.validate();
    if (train.empty()) throw ConfigError("fit: empty training set");

    std::vector<const data::Window*> order = canonical_order(train);
    nn::AdamState adam(nn::AdamConfig{cfg.learning_rate, 0.9, 0.999, 1e-8}, weights.parameter_sizes());

    FitResult result;
    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        fisher_yates(order, derive_seed(cfg.seed, {epoch}));
        double loss_sum = 0.0;
        std::size_t n_batches = 0;
        for (std::size_t first = 0; first < order.size(); first += cfg.batch_size) {
            const std::size_t n = std::min(cfg.batch_size, order.size() - first);
            const std::span<const data::Window* const> batch(order.data() + first, n);
            std::vector<std::size_t> targets(n);
            for (std::size_t i = 0; i < n; ++i) targets[i] = weights.output_index(batch[i]->label());

            std::mt19937_64 dropout_rng(derive_seed(cfg.seed, {epoch, n_batches, 0xd0}));
            ForwardCache cache;
            const nn::Matrix scores =
                forward_batch(weights, make_input(weights.config, batch), nn::Mode::Train, dropout_rng, &cache);
            BatchLoss loss;
            try {
                loss = softmax_cross_entropy_batch(scores, targets);
            } catch (const NumericError&) {
                throw NumericError("fit: non-finite scores at epoch " + std::to_string(epoch) + ", batch " +
                                   std::to_string(n_batches));
            }
            if (!std::isfinite(loss.mean_loss)) {
                throw NumericError("fit: non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                                   std::to_string(n_batches));
            }
            const nn::GradientSet grads = network_backward(weights, cache, loss.grad_scores);
            auto params = weights.parameter_arrays();
            nn::adam_step(params, grads, adam);
            loss_sum += loss.mean_loss;
            ++n_batches;
        }
        EpochRecord rec{epoch, loss_sum / static_cast<double>(n_batches), std::numeric_limits<double>::quiet_NaN()};
        if (!test.empty()) rec.test_accuracy = evaluate(weights, test).accuracy;
        result.history.push_back(rec);
        if (on_epoch) on_epoch(rec);
        if (cfg.target_accuracy && !test.empty() && rec.test_accuracy >= *cfg.target_accuracy) break;
    }
    result.weights = std::move(weights);
    return result;
}

}  // namespace hmdrec::model
