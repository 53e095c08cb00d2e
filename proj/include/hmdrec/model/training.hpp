#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hmdrec/data/tracking.hpp"
#include "hmdrec/model/network.hpp"

namespace hmdrec::model {

struct TrainConfig {
    std::size_t batch_size = 512;
    double learning_rate = 1e-4;
    std::size_t epochs = 60;
    std::uint64_t seed = 1;
    /// Stop after the first epoch whose held-out accuracy reaches this value.
    std::optional<double> target_accuracy;

    void validate() const;
};

struct EpochRecord {
    std::size_t epoch = 0;
    double mean_loss = 0.0;
    double test_accuracy = 0.0;  // NaN when no test set was given
};

struct FitResult {
    NetworkWeights weights;
    std::vector<EpochRecord> history;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Mini-batch Adam training. The training set is put in a canonical order
/// (subject, class, trial, start) before the per-epoch Fisher-Yates shuffle,
/// so the result does not depend on the order windows were supplied in.
FitResult fit(NetworkWeights weights, std::span<const data::Window> train, std::span<const data::Window> test,
              const TrainConfig& cfg, const EpochCallback& on_epoch = {});

/// Confusion counts indexed [predicted][true] over class indices 0..17.
using ConfusionMatrix = std::array<std::array<std::uint64_t, kNumClasses>, kNumClasses>;

struct Evaluation {
    double accuracy = 0.0;
    ConfusionMatrix confusion{};
    std::size_t total = 0;
};

/// Raw-score argmax accuracy; windows of classes the network does not score
/// are rejected.
Evaluation evaluate(const NetworkWeights& weights, std::span<const data::Window> dataset);

/// Same bookkeeping for an arbitrary predictor.
Evaluation evaluate_predictions(std::span<const data::Window> dataset,
                                const std::function<ClassLabel(const data::Window&)>& predict);

/// Eval-mode scores for a dataset, (n_classes x windows), computed in chunks.
nn::Matrix score_windows(const NetworkWeights& weights, std::span<const data::Window> windows);

/// Windows whose label is in `classes`.
std::vector<data::Window> filter_classes(std::span<const data::Window> windows, std::span<const ClassLabel> classes);

}  // namespace hmdrec::model
