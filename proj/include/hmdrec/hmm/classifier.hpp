#pragma once

// One discrete HMM per class over a shared codebook; a window is labelled
// with the class whose model gives its symbol sequence the highest
// forward log-likelihood.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hmdrec/data/tracking.hpp"
#include "hmdrec/hmm/discrete_hmm.hpp"
#include "hmdrec/hmm/kmeans.hpp"
#include "hmdrec/model/class_label.hpp"

namespace hmdrec::hmm {

using model::ClassLabel;

struct HmmClassifierConfig {
    std::vector<data::ChannelGroup> groups{data::ChannelGroup::LinearVelocity};
    std::size_t n_symbols = 32;
    std::size_t n_states = 5;
    std::size_t kmeans_iters = 100;
    std::size_t kmeans_max_points = 20000;  // evenly thinned beyond this
    /// Training windows per class are thinned to every `window_stride`-th
    /// and then to at most `max_sequences_per_class`.
    std::size_t window_stride = 4;
    std::size_t max_sequences_per_class = 600;
    std::size_t em_iters = 500;
    double em_tol = 1e-2;
    std::uint64_t seed = 1;

    void validate() const;
};

struct HMMClassifier {
    std::vector<data::ChannelGroup> groups;
    Codebook codebook;
    std::vector<ClassLabel> classes;  // ascending class index
    std::vector<DiscreteHMM> models;  // one per class
};

/// Codebook over the distinct samples of the windows' trials, standardized
/// per dimension.
Codebook fit_codebook(std::span<const data::Window> train, const HmmClassifierConfig& config);

/// Trains one HMM per class present in `train`. `em_logs`, when given,
/// receives every class's Baum-Welch result in class order.
HMMClassifier train_hmm_classifier(std::span<const data::Window> train, const HmmClassifierConfig& config,
                                   std::vector<BaumWelchResult>* em_logs = nullptr);
HMMClassifier train_hmm_classifier(std::span<const data::Window> train, Codebook codebook,
                                   const HmmClassifierConfig& config, std::vector<BaumWelchResult>* em_logs = nullptr);

/// Ties go to the lowest class index.
ClassLabel hmm_classify(const HMMClassifier& classifier, const data::Window& window);
double hmm_accuracy(const HMMClassifier& classifier, std::span<const data::Window> windows);

struct SweepCell {
    std::size_t n_symbols = 0;
    std::size_t n_states = 0;
    double accuracy = 0.0;
};

struct SweepResult {
    std::vector<SweepCell> cells;  // symbols-major grid order
    SweepCell best;                // first maximum in grid order
};

/// Trains on `train` for every (K, N) and scores on `eval`.
SweepResult sweep(std::span<const data::Window> train, std::span<const data::Window> eval,
                  const HmmClassifierConfig& base, std::span<const std::size_t> symbol_grid,
                  std::span<const std::size_t> state_grid);

}  // namespace hmdrec::hmm
