#pragma once

// Algorithm x data-stream comparison grid: single-stream CNNs and HMMs on
// body actions (LinearVel, LinearAcc, both) and head gestures (AngVel,
// AngAcc, both), plus the 18-class two-stream and single-stream networks.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hmdrec/data/preparation.hpp"
#include "hmdrec/hmm/classifier.hpp"
#include "hmdrec/model/network.hpp"

namespace hmdrec::harness {

struct ComparisonRow {
    std::string algorithm;  // "1D-CNN", "HMM", "two-stream CNN", "single-stream CNN"
    std::string task;       // "body", "head", "all"
    std::string streams;    // e.g. "LinearVel+LinearAcc"
    double accuracy = 0.0;
    std::string detail;     // training budget or selected (K, N)
};

struct ComparisonTable {
    std::vector<ComparisonRow> rows;

    /// nullptr when absent.
    const ComparisonRow* find(std::string_view algorithm, std::string_view task, std::string_view streams) const;
    /// Throws NumericError unless every accuracy lies in [0, 1].
    void validate() const;
    std::string to_text() const;
    std::string to_csv() const;
};

enum class SelectOn { Test, Validation };

struct CompareConfig {
    std::uint64_t seed = 1;
    std::size_t batch_size = 512;
    double learning_rate = 1e-4;
    std::size_t epochs = 60;
    /// When non-zero, each network trains for enough epochs to take at least
    /// this many optimizer steps (overrides `epochs`).
    std::size_t budget_steps = 0;
    /// Keep every n-th training window for the networks.
    std::size_t train_stride = 1;
    bool include_cnn = true;
    bool include_fusion = true;
    bool include_hmm = true;
    hmm::HmmClassifierConfig hmm;
    std::vector<std::size_t> symbol_grid{16, 32, 64};
    std::vector<std::size_t> state_grid{3, 5, 8};
    /// Validation: sweep trains on trials 1-2 and selects on trial 3, then
    /// the winner is retrained on trials 1-3. Test: selects on the test split.
    SelectOn select_on = SelectOn::Test;
};

struct StreamCell {
    std::string task;
    std::vector<data::ChannelGroup> groups;
    std::vector<model::ClassLabel> classes;
};

/// The six single-task cells in table order.
std::vector<StreamCell> comparison_cells();
std::string streams_name(std::span<const data::ChannelGroup> groups);

/// Every `stride`-th window, in input order.
std::vector<data::Window> every_nth(std::span<const data::Window> windows, std::size_t stride);

/// Epoch count for a training set of `n` windows under the config's budget.
std::size_t epochs_for(std::size_t n, const CompareConfig& config);

/// Trains `config`'s network on `train` and returns held-out accuracy on `test`.
double train_and_score(const model::NetworkConfig& network, std::span<const data::Window> train,
                       std::span<const data::Window> test, const CompareConfig& config, std::uint64_t seed);

/// HMM baseline for one cell, with (K, N) chosen per `config.select_on`.
struct HmmCellResult {
    hmm::SweepResult sweep;
    double test_accuracy = 0.0;
};
HmmCellResult run_hmm_cell(std::span<const data::Window> train, std::span<const data::Window> test,
                           const hmm::HmmClassifierConfig& base, const CompareConfig& config);

using ProgressFn = std::function<void(const std::string&)>;

ComparisonTable run_comparison(const data::DatasetSplit& split, const CompareConfig& config,
                               const ProgressFn& progress = {});

}  // namespace hmdrec::harness
