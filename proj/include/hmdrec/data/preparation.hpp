#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hmdrec/data/tracking.hpp"

namespace hmdrec::data {

struct TrimOptions {
    double linear_speed_threshold = 0.05;   // m/s
    double angular_speed_threshold = 0.1;   // rad/s
};

/// Drops the leading and trailing runs where both the linear and angular
/// speed stay below threshold. BeingIdle trials pass through unchanged.
/// Returns std::nullopt (the trial is skipped) when fewer than 40 samples remain.
std::optional<Trial> trim_idle(const Trial& trial, const TrimOptions& options = {});

/// All length-40, stride-1 windows; throws ConfigError for shorter trials.
std::vector<Window> windowize(std::shared_ptr<const Trial> trial);

struct DatasetSplit {
    std::vector<Window> train;  // collection trials 1-3
    std::vector<Window> test;   // collection trial 4
    std::vector<std::shared_ptr<const Trial>> train_trials;
    std::vector<std::shared_ptr<const Trial>> test_trials;
    std::vector<std::string> rejected;  // "subject/class/trial" of trials dropped by trimming
};

/// Groups trials by subject x class, requires trial indices 1..4 in every
/// group, trims each trial and windowizes the survivors.
DatasetSplit split_dataset(std::span<const Trial> trials, const TrimOptions& options = {});

std::string describe(const Trial& trial);

}  // namespace hmdrec::data
