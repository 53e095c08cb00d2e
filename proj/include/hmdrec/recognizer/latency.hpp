#pragma once

// Recognition latency on labelled trials. Each trial is streamed after an
// idle prefix; its latency is the time from the action onset to the end of
// the first emission of the trial's class whose whole monitor run lies at or
// after the onset:  (event_index - onset_index + 1) / 80 s.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hmdrec/data/generator.hpp"
#include "hmdrec/data/tracking.hpp"
#include "hmdrec/model/network.hpp"
#include "hmdrec/recognizer/recognizer.hpp"

namespace hmdrec::recognizer {

struct LatencyOptions {
    std::size_t idle_prefix_samples = 80;  // 1 s
    std::uint64_t seed = 1;
    data::NoiseSigma prefix_noise;
};

struct ClassLatency {
    ClassLabel label = ClassLabel::Invalid;
    std::vector<double> latencies;  // s, one per recognized trial
    std::size_t trials = 0;
    std::size_t misses = 0;
    /// Trials whose class was emitted from a run that started before the
    /// onset (reported, not counted as latency).
    std::size_t premature = 0;
    double mean = 0.0;    // NaN without hits
    double stddev = 0.0;  // sample standard deviation; 0 for one hit
};

struct LatencySummary {
    std::size_t hits = 0;
    double mean = 0.0;
    double stddev = 0.0;
};

struct LatencyReport {
    std::vector<ClassLatency> per_class;  // class order, only classes with trials

    const ClassLatency* find(ClassLabel label) const;
    /// Pooled statistics over every latency of the given classes.
    LatencySummary pooled(std::span<const ClassLabel> classes) const;
};

/// Index of the first qualifying emission, or nullopt for a miss.
struct TrialLatency {
    std::optional<std::size_t> event_index;
    bool premature = false;
};
TrialLatency find_detection(std::span<const Event> events, ClassLabel target, std::size_t onset_index,
                            std::size_t monitor_len);

LatencySummary summarize(std::span<const double> values);

/// Trials without an onset (BeingIdle) are skipped.
LatencyReport measure_latency(const model::NetworkWeights& weights, const ResolutionConfig& config,
                              std::span<const data::Trial> trials, const LatencyOptions& options = {});

/// Body actions whose emission is not score-gated (everything but idle and jogging).
std::vector<ClassLabel> ungated_body_actions();
/// Head gestures without a gate (everything but nodding and shaking).
std::vector<ClassLabel> ungated_head_gestures();

}  // namespace hmdrec::recognizer
