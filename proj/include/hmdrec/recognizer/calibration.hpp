#pragma once

// Threshold calibration: each gate is set to the highest value the gated
// class reaches on windows of the classes it is confused with, plus a manual
// offset.

#include <span>
#include <vector>

#include "hmdrec/data/tracking.hpp"
#include "hmdrec/model/network.hpp"
#include "hmdrec/recognizer/resolution.hpp"

namespace hmdrec::recognizer {

struct Thresholds {
    double shake = 120.0;
    double nod = 75.0;
    double jog = 75.0;
};

struct CalibrationOptions {
    GateMode mode = GateMode::Score;
    double shake_offset = 0.0;
    double nod_offset = 0.0;
    double jog_offset = 0.0;
};

/// A gated class and the classes it gets confused with.
struct GateSpec {
    ClassLabel gated;
    std::vector<ClassLabel> confusable;
};

const GateSpec& shake_gate();  // Shaking vs RotatingLeft / RotatingRight
const GateSpec& nod_gate();    // Nodding vs TiltingUp / TiltingDown
const GateSpec& jog_gate();    // JoggingInPlace vs SteppingInPlace

/// Max of gate_statistic over score vectors (one per confusable window).
/// Throws ConfigError on an empty set.
double calibrate_gate(std::span<const std::vector<double>> confusable_scores, ClassLabel gated, GateMode mode);

/// Throws ConfigError naming the first gate class missing from `windows`.
Thresholds calibrate_thresholds(const model::NetworkWeights& weights, std::span<const data::Window> windows,
                                const CalibrationOptions& options = {});

/// Thresholds copied into a resolution config.
ResolutionConfig with_thresholds(ResolutionConfig config, const Thresholds& t);

}  // namespace hmdrec::recognizer
