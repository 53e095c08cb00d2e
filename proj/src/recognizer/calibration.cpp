#include "hmdrec/recognizer/calibration.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "hmdrec/error.hpp"
#include "hmdrec/model/training.hpp"

namespace hmdrec::recognizer {

const GateSpec& shake_gate() {
    static const GateSpec g{ClassLabel::Shaking, {ClassLabel::RotatingLeft, ClassLabel::RotatingRight}};
    return g;
}

const GateSpec& nod_gate() {
    static const GateSpec g{ClassLabel::Nodding, {ClassLabel::TiltingUp, ClassLabel::TiltingDown}};
    return g;
}

const GateSpec& jog_gate() {
    static const GateSpec g{ClassLabel::JoggingInPlace, {ClassLabel::SteppingInPlace}};
    return g;
}

double calibrate_gate(std::span<const std::vector<double>> confusable_scores, ClassLabel gated, GateMode mode) {
    if (confusable_scores.empty()) {
        throw ConfigError("calibration: no confusable windows for " + std::string(model::name_of(gated)));
    }
    double tau = -std::numeric_limits<double>::infinity();
    for (const auto& s : confusable_scores) tau = std::max(tau, gate_statistic(s, gated, mode));
    return tau;
}

namespace {

double calibrate_one(const model::NetworkWeights& weights, std::span<const data::Window> windows, const GateSpec& gate,
                     GateMode mode) {
    std::vector<ClassLabel> needed = gate.confusable;
    needed.push_back(gate.gated);
    for (ClassLabel c : needed) {
        const bool present = std::any_of(windows.begin(), windows.end(), [c](const data::Window& w) { return w.label() == c; });
        if (!present) throw ConfigError("calibration set has no windows of " + std::string(model::name_of(c)));
    }
    const auto confusable = model::filter_classes(windows, gate.confusable);
    const nn::Matrix scores = model::score_windows(weights, confusable);
    std::vector<std::vector<double>> columns(static_cast<std::size_t>(scores.cols()));
    for (Eigen::Index j = 0; j < scores.cols(); ++j) {
        columns[static_cast<std::size_t>(j)].assign(scores.col(j).data(), scores.col(j).data() + scores.rows());
    }
    return calibrate_gate(columns, gate.gated, mode);
}

}  // namespace

Thresholds calibrate_thresholds(const model::NetworkWeights& weights, std::span<const data::Window> windows,
                                const CalibrationOptions& options) {
    if (weights.config.classes != model::all_classes()) {
        throw ConfigError("calibration needs a network that scores all 18 classes in order");
    }
    Thresholds t;
    t.shake = calibrate_one(weights, windows, shake_gate(), options.mode) + options.shake_offset;
    t.nod = calibrate_one(weights, windows, nod_gate(), options.mode) + options.nod_offset;
    t.jog = calibrate_one(weights, windows, jog_gate(), options.mode) + options.jog_offset;
    return t;
}

ResolutionConfig with_thresholds(ResolutionConfig config, const Thresholds& t) {
    config.tau_shake = t.shake;
    config.tau_nod = t.nod;
    config.tau_jog = t.jog;
    return config;
}

}  // namespace hmdrec::recognizer
