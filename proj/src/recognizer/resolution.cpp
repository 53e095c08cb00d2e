#include "hmdrec/recognizer/resolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hmdrec/error.hpp"

namespace hmdrec::recognizer {

std::string_view name_of(GateMode m) { return m == GateMode::Score ? "score" : "margin"; }

GateMode parse_gate_mode(std::string_view s) {
    if (s == "score") return GateMode::Score;
    if (s == "margin") return GateMode::Margin;
    throw ConfigError("unknown gate mode '" + std::string(s) + "' (expected score or margin)");
}

void ResolutionConfig::validate() const {
    if (monitor_len < 1) throw ConfigError("resolution: monitor_len must be >= 1");
    if (!(jump_rise > 0.0)) throw ConfigError("resolution: jump_rise must be positive");
    if (!(squat_drop < 0.0)) throw ConfigError("resolution: squat_drop must be negative");
    for (double t : {tau_shake, tau_nod, tau_jog}) {
        if (!std::isfinite(t)) throw ConfigError("resolution: thresholds must be finite");
    }
}

ResolutionConfig ResolutionConfig::from_kv(const data::KeyValueConfig& kv) {
    kv.require_known({"tau_shake", "tau_nod", "tau_jog", "jump_rise", "squat_drop", "monitor_len", "gate_mode"});
    ResolutionConfig c;
    c.tau_shake = kv.get_double("tau_shake", c.tau_shake);
    c.tau_nod = kv.get_double("tau_nod", c.tau_nod);
    c.tau_jog = kv.get_double("tau_jog", c.tau_jog);
    c.jump_rise = kv.get_double("jump_rise", c.jump_rise);
    c.squat_drop = kv.get_double("squat_drop", c.squat_drop);
    const long long m = kv.get_int("monitor_len", static_cast<long long>(c.monitor_len));
    if (m < 1) throw ConfigError("resolution: monitor_len must be >= 1");
    c.monitor_len = static_cast<std::size_t>(m);
    c.gate_mode = parse_gate_mode(kv.get_string("gate_mode", std::string(name_of(c.gate_mode))));
    c.validate();
    return c;
}

data::KeyValueConfig ResolutionConfig::to_kv() const {
    data::KeyValueConfig kv;
    kv.set("tau_shake", tau_shake);
    kv.set("tau_nod", tau_nod);
    kv.set("tau_jog", tau_jog);
    kv.set("jump_rise", jump_rise);
    kv.set("squat_drop", squat_drop);
    kv.set("monitor_len", std::to_string(monitor_len));
    kv.set("gate_mode", std::string(name_of(gate_mode)));
    return kv;
}

double positive_rise(std::span<const double> vertical) {
    double sum = 0.0;
    for (std::size_t i = 1; i < vertical.size(); ++i) {
        const double d = vertical[i] - vertical[i - 1];
        if (d > 0.0) sum += d;
    }
    return sum;
}

double negative_drop(std::span<const double> vertical) {
    double sum = 0.0;
    for (std::size_t i = 1; i < vertical.size(); ++i) {
        const double d = vertical[i] - vertical[i - 1];
        if (d < 0.0) sum += d;
    }
    return sum;
}

double gate_statistic(std::span<const double> scores, ClassLabel gated, GateMode mode) {
    const auto g = static_cast<std::size_t>(model::index_of(gated));
    if (mode == GateMode::Score) return scores[g];
    double best_other = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (i != g) best_other = std::max(best_other, scores[i]);
    }
    return scores[g] - best_other;
}

bool gate_passes(std::span<const double> scores, ClassLabel gated, double tau, GateMode mode) {
    return gate_statistic(scores, gated, mode) > tau;
}

Resolution resolve_candidate(std::span<const double> scores, std::span<const double> vertical,
                             const ResolutionConfig& config) {
    if (scores.size() != model::kNumClasses) throw ConfigError("resolve_candidate: expected 18 scores");
    Resolution r;
    r.network_label = model::label_at(model::argmax(scores));
    ClassLabel c = r.network_label;

    const bool shake_fails = c == ClassLabel::Shaking && !gate_passes(scores, c, config.tau_shake, config.gate_mode);
    const bool nod_fails = c == ClassLabel::Nodding && !gate_passes(scores, c, config.tau_nod, config.gate_mode);
    if (shake_fails || nod_fails) {
        std::size_t best = model::kNumClasses;
        for (std::size_t i = 0; i < scores.size(); ++i) {
            const ClassLabel l = model::label_at(i);
            if (l == ClassLabel::Shaking || l == ClassLabel::Nodding) continue;
            if (best == model::kNumClasses || scores[i] > scores[best]) best = i;
        }
        c = model::label_at(best);
        r.gesture_demoted = true;
    }

    if (c == ClassLabel::Jumping && !(positive_rise(vertical) > config.jump_rise)) {
        r.displacement_rejected = true;
        c = ClassLabel::Invalid;
    } else if (c == ClassLabel::SquattingDown && !(negative_drop(vertical) < config.squat_drop)) {
        r.displacement_rejected = true;
        c = ClassLabel::Invalid;
    }

    if (c == ClassLabel::JoggingInPlace && !gate_passes(scores, c, config.tau_jog, config.gate_mode)) {
        r.jog_gated = true;
        c = ClassLabel::SteppingInPlace;
    }
    r.candidate = c;
    return r;
}

ClassLabel Monitor::push(ClassLabel candidate) {
    history_.push(candidate);
    if (!history_.full()) return ClassLabel::Invalid;
    const ClassLabel first = history_[0];
    if (!model::is_valid(first)) return ClassLabel::Invalid;
    for (std::size_t i = 1; i < history_.size(); ++i) {
        if (history_[i] != first) return ClassLabel::Invalid;
    }
    return first;
}

}  // namespace hmdrec::recognizer
