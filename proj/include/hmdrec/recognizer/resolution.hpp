#pragma once

// Output-resolution stage between the network and the five-sample monitor.
//
// Given the raw scores of one buffered window the candidate is the argmax,
// then:
//   * Shaking / Nodding whose score does not pass its gate is demoted to the
//     best-scoring class other than Shaking and Nodding;
//   * Jumping needs the positive vertical steps of the buffer to add up to
//     more than jump_rise, SquattingDown needs the negative steps to add up
//     to less than squat_drop; otherwise the frame is Invalid;
//   * JoggingInPlace whose score does not pass its gate becomes
//     SteppingInPlace.

#include <cstddef>
#include <span>
#include <string>

#include "hmdrec/data/kv_config.hpp"
#include "hmdrec/model/class_label.hpp"
#include "hmdrec/recognizer/ring_buffer.hpp"

namespace hmdrec::recognizer {

using model::ClassLabel;

/// Score: the gated class's own score must exceed tau.
/// Margin: its lead over the best other class must exceed tau.
enum class GateMode { Score, Margin };

std::string_view name_of(GateMode m);
GateMode parse_gate_mode(std::string_view s);

struct ResolutionConfig {
    double tau_shake = 120.0;
    double tau_nod = 75.0;
    double tau_jog = 75.0;
    double jump_rise = 0.10;    // m
    double squat_drop = -0.10;  // m
    std::size_t monitor_len = 5;
    GateMode gate_mode = GateMode::Score;

    void validate() const;
    static ResolutionConfig from_kv(const data::KeyValueConfig& kv);
    data::KeyValueConfig to_kv() const;
};

/// Sum of the positive first differences.
double positive_rise(std::span<const double> vertical);
/// Sum of the negative first differences (<= 0).
double negative_drop(std::span<const double> vertical);

/// The gated class's score (Score mode) or its lead over the best other
/// class (Margin mode).
double gate_statistic(std::span<const double> scores, ClassLabel gated, GateMode mode);
bool gate_passes(std::span<const double> scores, ClassLabel gated, double tau, GateMode mode);

/// Per-frame audit record.
struct Resolution {
    ClassLabel network_label = ClassLabel::Invalid;  // raw argmax
    ClassLabel candidate = ClassLabel::Invalid;
    bool gesture_demoted = false;
    bool displacement_rejected = false;
    bool jog_gated = false;
};

/// `scores` are the 18 raw outputs in class order; `vertical` the buffered y positions.
Resolution resolve_candidate(std::span<const double> scores, std::span<const double> vertical,
                             const ResolutionConfig& config);

/// Emits a label once the last `length` candidates agree and are valid.
class Monitor {
public:
    explicit Monitor(std::size_t length = 5) : history_(length) {}

    ClassLabel push(ClassLabel candidate);
    void clear() { history_.clear(); }
    std::size_t size() const { return history_.size(); }

private:
    RingBuffer<ClassLabel> history_;
};

}  // namespace hmdrec::recognizer
