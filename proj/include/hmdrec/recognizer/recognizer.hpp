#pragma once

// Per-sample streaming recognizer: a 40-sample ring buffer, one inference per
// pushed sample once the buffer is full, output resolution and the monitor.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "hmdrec/data/tracking.hpp"
#include "hmdrec/model/network.hpp"
#include "hmdrec/recognizer/resolution.hpp"
#include "hmdrec/recognizer/ring_buffer.hpp"

namespace hmdrec::recognizer {

struct Event {
    ClassLabel label = ClassLabel::Invalid;
    std::size_t sample_index = 0;
    double time = 0.0;  // the pushed sample's timestamp, s
};

/// Maps a full window (oldest first) to 18 raw scores in class order.
using Scorer = std::function<std::vector<double>(std::span<const data::TrackingSample>)>;

/// Scorer backed by a network that scores all 18 classes. The weights must
/// outlive the scorer.
Scorer network_scorer(const model::NetworkWeights& weights);

/// One frame of the audit log, recorded for every inference.
struct AuditEntry {
    std::size_t sample_index = 0;
    std::vector<double> scores;
    Resolution resolution;
    ClassLabel emitted = ClassLabel::Invalid;
};

class Recognizer {
public:
    Recognizer(Scorer scorer, ResolutionConfig config, std::size_t window_len = data::kWindowLength);
    Recognizer(const model::NetworkWeights& weights, ResolutionConfig config);

    /// Exactly one event per call. Non-finite samples are dropped, counted
    /// and break the monitor's run.
    Event push_sample(const data::TrackingSample& sample);

    std::vector<Event> run(std::span<const data::TrackingSample> samples);

    std::size_t rejected_samples() const { return rejected_; }
    std::size_t pushed_samples() const { return pushed_; }
    const ResolutionConfig& config() const { return config_; }

    void enable_audit(bool on) { audit_enabled_ = on; }
    const std::vector<AuditEntry>& audit_log() const { return audit_; }

    void reset();

private:
    Scorer scorer_;
    ResolutionConfig config_;
    RingBuffer<data::TrackingSample> buffer_;
    Monitor monitor_;
    std::size_t pushed_ = 0;
    std::size_t rejected_ = 0;
    bool audit_enabled_ = false;
    std::vector<AuditEntry> audit_;
};

/// Same events as Recognizer(weights, config).run(samples), with the
/// network evaluated in batches over all full windows up front.
std::vector<Event> recognize_stream(const model::NetworkWeights& weights, const ResolutionConfig& config,
                                    std::span<const data::TrackingSample> samples,
                                    std::vector<AuditEntry>* audit = nullptr);

}  // namespace hmdrec::recognizer
