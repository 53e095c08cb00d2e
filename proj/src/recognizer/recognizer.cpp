#include "hmdrec/recognizer/recognizer.hpp"

#include "hmdrec/error.hpp"
#include "hmdrec/model/training.hpp"

namespace hmdrec::recognizer {

Scorer network_scorer(const model::NetworkWeights& weights) {
    if (weights.config.classes != model::all_classes()) {
        throw ConfigError("recognizer needs a network that scores all 18 classes in order");
    }
    return [&weights](std::span<const data::TrackingSample> window) { return model::predict_scores(weights, window); };
}

Recognizer::Recognizer(Scorer scorer, ResolutionConfig config, std::size_t window_len)
    : scorer_(std::move(scorer)), config_(config), buffer_(window_len), monitor_(config.monitor_len) {
    config_.validate();
    if (!scorer_) throw ConfigError("recognizer: empty scorer");
}

Recognizer::Recognizer(const model::NetworkWeights& weights, ResolutionConfig config)
    : Recognizer(network_scorer(weights), config, weights.config.window_len) {}

Event Recognizer::push_sample(const data::TrackingSample& sample) {
    Event ev;
    ev.sample_index = pushed_++;
    ev.time = sample.t;
    if (!sample.all_finite()) {
        ++rejected_;
        monitor_.push(ClassLabel::Invalid);
        return ev;
    }
    buffer_.push(sample);
    if (!buffer_.full()) return ev;

    const std::vector<data::TrackingSample> window = buffer_.to_vector();
    std::vector<double> scores = scorer_(window);
    std::vector<double> vertical(window.size());
    for (std::size_t i = 0; i < window.size(); ++i) vertical[i] = window[i].position[1];

    const Resolution res = resolve_candidate(scores, vertical, config_);
    ev.label = monitor_.push(res.candidate);
    if (audit_enabled_) audit_.push_back({ev.sample_index, std::move(scores), res, ev.label});
    return ev;
}

std::vector<Event> Recognizer::run(std::span<const data::TrackingSample> samples) {
    std::vector<Event> events;
    events.reserve(samples.size());
    for (const auto& s : samples) events.push_back(push_sample(s));
    return events;
}

void Recognizer::reset() {
    buffer_.clear();
    monitor_.clear();
    pushed_ = 0;
    rejected_ = 0;
    audit_.clear();
}

std::vector<Event> recognize_stream(const model::NetworkWeights& weights, const ResolutionConfig& config,
                                    std::span<const data::TrackingSample> samples, std::vector<AuditEntry>* audit) {
    network_scorer(weights);  // class check
    const std::size_t len = weights.config.window_len;

    // The buffer only ever holds finite samples, so the scored windows are the
    // length-`len` slices of the finite subsequence.
    auto finite = std::make_shared<data::Trial>();
    for (const auto& s : samples) {
        if (s.all_finite()) finite->samples.push_back(s);
    }
    nn::Matrix scores;
    if (finite->samples.size() >= len) {
        std::vector<data::Window> windows;
        windows.reserve(finite->samples.size() - len + 1);
        for (std::size_t i = 0; i + len <= finite->samples.size(); ++i) windows.emplace_back(finite, i);
        scores = model::score_windows(weights, windows);
    }

    Eigen::Index next = 0;
    Scorer replay = [&](std::span<const data::TrackingSample>) {
        if (next >= scores.cols()) throw StateError("recognize_stream: window count mismatch");
        const auto col = scores.col(next++);
        return std::vector<double>(col.data(), col.data() + col.size());
    };
    Recognizer rec(std::move(replay), config, len);
    rec.enable_audit(audit != nullptr);
    std::vector<Event> events = rec.run(samples);
    if (audit) *audit = rec.audit_log();
    return events;
}

}  // namespace hmdrec::recognizer
