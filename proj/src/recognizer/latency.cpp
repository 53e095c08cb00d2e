#include "hmdrec/recognizer/latency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "hmdrec/seed.hpp"

namespace hmdrec::recognizer {

const ClassLatency* LatencyReport::find(ClassLabel label) const {
    for (const auto& c : per_class) {
        if (c.label == label) return &c;
    }
    return nullptr;
}

LatencySummary LatencyReport::pooled(std::span<const ClassLabel> classes) const {
    std::vector<double> all;
    for (ClassLabel l : classes) {
        if (const ClassLatency* c = find(l)) all.insert(all.end(), c->latencies.begin(), c->latencies.end());
    }
    return summarize(all);
}

LatencySummary summarize(std::span<const double> values) {
    LatencySummary s;
    s.hits = values.size();
    if (values.empty()) {
        s.mean = s.stddev = std::numeric_limits<double>::quiet_NaN();
        return s;
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double sq = 0.0;
        for (double v : values) sq += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
    }
    return s;
}

TrialLatency find_detection(std::span<const Event> events, ClassLabel target, std::size_t onset_index,
                            std::size_t monitor_len) {
    TrialLatency r;
    const std::size_t earliest = onset_index + monitor_len - 1;
    for (std::size_t i = onset_index; i < events.size(); ++i) {
        if (events[i].label != target) continue;
        if (i < earliest) {
            r.premature = true;
            continue;
        }
        r.event_index = i;
        break;
    }
    return r;
}

LatencyReport measure_latency(const model::NetworkWeights& weights, const ResolutionConfig& config,
                              std::span<const data::Trial> trials, const LatencyOptions& options) {
    std::vector<ClassLatency> by_class(model::kNumClasses);
    for (std::size_t i = 0; i < by_class.size(); ++i) by_class[i].label = model::label_at(i);

    for (const data::Trial& trial : trials) {
        if (!trial.onset || trial.samples.empty()) continue;
        std::mt19937_64 rng(derive_seed(options.seed, {static_cast<std::uint64_t>(trial.subject_id),
                                                       static_cast<std::uint64_t>(model::index_of(trial.label)),
                                                       static_cast<std::uint64_t>(trial.trial_index)}));
        std::vector<data::TrackingSample> stream =
            data::idle_prefix(trial.samples.front(), options.idle_prefix_samples, options.prefix_noise, rng);
        stream.insert(stream.end(), trial.samples.begin(), trial.samples.end());

        const std::vector<Event> events = recognize_stream(weights, config, stream);
        const std::size_t onset = options.idle_prefix_samples + *trial.onset;
        const TrialLatency hit = find_detection(events, trial.label, onset, config.monitor_len);

        ClassLatency& c = by_class[static_cast<std::size_t>(model::index_of(trial.label))];
        ++c.trials;
        if (hit.premature) ++c.premature;
        if (hit.event_index) {
            c.latencies.push_back(static_cast<double>(*hit.event_index - onset + 1) / data::kSampleRateHz);
        } else {
            ++c.misses;
        }
    }

    LatencyReport report;
    for (ClassLatency& c : by_class) {
        if (c.trials == 0) continue;
        const LatencySummary s = summarize(c.latencies);
        c.mean = s.mean;
        c.stddev = s.stddev;
        report.per_class.push_back(std::move(c));
    }
    return report;
}

std::vector<ClassLabel> ungated_body_actions() {
    std::vector<ClassLabel> out;
    for (ClassLabel l : model::body_actions()) {
        if (l != ClassLabel::BeingIdle && l != ClassLabel::JoggingInPlace) out.push_back(l);
    }
    return out;
}

std::vector<ClassLabel> ungated_head_gestures() {
    std::vector<ClassLabel> out;
    for (ClassLabel l : model::head_gestures()) {
        if (l != ClassLabel::Nodding && l != ClassLabel::Shaking) out.push_back(l);
    }
    return out;
}

}  // namespace hmdrec::recognizer
