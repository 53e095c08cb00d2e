#include "hmdrec/recognizer/walk_speed.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hmdrec/error.hpp"

namespace hmdrec::recognizer {

void WalkSpeedConfig::validate() const {
    if (!(min_peak_spacing_s >= 0.0) || !(min_duration_s >= 0.0)) {
        throw ConfigError("walk speed: spacing and duration must be non-negative");
    }
    if (!(slow_period_s > fast_period_s) || !(fast_period_s > 0.0)) {
        throw ConfigError("walk speed: need slow_period_s > fast_period_s > 0");
    }
    if (!std::isfinite(slow_speed_mps) || !std::isfinite(fast_speed_mps) || !std::isfinite(min_peak_height)) {
        throw ConfigError("walk speed: non-finite parameter");
    }
}

std::vector<std::size_t> find_peaks(std::span<const double> signal, double min_height, std::size_t min_spacing) {
    if (signal.size() < 3) return {};
    const double mean = std::accumulate(signal.begin(), signal.end(), 0.0) / static_cast<double>(signal.size());
    std::vector<std::size_t> candidates;
    for (std::size_t i = 1; i + 1 < signal.size(); ++i) {
        if (signal[i] > signal[i - 1] && signal[i] >= signal[i + 1] && signal[i] - mean >= min_height) {
            candidates.push_back(i);
        }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](std::size_t a, std::size_t b) { return signal[a] > signal[b]; });
    std::vector<std::size_t> kept;
    for (std::size_t c : candidates) {
        const bool clear = std::all_of(kept.begin(), kept.end(), [&](std::size_t k) {
            return (c > k ? c - k : k - c) >= min_spacing;
        });
        if (clear) kept.push_back(c);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

double speed_for_period(double period_s, const WalkSpeedConfig& config) {
    const double t = (config.slow_period_s - period_s) / (config.slow_period_s - config.fast_period_s);
    const double v = config.slow_speed_mps + t * (config.fast_speed_mps - config.slow_speed_mps);
    const auto [lo, hi] = std::minmax(config.slow_speed_mps, config.fast_speed_mps);
    return std::clamp(v, lo, hi);
}

WalkSpeedEstimate estimate_walk_speed(std::span<const data::TrackingSample> samples, const WalkSpeedConfig& config) {
    config.validate();
    WalkSpeedEstimate est;
    if (static_cast<double>(samples.size()) < config.min_duration_s * data::kSampleRateHz) return est;

    std::vector<double> vertical(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) vertical[i] = samples[i].linear_acceleration[1];
    const auto spacing = static_cast<std::size_t>(std::lround(config.min_peak_spacing_s * data::kSampleRateHz));
    est.peaks = find_peaks(vertical, config.min_peak_height, spacing);
    if (est.peaks.size() < 2) return est;

    const double span = static_cast<double>(est.peaks.back() - est.peaks.front());
    est.step_period_s = span / static_cast<double>(est.peaks.size() - 1) / data::kSampleRateHz;
    est.speed_mps = speed_for_period(*est.step_period_s, config);
    return est;
}

}  // namespace hmdrec::recognizer
