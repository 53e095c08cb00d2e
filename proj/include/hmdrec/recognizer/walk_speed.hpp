#pragma once

// Walking-in-place speed from the headset's vertical acceleration: the step
// period is the mean spacing of acceleration peaks, mapped to a speed by
// linear interpolation between two (period, speed) points, clamped.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hmdrec/data/tracking.hpp"

namespace hmdrec::recognizer {

struct WalkSpeedConfig {
    double min_peak_height = 1.5;     // m/s^2 above the signal mean
    double min_peak_spacing_s = 0.2;
    double min_duration_s = 2.0;
    double slow_period_s = 0.8;
    double slow_speed_mps = 1.0;
    double fast_period_s = 0.35;
    double fast_speed_mps = 4.44;     // 16 km/h

    void validate() const;
};

struct WalkSpeedEstimate {
    double speed_mps = 0.0;
    std::optional<double> step_period_s;
    std::vector<std::size_t> peaks;  // sample indices
};

/// Peaks of `signal`: local maxima at least `min_height` above the mean,
/// kept greedily from the highest so that no two are closer than `min_spacing`
/// samples. Returned in index order.
std::vector<std::size_t> find_peaks(std::span<const double> signal, double min_height, std::size_t min_spacing);

double speed_for_period(double period_s, const WalkSpeedConfig& config);

/// Inputs shorter than min_duration_s or with fewer than two peaks give 0 m/s.
WalkSpeedEstimate estimate_walk_speed(std::span<const data::TrackingSample> samples,
                                      const WalkSpeedConfig& config = {});

}  // namespace hmdrec::recognizer
