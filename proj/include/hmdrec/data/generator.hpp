#pragma once

// Parametric synthetic head-tracking traces. Each class is a closed-form
// motion primitive plus incidental sway; velocities are exact derivatives of
// the pose, truncated Gaussian noise is added per channel group, and
// accelerations are first differences of the noisy velocities at 80 Hz.

#include <cstdint>
#include <random>
#include <vector>

#include "hmdrec/data/kv_config.hpp"
#include "hmdrec/data/tracking.hpp"

namespace hmdrec::data {

struct NoiseSigma {
    double position = 0.001;              // m
    double linear_velocity = 0.006;       // m/s
    double linear_acceleration = 0.0;     // m/s^2, on top of the differenced velocity noise
    double euler = 0.002;                 // rad
    double angular_velocity = 0.01;       // rad/s
    double angular_acceleration = 0.0;    // rad/s^2, likewise
};

/// Per-subject multipliers on the class parameters.
struct SubjectProfile {
    int id = 0;
    double step_frequency = 1.0;
    double amplitude = 1.0;
    double noise = 1.0;
    double head_height = 1.7;  // m
};

struct GeneratorConfig {
    std::size_t trial_samples = 320;

    double step_frequency_hz = 1.8;
    double step_amplitude_m = 0.05;  // half of the peak-to-peak head bob
    double step_duration_s = 2.2;
    double jog_frequency_hz = 2.8;
    double jog_amplitude_m = 0.08;
    double jog_duration_s = 2.8;
    double drift_speed_mps = 0.5;  // peak horizontal speed for stepping forward/backward
    double drift_duration_s = 1.4;
    double strafe_distance_m = 0.4;
    double strafe_duration_s = 1.0;
    double squat_depth_m = 0.4;
    double squat_duration_s = 1.0;
    double jump_height_m = 0.4;   // peak rise above standing height
    double jump_dip_m = 0.06;     // crouch before take-off and after landing
    double rotate_angle_rad = 1.0;
    double tilt_angle_rad = 0.6;
    double lean_angle_rad = 0.35;
    double lean_radius_m = 0.25;
    double sweep_duration_s = 1.1;
    double nod_amplitude_rad = 0.25;
    double nod_frequency_hz = 2.0;
    double shake_amplitude_rad = 0.35;
    double shake_frequency_hz = 1.8;
    double gesture_min_cycles = 2.0;
    double gesture_max_cycles = 3.0;

    // Incidental head sway while an action is performed.
    double incidental_position_m = 0.015;
    double incidental_angle_rad = 0.06;
    double incidental_min_hz = 0.5;
    double incidental_max_hz = 1.5;
    double tempo_modulation = 0.1;  // max relative tempo wander of steps, jogs, nods and shakes

    double onset_min_s = 0.25;
    double onset_max_s = 0.8;

    NoiseSigma noise;

    double subject_frequency_spread = 0.12;  // multiplier drawn from 1 +- spread
    double subject_amplitude_spread = 0.2;
    double subject_noise_min = 0.7;
    double subject_noise_max = 1.3;
    double head_height_min_m = 1.55;
    double head_height_max_m = 1.85;
    double trial_jitter = 0.05;  // per-trial multiplier spread on frequency, amplitude and duration

    int subjects = 20;
    int trials_per_class = 4;
    std::uint64_t seed = 7;

    /// Throws ConfigError when parameters break class separability guarantees
    /// (jogging faster than stepping, jump and squat clearing 10 cm).
    void validate() const;

    /// Slowest possible jogging and fastest possible stepping after all multipliers.
    double min_jog_frequency() const;
    double max_step_frequency() const;
    double min_jump_rise() const;
    double min_squat_depth() const;

    static GeneratorConfig from_kv(const KeyValueConfig& kv);
    KeyValueConfig to_kv() const;
};

SubjectProfile make_subject(int id, const GeneratorConfig& cfg);

/// One 4 s trial. `rng` drives the per-trial jitter, onset and noise.
Trial generate_trial(ClassLabel label, const SubjectProfile& subject, int trial_index, const GeneratorConfig& cfg,
                     std::mt19937_64& rng);

/// Noise-free version of generate_trial for kinematic checks.
Trial generate_clean_trial(ClassLabel label, const SubjectProfile& subject, int trial_index,
                           const GeneratorConfig& cfg, std::mt19937_64& rng);

/// subjects x 18 classes x trials_per_class trials, ordered by subject, class,
/// trial index. Every trial has its own derived seed.
std::vector<Trial> generate_cohort(const GeneratorConfig& cfg);

/// `count` samples of standing still at `anchor`'s pose, timed to end one
/// sample period before `anchor.t`.
std::vector<TrackingSample> idle_prefix(const TrackingSample& anchor, std::size_t count, const NoiseSigma& noise,
                                        std::mt19937_64& rng);

}  // namespace hmdrec::data
