#include "hmdrec/data/generator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "hmdrec/error.hpp"
#include "hmdrec/seed.hpp"

namespace hmdrec::data {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGravity = 9.81;
constexpr double kPushOff = 0.15;   // s, take-off and landing velocity ramps
constexpr double kJumpDip = 0.3;    // s, crouch duration either side of the flight
constexpr double kTailMargin = 0.15;  // s of idle kept after every motion

// Value and time derivative carried together.
struct Dual {
    double v = 0.0;
    double d = 0.0;
};

Dual constant(double c) { return {c, 0.0}; }
Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
Dual operator*(double s, Dual a) { return {s * a.v, s * a.d}; }
Dual sin(Dual a) { return {std::sin(a.v), std::cos(a.v) * a.d}; }
Dual cos(Dual a) { return {std::cos(a.v), -std::sin(a.v) * a.d}; }

/// 0 -> 1 cosine ease over u in [0, 1], flat outside.
Dual ease(Dual u) {
    if (u.v <= 0.0) return constant(0.0);
    if (u.v >= 1.0) return constant(1.0);
    return constant(0.5) - 0.5 * cos(kPi * u);
}

/// Ramps up over `ramp` seconds after `start`, down over `ramp` before `end`.
Dual envelope(Dual t, double start, double end, double ramp) {
    return ease((1.0 / ramp) * (t - constant(start))) * ease((1.0 / ramp) * (constant(end) - t));
}

struct Pose {
    Dual x, y, z;
    Dual yaw, pitch, roll;
};

// Everything drawn once per trial.
struct TrialPlan {
    double freq_mult = 1.0;
    double amp_mult = 1.0;
    double dur_mult = 1.0;
    double onset = 0.5;
    double duration = 1.0;
    double cycles = 2.0;
    // Incidental motion: two sinusoids per pose axis (x, y, z, yaw, pitch, roll).
    std::array<std::array<double, 2>, 6> wobble_amp{};
    std::array<std::array<double, 2>, 6> wobble_freq{};
    std::array<std::array<double, 2>, 6> wobble_phase{};
    double tempo_depth = 0.0;  // relative frequency modulation of rhythmic actions
    double tempo_rate = 0.5;   // Hz
};

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

struct JumpShape {
    double v0 = 0.0;
    double flight = 0.0;
    double dip = 0.0;
    double total() const { return 2 * kJumpDip + 2 * kPushOff + flight; }
};

JumpShape jump_shape(double height, double dip) {
    // Rise during push-off is v0*T/2; ballistic rise is v0^2/(2g).
    const double half = kPushOff / 2.0;
    const double v0 = kGravity * (-half + std::sqrt(half * half + 2.0 * height / kGravity));
    return {v0, 2.0 * v0 / kGravity, dip};
}

/// Vertical offset of a jump relative to standing height, starting at t = 0.
Dual jump_offset(Dual t, const JumpShape& j) {
    const double t_takeoff = kJumpDip;
    const double t_flight = t_takeoff + kPushOff;
    const double t_land = t_flight + j.flight;
    const double t_absorb = t_land + kPushOff;
    const double t_end = t_absorb + kJumpDip;
    const double pushoff_rise = j.v0 * kPushOff / 2.0;
    if (t.v <= 0.0 || t.v >= t_end) return constant(0.0);
    if (t.v < t_takeoff) {
        const Dual s = sin((kPi / kJumpDip) * t);
        return -j.dip * (s * s);
    }
    if (t.v < t_flight) {
        // v = v0 * (3u^2 - 2u^3)  =>  y = v0 T (u^3 - u^4 / 2)
        const Dual u = (1.0 / kPushOff) * (t - constant(t_takeoff));
        return (j.v0 * kPushOff) * (u * u * u - 0.5 * (u * u * u * u));
    }
    if (t.v < t_land) {
        const Dual tau = t - constant(t_flight);
        return constant(pushoff_rise) + j.v0 * tau - (0.5 * kGravity) * (tau * tau);
    }
    if (t.v < t_absorb) {
        // v = -v0 * (1 - (3u^2 - 2u^3))
        const Dual u = (1.0 / kPushOff) * (t - constant(t_land));
        return constant(pushoff_rise) - (j.v0 * kPushOff) * (u - u * u * u + 0.5 * (u * u * u * u));
    }
    const Dual s = sin((kPi / kJumpDip) * (t - constant(t_absorb)));
    return -j.dip * (s * s);
}

double class_duration(ClassLabel label, const GeneratorConfig& c, const SubjectProfile& subject,
                      const TrialPlan& p) {
    const double pace = p.dur_mult / subject.step_frequency;
    switch (label) {
        case ClassLabel::BeingIdle: return 0.0;
        case ClassLabel::SteppingInPlace: return c.step_duration_s * pace;
        case ClassLabel::SteppingForward:
        case ClassLabel::SteppingBackward: return c.drift_duration_s * pace;
        case ClassLabel::StrafingLeft:
        case ClassLabel::StrafingRight: return c.strafe_duration_s * pace;
        case ClassLabel::SquattingDown:
        case ClassLabel::StandingUp: return c.squat_duration_s * pace;
        case ClassLabel::Jumping:
            return jump_shape(c.jump_height_m * subject.amplitude * p.amp_mult, 0.0).total();
        case ClassLabel::JoggingInPlace: return c.jog_duration_s * pace;
        case ClassLabel::RotatingLeft:
        case ClassLabel::RotatingRight:
        case ClassLabel::TiltingUp:
        case ClassLabel::TiltingDown:
        case ClassLabel::LeaningLeft:
        case ClassLabel::LeaningRight: return c.sweep_duration_s * pace;
        case ClassLabel::Nodding:
            return p.cycles / (c.nod_frequency_hz * subject.step_frequency * p.freq_mult);
        case ClassLabel::Shaking:
            return p.cycles / (c.shake_frequency_hz * subject.step_frequency * p.freq_mult);
        case ClassLabel::Invalid: break;
    }
    throw ConfigError("generate_trial: invalid class");
}

TrialPlan plan_trial(ClassLabel label, const GeneratorConfig& c, const SubjectProfile& subject,
                     std::mt19937_64& rng) {
    TrialPlan p;
    p.freq_mult = uniform(rng, 1.0 - c.trial_jitter, 1.0 + c.trial_jitter);
    p.amp_mult = uniform(rng, 1.0 - c.trial_jitter, 1.0 + c.trial_jitter);
    p.dur_mult = uniform(rng, 1.0 - c.trial_jitter, 1.0 + c.trial_jitter);
    p.cycles = uniform(rng, c.gesture_min_cycles, c.gesture_max_cycles);
    p.duration = class_duration(label, c, subject, p);
    for (std::size_t axis = 0; axis < 6; ++axis) {
        const double scale = axis < 3 ? c.incidental_position_m : c.incidental_angle_rad;
        for (std::size_t k = 0; k < 2; ++k) {
            p.wobble_amp[axis][k] = scale * uniform(rng, 0.3, 1.0);
            p.wobble_freq[axis][k] = uniform(rng, c.incidental_min_hz, c.incidental_max_hz);
            p.wobble_phase[axis][k] = uniform(rng, 0.0, 2.0 * kPi);
        }
    }
    p.tempo_depth = uniform(rng, 0.0, c.tempo_modulation);
    p.tempo_rate = uniform(rng, 0.3, 0.8);
    const double trial_len = static_cast<double>(c.trial_samples) * kSamplePeriod;
    const double latest = trial_len - kTailMargin - p.duration;
    p.onset = std::clamp(uniform(rng, c.onset_min_s, c.onset_max_s), 0.0, std::max(0.0, latest));
    return p;
}

Pose class_pose(ClassLabel label, Dual t, const GeneratorConfig& c, const SubjectProfile& subject,
                const TrialPlan& p) {
    const double amp = subject.amplitude * p.amp_mult;
    const double freq = subject.step_frequency * p.freq_mult;
    const double t0 = p.onset;
    const double t1 = p.onset + p.duration;
    const Dual local = t - constant(t0);
    const Dual u = (1.0 / p.duration) * local;

    Pose pose{constant(0.0), constant(subject.head_height), constant(0.0),
              constant(0.0), constant(0.0),                 constant(0.0)};

    // Cycle phase with a slow tempo wander: f(t) = f0 (1 + depth sin(2 pi r t)).
    auto phase = [&](double frequency) {
        const double w = 2.0 * kPi * p.tempo_rate;
        return (2.0 * kPi * frequency) * local +
               (2.0 * kPi * frequency * p.tempo_depth / w) * (constant(1.0) - cos(w * local));
    };
    auto bob = [&](double amplitude, double frequency) {
        const Dual env = envelope(t, t0, t1, 0.25);
        const Dual ph = phase(frequency);
        pose.y = pose.y + (amplitude * amp) * (env * sin(ph));
        // Lateral weight shift at half the step rate.
        pose.x = pose.x + (0.01 * amp) * (env * sin(0.5 * ph));
    };

    switch (label) {
        case ClassLabel::BeingIdle: break;
        case ClassLabel::SteppingInPlace: bob(c.step_amplitude_m, c.step_frequency_hz * freq); break;
        case ClassLabel::JoggingInPlace: bob(c.jog_amplitude_m, c.jog_frequency_hz * freq); break;
        case ClassLabel::SteppingForward:
        case ClassLabel::SteppingBackward: {
            // Cosine ease peaks at pi/2 * distance / duration.
            const double distance = c.drift_speed_mps * amp * p.duration * 2.0 / kPi;
            const double sign = label == ClassLabel::SteppingForward ? 1.0 : -1.0;
            pose.z = (sign * distance) * ease(u);
            bob(c.step_amplitude_m, c.step_frequency_hz * freq);
            break;
        }
        case ClassLabel::StrafingLeft:
        case ClassLabel::StrafingRight: {
            const double sign = label == ClassLabel::StrafingLeft ? -1.0 : 1.0;
            pose.x = (sign * c.strafe_distance_m * amp) * ease(u);
            const Dual s = sin(kPi * ease(u));
            pose.y = pose.y + (0.5 * c.step_amplitude_m * amp) * (s * s);
            break;
        }
        case ClassLabel::SquattingDown:
            pose.y = pose.y - (c.squat_depth_m * amp) * ease(u);
            break;
        case ClassLabel::StandingUp:
            pose.y = pose.y - (c.squat_depth_m * amp) * (constant(1.0) - ease(u));
            break;
        case ClassLabel::Jumping:
            pose.y = pose.y + jump_offset(local, jump_shape(c.jump_height_m * amp, c.jump_dip_m * amp));
            break;
        case ClassLabel::RotatingLeft: pose.yaw = (c.rotate_angle_rad * amp) * ease(u); break;
        case ClassLabel::RotatingRight: pose.yaw = (-c.rotate_angle_rad * amp) * ease(u); break;
        case ClassLabel::TiltingUp: pose.pitch = (c.tilt_angle_rad * amp) * ease(u); break;
        case ClassLabel::TiltingDown: pose.pitch = (-c.tilt_angle_rad * amp) * ease(u); break;
        case ClassLabel::LeaningLeft:
        case ClassLabel::LeaningRight: {
            const double sign = label == ClassLabel::LeaningLeft ? 1.0 : -1.0;
            pose.roll = (sign * c.lean_angle_rad * amp) * ease(u);
            // Head pivots about the neck: leaning left moves it to -x.
            pose.x = -c.lean_radius_m * sin(pose.roll);
            pose.y = pose.y - c.lean_radius_m * (constant(1.0) - cos(pose.roll));
            break;
        }
        case ClassLabel::Nodding: {
            const double f = c.nod_frequency_hz * freq;
            const Dual env = envelope(t, t0, t1, std::min(0.15, p.duration / 4.0));
            pose.pitch = (-c.nod_amplitude_rad * amp) * (env * sin(phase(f)));
            break;
        }
        case ClassLabel::Shaking: {
            const double f = c.shake_frequency_hz * freq;
            const Dual env = envelope(t, t0, t1, std::min(0.15, p.duration / 4.0));
            pose.yaw = (c.shake_amplitude_rad * amp) * (env * sin(phase(f)));
            break;
        }
        case ClassLabel::Invalid: throw ConfigError("generate_trial: invalid class");
    }

    if (label != ClassLabel::BeingIdle) {
        const Dual env = envelope(t, t0, t1, std::min(0.25, p.duration / 4.0));
        Dual* axes[6] = {&pose.x, &pose.y, &pose.z, &pose.yaw, &pose.pitch, &pose.roll};
        for (std::size_t a = 0; a < 6; ++a) {
            Dual w = constant(0.0);
            for (std::size_t k = 0; k < 2; ++k) {
                w = w + p.wobble_amp[a][k] * sin((2.0 * kPi * p.wobble_freq[a][k]) * local +
                                                 constant(p.wobble_phase[a][k]));
            }
            *axes[a] = *axes[a] + env * w;
        }
    }
    return pose;
}

double truncated_normal(std::mt19937_64& rng, double sigma) {
    if (sigma <= 0.0) return 0.0;
    std::normal_distribution<double> n(0.0, 1.0);
    double z = n(rng);
    while (std::abs(z) > 4.0) z = n(rng);
    return sigma * z;
}

void add_noise(Vec3& v, double sigma, std::mt19937_64& rng) {
    for (double& x : v) x += truncated_normal(rng, sigma);
}

void add_noise(TrackingSample& s, const NoiseSigma& n, double scale, std::mt19937_64& rng) {
    add_noise(s.position, n.position * scale, rng);
    add_noise(s.linear_velocity, n.linear_velocity * scale, rng);
    add_noise(s.linear_acceleration, n.linear_acceleration * scale, rng);
    add_noise(s.euler, n.euler * scale, rng);
    add_noise(s.angular_velocity, n.angular_velocity * scale, rng);
    add_noise(s.angular_acceleration, n.angular_acceleration * scale, rng);
}

Trial build_trial(ClassLabel label, const SubjectProfile& subject, int trial_index, const GeneratorConfig& cfg,
                  std::mt19937_64& rng, bool noisy) {
    if (!is_valid(label)) throw ConfigError("generate_trial: invalid class");
    const TrialPlan plan = plan_trial(label, cfg, subject, rng);
    Trial trial;
    trial.label = label;
    trial.subject_id = subject.id;
    trial.trial_index = trial_index;
    if (label != ClassLabel::BeingIdle) {
        trial.onset = static_cast<std::size_t>(std::ceil(plan.onset * kSampleRateHz - 1e-9));
    }
    trial.samples.resize(cfg.trial_samples);
    for (std::size_t i = 0; i < cfg.trial_samples; ++i) {
        const double ti = static_cast<double>(i) * kSamplePeriod;
        const Pose p = class_pose(label, Dual{ti, 1.0}, cfg, subject, plan);
        TrackingSample& s = trial.samples[i];
        s.t = ti;
        s.position = {p.x.v, p.y.v, p.z.v};
        s.linear_velocity = {p.x.d, p.y.d, p.z.d};
        s.euler = {p.yaw.v, p.pitch.v, p.roll.v};
        s.angular_velocity = {p.yaw.d, p.pitch.d, p.roll.d};
    }
    if (noisy) {
        for (auto& s : trial.samples) add_noise(s, cfg.noise, subject.noise, rng);
    }
    // Accelerations are differenced from the (noisy) velocities, as a headset
    // runtime would report them; their own sigma adds sensor noise on top.
    std::vector<TrackingSample>& smp = trial.samples;
    for (std::size_t i = smp.size(); i-- > 1;) {
        for (std::size_t a = 0; a < 3; ++a) {
            smp[i].linear_acceleration[a] +=
                (smp[i].linear_velocity[a] - smp[i - 1].linear_velocity[a]) * kSampleRateHz;
            smp[i].angular_acceleration[a] +=
                (smp[i].angular_velocity[a] - smp[i - 1].angular_velocity[a]) * kSampleRateHz;
        }
    }
    if (smp.size() > 1) {
        smp[0].linear_acceleration = smp[1].linear_acceleration;
        smp[0].angular_acceleration = smp[1].angular_acceleration;
    }
    return trial;
}

}  // namespace

double GeneratorConfig::max_step_frequency() const {
    return step_frequency_hz * (1.0 + subject_frequency_spread) * (1.0 + trial_jitter);
}

double GeneratorConfig::min_jog_frequency() const {
    return jog_frequency_hz * (1.0 - subject_frequency_spread) * (1.0 - trial_jitter);
}

double GeneratorConfig::min_jump_rise() const {
    return jump_height_m * (1.0 - subject_amplitude_spread) * (1.0 - trial_jitter);
}

double GeneratorConfig::min_squat_depth() const {
    return squat_depth_m * (1.0 - subject_amplitude_spread) * (1.0 - trial_jitter);
}

void GeneratorConfig::validate() const {
    if (trial_samples < kWindowLength) throw ConfigError("generator: trial_samples must be >= 40");
    if (subjects < 1 || trials_per_class < 1) throw ConfigError("generator: subjects and trials must be >= 1");
    if (subject_frequency_spread < 0 || subject_frequency_spread >= 1 || subject_amplitude_spread < 0 ||
        subject_amplitude_spread >= 1 || trial_jitter < 0 || trial_jitter >= 1) {
        throw ConfigError("generator: spreads must lie in [0, 1)");
    }
    if (subject_noise_min < 0 || subject_noise_max < subject_noise_min) {
        throw ConfigError("generator: subject noise range is invalid");
    }
    if (head_height_min_m <= 0 || head_height_max_m < head_height_min_m) {
        throw ConfigError("generator: head height range is invalid");
    }
    if (onset_min_s < 0 || onset_max_s < onset_min_s) throw ConfigError("generator: onset range is invalid");
    if (gesture_min_cycles <= 0 || gesture_max_cycles < gesture_min_cycles) {
        throw ConfigError("generator: gesture cycle range is invalid");
    }
    for (double d : {step_duration_s, jog_duration_s, drift_duration_s, strafe_duration_s, squat_duration_s,
                     sweep_duration_s, step_frequency_hz, jog_frequency_hz, nod_frequency_hz, shake_frequency_hz}) {
        if (!(d > 0)) throw ConfigError("generator: durations and frequencies must be positive");
    }
    if (incidental_position_m < 0 || incidental_angle_rad < 0 || incidental_min_hz <= 0 ||
        incidental_max_hz < incidental_min_hz || tempo_modulation < 0 || tempo_modulation >= 1) {
        throw ConfigError("generator: incidental motion or tempo parameters are invalid");
    }
    if (!(min_jog_frequency() > max_step_frequency())) {
        throw ConfigError("generator: jogging frequency range must lie strictly above the stepping range");
    }
    if (!(min_jump_rise() > 0.10)) throw ConfigError("generator: jump rise must exceed 0.10 m for every subject");
    if (!(min_squat_depth() > 0.10)) throw ConfigError("generator: squat depth must exceed 0.10 m for every subject");
}

#define HMDREC_GENERATOR_FIELDS(X)                                                                      \
    X(step_frequency_hz) X(step_amplitude_m) X(step_duration_s) X(jog_frequency_hz) X(jog_amplitude_m) \
    X(jog_duration_s) X(drift_speed_mps) X(drift_duration_s) X(strafe_distance_m) X(strafe_duration_s) \
    X(squat_depth_m) X(squat_duration_s) X(jump_height_m) X(jump_dip_m) X(rotate_angle_rad)              \
    X(tilt_angle_rad) X(lean_angle_rad) X(lean_radius_m) X(sweep_duration_s) X(nod_amplitude_rad)       \
    X(nod_frequency_hz) X(shake_amplitude_rad) X(shake_frequency_hz) X(gesture_min_cycles)              \
    X(gesture_max_cycles) X(onset_min_s) X(onset_max_s) X(subject_frequency_spread)                     \
    X(subject_amplitude_spread) X(subject_noise_min) X(subject_noise_max) X(head_height_min_m)          \
    X(head_height_max_m) X(trial_jitter) X(incidental_position_m) X(incidental_angle_rad) X(incidental_min_hz)  \
    X(incidental_max_hz) X(tempo_modulation)

#define HMDREC_NOISE_FIELDS(X) \
    X(position) X(linear_velocity) X(linear_acceleration) X(euler) X(angular_velocity) X(angular_acceleration)

GeneratorConfig GeneratorConfig::from_kv(const KeyValueConfig& kv) {
    kv.require_known({
#define X(name) #name,
        HMDREC_GENERATOR_FIELDS(X)
#undef X
#define X(name) "noise_" #name,
            HMDREC_NOISE_FIELDS(X)
#undef X
                "trial_samples",
        "subjects", "trials_per_class", "seed"});
    GeneratorConfig c;
#define X(name) c.name = kv.get_double(#name, c.name);
    HMDREC_GENERATOR_FIELDS(X)
#undef X
#define X(name) c.noise.name = kv.get_double("noise_" #name, c.noise.name);
    HMDREC_NOISE_FIELDS(X)
#undef X
    const long long samples = kv.get_int("trial_samples", static_cast<long long>(c.trial_samples));
    if (samples < 0) throw ConfigError("generator: trial_samples must be non-negative");
    c.trial_samples = static_cast<std::size_t>(samples);
    c.subjects = static_cast<int>(kv.get_int("subjects", c.subjects));
    c.trials_per_class = static_cast<int>(kv.get_int("trials_per_class", c.trials_per_class));
    c.seed = static_cast<std::uint64_t>(kv.get_int("seed", static_cast<long long>(c.seed)));
    c.validate();
    return c;
}

KeyValueConfig GeneratorConfig::to_kv() const {
    KeyValueConfig kv;
#define X(name) kv.set(#name, name);
    HMDREC_GENERATOR_FIELDS(X)
#undef X
#define X(name) kv.set("noise_" #name, noise.name);
    HMDREC_NOISE_FIELDS(X)
#undef X
    kv.set("trial_samples", std::to_string(trial_samples));
    kv.set("subjects", std::to_string(subjects));
    kv.set("trials_per_class", std::to_string(trials_per_class));
    kv.set("seed", std::to_string(seed));
    return kv;
}

#undef HMDREC_GENERATOR_FIELDS
#undef HMDREC_NOISE_FIELDS

SubjectProfile make_subject(int id, const GeneratorConfig& cfg) {
    std::mt19937_64 rng(derive_seed(cfg.seed, {static_cast<std::uint64_t>(id), 0x5b}));
    SubjectProfile s;
    s.id = id;
    s.step_frequency = uniform(rng, 1.0 - cfg.subject_frequency_spread, 1.0 + cfg.subject_frequency_spread);
    s.amplitude = uniform(rng, 1.0 - cfg.subject_amplitude_spread, 1.0 + cfg.subject_amplitude_spread);
    s.noise = uniform(rng, cfg.subject_noise_min, cfg.subject_noise_max);
    s.head_height = uniform(rng, cfg.head_height_min_m, cfg.head_height_max_m);
    return s;
}

Trial generate_trial(ClassLabel label, const SubjectProfile& subject, int trial_index, const GeneratorConfig& cfg,
                     std::mt19937_64& rng) {
    return build_trial(label, subject, trial_index, cfg, rng, true);
}

Trial generate_clean_trial(ClassLabel label, const SubjectProfile& subject, int trial_index,
                           const GeneratorConfig& cfg, std::mt19937_64& rng) {
    return build_trial(label, subject, trial_index, cfg, rng, false);
}

std::vector<Trial> generate_cohort(const GeneratorConfig& cfg) {
    cfg.validate();
    std::vector<Trial> trials;
    trials.reserve(static_cast<std::size_t>(cfg.subjects) * model::kNumClasses *
                   static_cast<std::size_t>(cfg.trials_per_class));
    for (int s = 1; s <= cfg.subjects; ++s) {
        const SubjectProfile subject = make_subject(s, cfg);
        for (ClassLabel label : model::all_classes()) {
            for (int k = 1; k <= cfg.trials_per_class; ++k) {
                std::mt19937_64 rng(derive_seed(cfg.seed, {static_cast<std::uint64_t>(s),
                                                           static_cast<std::uint64_t>(model::index_of(label)),
                                                           static_cast<std::uint64_t>(k)}));
                trials.push_back(generate_trial(label, subject, k, cfg, rng));
            }
        }
    }
    return trials;
}

std::vector<TrackingSample> idle_prefix(const TrackingSample& anchor, std::size_t count, const NoiseSigma& noise,
                                        std::mt19937_64& rng) {
    std::vector<TrackingSample> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        TrackingSample& s = out[i];
        s.t = anchor.t - static_cast<double>(count - i) * kSamplePeriod;
        s.position = anchor.position;
        s.euler = anchor.euler;
        add_noise(s, noise, 1.0, rng);
    }
    return out;
}

}  // namespace hmdrec::data
