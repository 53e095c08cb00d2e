#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hmdrec/model/class_label.hpp"

namespace hmdrec::data {

using model::ClassLabel;

inline constexpr double kSampleRateHz = 80.0;
inline constexpr double kSamplePeriod = 1.0 / kSampleRateHz;
inline constexpr std::size_t kWindowLength = 40;
inline constexpr std::size_t kSampleFieldCount = 19;

using Vec3 = std::array<double, 3>;

/// One headset pose record. Axes: x right, y up, z forward. Euler angles are
/// (yaw, pitch, roll) about the fixed world y, x and z axes; yaw is positive
/// to the left, pitch positive looking up, roll positive leaning left.
struct TrackingSample {
    double t = 0.0;
    Vec3 position{};
    Vec3 linear_velocity{};
    Vec3 linear_acceleration{};
    Vec3 euler{};
    Vec3 angular_velocity{};
    Vec3 angular_acceleration{};

    /// The 19 fields in file order: t, position, linear velocity, linear
    /// acceleration, Euler angles, angular velocity, angular acceleration.
    std::array<double, kSampleFieldCount> fields() const;
    static TrackingSample from_fields(std::span<const double, kSampleFieldCount> f);
    bool all_finite() const;
};

/// One 4 s collection trial of a single class.
struct Trial {
    ClassLabel label = ClassLabel::BeingIdle;
    int subject_id = 0;
    int trial_index = 1;  // 1-based collection order
    std::optional<std::size_t> onset;  // first sample where the motion primitive is active
    std::vector<TrackingSample> samples;
};

/// Input channel groups the networks and the HMM baseline can select.
enum class ChannelGroup { LinearVelocity, LinearAcceleration, AngularVelocity, AngularAcceleration };

std::string_view name_of(ChannelGroup g);
std::optional<ChannelGroup> parse_channel_group(std::string_view name);
const Vec3& channel_values(const TrackingSample& s, ChannelGroup g);

/// A 40-sample slice of a trial. Windows share the trial's storage.
class Window {
public:
    Window(std::shared_ptr<const Trial> trial, std::size_t start);

    ClassLabel label() const { return trial_->label; }
    std::size_t start() const { return start_; }
    const Trial& trial() const { return *trial_; }
    std::span<const TrackingSample> samples() const { return {trial_->samples.data() + start_, kWindowLength}; }
    const TrackingSample& operator[](std::size_t j) const { return trial_->samples[start_ + j]; }

    /// [3 x 40] linear velocity.
    std::vector<double> body_view() const;
    /// [6 x 40] angular velocity then angular acceleration.
    std::vector<double> head_view() const;
    std::array<double, kWindowLength> vertical_positions() const;

private:
    std::shared_ptr<const Trial> trial_;
    std::size_t start_;
};

/// Channel-major [3*groups.size() x samples.size()] matrix of the selected groups.
std::vector<double> gather_channels(std::span<const TrackingSample> samples, std::span<const ChannelGroup> groups);

}  // namespace hmdrec::data
