#include "hmdrec/data/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hmdrec/error.hpp"

namespace hmdrec::data {

std::array<double, kSampleFieldCount> TrackingSample::fields() const {
    std::array<double, kSampleFieldCount> f{};
    f[0] = t;
    std::size_t i = 1;
    for (const Vec3* v : {&position, &linear_velocity, &linear_acceleration, &euler, &angular_velocity,
                          &angular_acceleration}) {
        for (double x : *v) f[i++] = x;
    }
    return f;
}

TrackingSample TrackingSample::from_fields(std::span<const double, kSampleFieldCount> f) {
    TrackingSample s;
    s.t = f[0];
    std::size_t i = 1;
    for (Vec3* v : {&s.position, &s.linear_velocity, &s.linear_acceleration, &s.euler, &s.angular_velocity,
                    &s.angular_acceleration}) {
        for (double& x : *v) x = f[i++];
    }
    return s;
}

bool TrackingSample::all_finite() const {
    const auto f = fields();
    return std::all_of(f.begin(), f.end(), [](double v) { return std::isfinite(v); });
}

std::string_view name_of(ChannelGroup g) {
    switch (g) {
        case ChannelGroup::LinearVelocity: return "LinearVel";
        case ChannelGroup::LinearAcceleration: return "LinearAcc";
        case ChannelGroup::AngularVelocity: return "AngVel";
        case ChannelGroup::AngularAcceleration: return "AngAcc";
    }
    return "?";
}

std::optional<ChannelGroup> parse_channel_group(std::string_view name) {
    for (ChannelGroup g : {ChannelGroup::LinearVelocity, ChannelGroup::LinearAcceleration,
                           ChannelGroup::AngularVelocity, ChannelGroup::AngularAcceleration}) {
        if (name_of(g) == name) return g;
    }
    return std::nullopt;
}

const Vec3& channel_values(const TrackingSample& s, ChannelGroup g) {
    switch (g) {
        case ChannelGroup::LinearVelocity: return s.linear_velocity;
        case ChannelGroup::LinearAcceleration: return s.linear_acceleration;
        case ChannelGroup::AngularVelocity: return s.angular_velocity;
        case ChannelGroup::AngularAcceleration: return s.angular_acceleration;
    }
    throw ConfigError("unknown channel group");
}

Window::Window(std::shared_ptr<const Trial> trial, std::size_t start) : trial_(std::move(trial)), start_(start) {
    if (!trial_) throw ConfigError("Window: null trial");
    if (start_ + kWindowLength > trial_->samples.size()) {
        throw ConfigError("Window: start " + std::to_string(start_) + " leaves fewer than 40 samples");
    }
}

std::vector<double> Window::body_view() const {
    constexpr std::array groups{ChannelGroup::LinearVelocity};
    return gather_channels(samples(), groups);
}

std::vector<double> Window::head_view() const {
    constexpr std::array groups{ChannelGroup::AngularVelocity, ChannelGroup::AngularAcceleration};
    return gather_channels(samples(), groups);
}

std::array<double, kWindowLength> Window::vertical_positions() const {
    std::array<double, kWindowLength> y{};
    for (std::size_t j = 0; j < kWindowLength; ++j) y[j] = (*this)[j].position[1];
    return y;
}

std::vector<double> gather_channels(std::span<const TrackingSample> samples, std::span<const ChannelGroup> groups) {
    const std::size_t len = samples.size();
    std::vector<double> out(groups.size() * 3 * len);
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (std::size_t i = 0; i < len; ++i) {
            const Vec3& v = channel_values(samples[i], groups[g]);
            for (std::size_t a = 0; a < 3; ++a) out[(g * 3 + a) * len + i] = v[a];
        }
    }
    return out;
}

}  // namespace hmdrec::data
