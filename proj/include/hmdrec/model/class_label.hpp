#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace hmdrec::model {

/// The 18 recognized classes; the first ten are in-place body actions, the
/// remaining eight head gestures. Indices are stable across every file format.
enum class ClassLabel : int {
    Invalid = -1,
    BeingIdle = 0,
    SteppingInPlace,
    SteppingForward,
    SteppingBackward,
    StrafingLeft,
    StrafingRight,
    SquattingDown,
    StandingUp,
    Jumping,
    JoggingInPlace,
    RotatingLeft,
    RotatingRight,
    TiltingUp,
    TiltingDown,
    LeaningLeft,
    LeaningRight,
    Nodding,
    Shaking,
};

inline constexpr std::size_t kNumClasses = 18;
inline constexpr std::size_t kNumBodyActions = 10;

constexpr int index_of(ClassLabel c) { return static_cast<int>(c); }
constexpr ClassLabel label_at(std::size_t i) { return static_cast<ClassLabel>(static_cast<int>(i)); }
constexpr bool is_valid(ClassLabel c) { return index_of(c) >= 0 && index_of(c) < static_cast<int>(kNumClasses); }
constexpr bool is_body_action(ClassLabel c) { return is_valid(c) && index_of(c) < static_cast<int>(kNumBodyActions); }
constexpr bool is_head_gesture(ClassLabel c) { return is_valid(c) && !is_body_action(c); }

std::string_view name_of(ClassLabel c);
std::optional<ClassLabel> parse_label(std::string_view name);

std::vector<ClassLabel> all_classes();
std::vector<ClassLabel> body_actions();
std::vector<ClassLabel> head_gestures();

/// Index of the largest score; ties go to the lowest index.
std::size_t argmax(std::span<const double> scores);

}  // namespace hmdrec::model
