#include "hmdrec/model/class_label.hpp"

#include "hmdrec/error.hpp"

namespace hmdrec::model {

namespace {

constexpr std::array<std::string_view, kNumClasses> kNames = {
    "BeingIdle",    "SteppingInPlace", "SteppingForward", "SteppingBackward", "StrafingLeft", "StrafingRight",
    "SquattingDown", "StandingUp",     "Jumping",         "JoggingInPlace",   "RotatingLeft", "RotatingRight",
    "TiltingUp",    "TiltingDown",     "LeaningLeft",     "LeaningRight",     "Nodding",      "Shaking",
};

std::vector<ClassLabel> range(std::size_t first, std::size_t last) {
    std::vector<ClassLabel> out;
    for (std::size_t i = first; i < last; ++i) out.push_back(label_at(i));
    return out;
}

}  // namespace

std::string_view name_of(ClassLabel c) {
    if (c == ClassLabel::Invalid) return "Invalid";
    if (!is_valid(c)) throw ConfigError("name_of: class index out of range");
    return kNames[static_cast<std::size_t>(index_of(c))];
}

std::optional<ClassLabel> parse_label(std::string_view name) {
    for (std::size_t i = 0; i < kNames.size(); ++i) {
        if (kNames[i] == name) return label_at(i);
    }
    if (name == "Invalid") return ClassLabel::Invalid;
    return std::nullopt;
}

std::vector<ClassLabel> all_classes() { return range(0, kNumClasses); }
std::vector<ClassLabel> body_actions() { return range(0, kNumBodyActions); }
std::vector<ClassLabel> head_gestures() { return range(kNumBodyActions, kNumClasses); }

std::size_t argmax(std::span<const double> scores) {
    if (scores.empty()) throw ConfigError("argmax: empty score vector");
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] > scores[best]) best = i;
    }
    return best;
}

}  // namespace hmdrec::model
