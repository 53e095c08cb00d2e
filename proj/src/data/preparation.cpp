#include "hmdrec/data/preparation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "hmdrec/error.hpp"

namespace hmdrec::data {

namespace {

double norm(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

bool is_still(const TrackingSample& s, const TrimOptions& o) {
    return norm(s.linear_velocity) < o.linear_speed_threshold && norm(s.angular_velocity) < o.angular_speed_threshold;
}

}  // namespace

std::string describe(const Trial& trial) {
    return "subject " + std::to_string(trial.subject_id) + "/" + std::string(model::name_of(trial.label)) +
           "/trial " + std::to_string(trial.trial_index);
}

std::optional<Trial> trim_idle(const Trial& trial, const TrimOptions& options) {
    if (trial.label == ClassLabel::BeingIdle) {
        if (trial.samples.size() < kWindowLength) return std::nullopt;
        return trial;
    }
    const auto& s = trial.samples;
    std::size_t first = 0;
    while (first < s.size() && is_still(s[first], options)) ++first;
    if (first == s.size()) return std::nullopt;
    std::size_t last = s.size() - 1;
    while (last > first && is_still(s[last], options)) --last;
    if (last - first + 1 < kWindowLength) return std::nullopt;

    Trial out;
    out.label = trial.label;
    out.subject_id = trial.subject_id;
    out.trial_index = trial.trial_index;
    if (trial.onset) out.onset = *trial.onset > first ? *trial.onset - first : 0;
    out.samples.assign(s.begin() + static_cast<std::ptrdiff_t>(first), s.begin() + static_cast<std::ptrdiff_t>(last + 1));
    return out;
}

std::vector<Window> windowize(std::shared_ptr<const Trial> trial) {
    if (!trial) throw ConfigError("windowize: null trial");
    const std::size_t n = trial->samples.size();
    if (n < kWindowLength) {
        throw ConfigError("windowize: " + describe(*trial) + " has " + std::to_string(n) + " samples, need 40");
    }
    std::vector<Window> out;
    out.reserve(n - kWindowLength + 1);
    for (std::size_t i = 0; i + kWindowLength <= n; ++i) out.emplace_back(trial, i);
    return out;
}

DatasetSplit split_dataset(std::span<const Trial> trials, const TrimOptions& options) {
    if (trials.empty()) throw ConfigError("split_dataset: no trials");
    std::map<std::pair<int, int>, std::vector<const Trial*>> groups;
    for (const Trial& t : trials) {
        if (!is_valid(t.label)) throw ConfigError("split_dataset: trial with invalid class");
        groups[{t.subject_id, model::index_of(t.label)}].push_back(&t);
    }
    for (auto& [key, members] : groups) {
        std::sort(members.begin(), members.end(),
                  [](const Trial* a, const Trial* b) { return a->trial_index < b->trial_index; });
        bool ok = members.size() == 4;
        for (std::size_t i = 0; ok && i < members.size(); ++i) ok = members[i]->trial_index == static_cast<int>(i + 1);
        if (!ok) {
            throw ConfigError("split_dataset: subject " + std::to_string(key.first) + " class " +
                              std::string(model::name_of(model::label_at(static_cast<std::size_t>(key.second)))) +
                              " has " + std::to_string(members.size()) + " trials, expected trials 1-4");
        }
    }

    DatasetSplit split;
    for (const auto& [key, members] : groups) {
        for (const Trial* t : members) {
            auto trimmed = trim_idle(*t, options);
            if (!trimmed) {
                split.rejected.push_back(describe(*t));
                continue;
            }
            auto shared = std::make_shared<const Trial>(std::move(*trimmed));
            auto windows = windowize(shared);
            const bool is_test = t->trial_index == 4;
            auto& dest = is_test ? split.test : split.train;
            dest.insert(dest.end(), windows.begin(), windows.end());
            (is_test ? split.test_trials : split.train_trials).push_back(std::move(shared));
        }
    }
    return split;
}

}  // namespace hmdrec::data
