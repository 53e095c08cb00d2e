#pragma once

// Run reports: accuracy, confusion matrices normalized over the true class
// (columns), per-class precision / recall and optional latency tables, as
// text and CSV. Reports carry no wall-clock data so reruns are byte-identical.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hmdrec/model/training.hpp"
#include "hmdrec/recognizer/latency.hpp"

namespace hmdrec::harness {

using model::ClassLabel;
using model::ConfusionMatrix;

/// 64-bit FNV-1a of `text`, as 16 lowercase hex digits.
std::string config_digest(std::string_view text);

struct ClassMetrics {
    ClassLabel label = ClassLabel::Invalid;
    std::uint64_t support = 0;    // windows of this true class
    std::uint64_t predicted = 0;  // windows predicted as this class
    std::uint64_t correct = 0;
    std::optional<double> precision;  // undefined when nothing was predicted
    std::optional<double> recall;     // undefined without support
};

std::vector<ClassMetrics> class_metrics(const ConfusionMatrix& counts, std::span<const ClassLabel> classes);

using Proportions = std::array<std::array<double, model::kNumClasses>, model::kNumClasses>;

/// Column-normalized copy ([pred][true]); all-zero columns stay zero and
/// their classes are appended to `empty_columns`.
Proportions normalize_columns(const ConfusionMatrix& counts, std::vector<ClassLabel>* empty_columns = nullptr);

struct RenderedConfusion {
    std::string text;
    std::vector<std::string> warnings;
};

/// Matrix over `classes` (rows predicted, columns true) with the proportion
/// and raw count in every cell.
RenderedConfusion render_confusion(const ConfusionMatrix& counts, std::span<const ClassLabel> classes);
RenderedConfusion render_confusion(const ConfusionMatrix& counts);
/// Long format: predicted,true,count,proportion.
std::string render_confusion_csv(const ConfusionMatrix& counts, std::span<const ClassLabel> classes);

std::string render_latency(const recognizer::LatencyReport& report);
std::string render_latency_csv(const recognizer::LatencyReport& report);

struct RunReport {
    std::string command;
    std::uint64_t seed = 0;
    std::string config_digest;
    std::vector<std::pair<std::string, std::string>> metadata;  // rendered in order
    std::optional<model::Evaluation> evaluation;
    std::vector<ClassLabel> classes = model::all_classes();
    std::vector<model::EpochRecord> history;
    std::optional<recognizer::LatencyReport> latency;

    std::string to_text() const;
    std::string to_csv() const;
    std::vector<std::string> warnings() const;
};

/// Fixed-precision rendering used by every report.
std::string fixed(double v, int digits = 6);

}  // namespace hmdrec::harness
