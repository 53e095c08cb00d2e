#include "hmdrec/harness/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace hmdrec::harness {

namespace {

std::size_t idx(ClassLabel l) { return static_cast<std::size_t>(model::index_of(l)); }

std::string optional_fixed(const std::optional<double>& v) { return v ? fixed(*v) : std::string("nan"); }

}  // namespace

std::string fixed(double v, int digits) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string config_digest(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<ClassMetrics> class_metrics(const ConfusionMatrix& counts, std::span<const ClassLabel> classes) {
    std::vector<ClassMetrics> out;
    for (ClassLabel l : classes) {
        ClassMetrics m;
        m.label = l;
        const std::size_t c = idx(l);
        for (std::size_t k = 0; k < model::kNumClasses; ++k) {
            m.support += counts[k][c];
            m.predicted += counts[c][k];
        }
        m.correct = counts[c][c];
        if (m.predicted > 0) m.precision = static_cast<double>(m.correct) / static_cast<double>(m.predicted);
        if (m.support > 0) m.recall = static_cast<double>(m.correct) / static_cast<double>(m.support);
        out.push_back(m);
    }
    return out;
}

Proportions normalize_columns(const ConfusionMatrix& counts, std::vector<ClassLabel>* empty_columns) {
    Proportions p{};
    for (std::size_t t = 0; t < model::kNumClasses; ++t) {
        std::uint64_t total = 0;
        for (std::size_t r = 0; r < model::kNumClasses; ++r) total += counts[r][t];
        if (total == 0) {
            if (empty_columns) empty_columns->push_back(model::label_at(t));
            continue;
        }
        for (std::size_t r = 0; r < model::kNumClasses; ++r) {
            p[r][t] = static_cast<double>(counts[r][t]) / static_cast<double>(total);
        }
    }
    return p;
}

RenderedConfusion render_confusion(const ConfusionMatrix& counts, std::span<const ClassLabel> classes) {
    RenderedConfusion out;
    std::vector<ClassLabel> empty;
    const Proportions p = normalize_columns(counts, &empty);
    for (ClassLabel l : empty) {
        for (ClassLabel shown : classes) {
            if (shown == l) out.warnings.push_back("no windows of true class " + std::string(model::name_of(l)));
        }
    }
    std::ostringstream os;
    os << "confusion (rows predicted, columns true; proportion of the true class [count])\n";
    os << "predicted\\true";
    for (ClassLabel t : classes) os << '\t' << model::name_of(t);
    os << '\n';
    for (ClassLabel r : classes) {
        os << model::name_of(r);
        for (ClassLabel t : classes) {
            os << '\t' << fixed(p[idx(r)][idx(t)], 4) << " [" << counts[idx(r)][idx(t)] << ']';
        }
        os << '\n';
    }
    out.text = os.str();
    return out;
}

RenderedConfusion render_confusion(const ConfusionMatrix& counts) {
    const auto all = model::all_classes();
    return render_confusion(counts, all);
}

std::string render_confusion_csv(const ConfusionMatrix& counts, std::span<const ClassLabel> classes) {
    const Proportions p = normalize_columns(counts);
    std::ostringstream os;
    os << "predicted,true,count,proportion\n";
    for (ClassLabel r : classes) {
        for (ClassLabel t : classes) {
            os << model::name_of(r) << ',' << model::name_of(t) << ',' << counts[idx(r)][idx(t)] << ','
               << fixed(p[idx(r)][idx(t)], 9) << '\n';
        }
    }
    return os.str();
}

std::string render_latency(const recognizer::LatencyReport& report) {
    std::ostringstream os;
    os << "latency (s): class\ttrials\thits\tmisses\tpremature\tmean\tstd\n";
    for (const auto& c : report.per_class) {
        os << model::name_of(c.label) << '\t' << c.trials << '\t' << c.latencies.size() << '\t' << c.misses << '\t'
           << c.premature << '\t' << fixed(c.mean, 4) << '\t' << fixed(c.stddev, 4) << '\n';
    }
    const auto body = recognizer::ungated_body_actions();
    const auto head = recognizer::ungated_head_gestures();
    const auto b = report.pooled(body);
    const auto h = report.pooled(head);
    os << "ungated body actions\t" << b.hits << " hits\t" << fixed(b.mean, 4) << " +- " << fixed(b.stddev, 4) << '\n';
    os << "ungated head gestures\t" << h.hits << " hits\t" << fixed(h.mean, 4) << " +- " << fixed(h.stddev, 4) << '\n';
    return os.str();
}

std::string render_latency_csv(const recognizer::LatencyReport& report) {
    std::ostringstream os;
    os << "class,trials,hits,misses,premature,mean_s,std_s\n";
    for (const auto& c : report.per_class) {
        os << model::name_of(c.label) << ',' << c.trials << ',' << c.latencies.size() << ',' << c.misses << ','
           << c.premature << ',' << fixed(c.mean, 9) << ',' << fixed(c.stddev, 9) << '\n';
    }
    return os.str();
}

std::vector<std::string> RunReport::warnings() const {
    if (!evaluation) return {};
    return render_confusion(evaluation->confusion, classes).warnings;
}

std::string RunReport::to_text() const {
    std::ostringstream os;
    os << "command\t" << command << '\n';
    os << "seed\t" << seed << '\n';
    os << "config_digest\t" << config_digest << '\n';
    for (const auto& [k, v] : metadata) os << k << '\t' << v << '\n';
    if (!history.empty()) {
        os << "epoch\tmean_loss\ttest_accuracy\n";
        for (const auto& e : history) {
            os << e.epoch << '\t' << fixed(e.mean_loss, 9) << '\t' << fixed(e.test_accuracy, 6) << '\n';
        }
    }
    if (evaluation) {
        os << "accuracy\t" << fixed(evaluation->accuracy, 6) << " (" << evaluation->total << " windows)\n";
        os << "class\tsupport\tprecision\trecall\n";
        for (const auto& m : class_metrics(evaluation->confusion, classes)) {
            os << model::name_of(m.label) << '\t' << m.support << '\t' << optional_fixed(m.precision) << '\t'
               << optional_fixed(m.recall) << '\n';
        }
        const RenderedConfusion rc = render_confusion(evaluation->confusion, classes);
        os << rc.text;
        for (const auto& w : rc.warnings) os << "warning\t" << w << '\n';
    }
    if (latency) os << render_latency(*latency);
    return os.str();
}

std::string RunReport::to_csv() const {
    std::ostringstream os;
    os << "# command=" << command << " seed=" << seed << " config_digest=" << config_digest << '\n';
    if (evaluation) {
        os << render_confusion_csv(evaluation->confusion, classes);
        os << "class,support,predicted,correct,precision,recall\n";
        for (const auto& m : class_metrics(evaluation->confusion, classes)) {
            os << model::name_of(m.label) << ',' << m.support << ',' << m.predicted << ',' << m.correct << ','
               << optional_fixed(m.precision) << ',' << optional_fixed(m.recall) << '\n';
        }
    }
    if (latency) os << render_latency_csv(*latency);
    return os.str();
}

}  // namespace hmdrec::harness
