#include "hmdrec/harness/compare.hpp"

#include <algorithm>
#include <sstream>

#include "hmdrec/error.hpp"
#include "hmdrec/harness/report.hpp"
#include "hmdrec/model/training.hpp"
#include "hmdrec/seed.hpp"

namespace hmdrec::harness {

using data::ChannelGroup;

const ComparisonRow* ComparisonTable::find(std::string_view algorithm, std::string_view task,
                                           std::string_view streams) const {
    for (const auto& r : rows) {
        if (r.algorithm == algorithm && r.task == task && r.streams == streams) return &r;
    }
    return nullptr;
}

void ComparisonTable::validate() const {
    for (const auto& r : rows) {
        if (!(r.accuracy >= 0.0 && r.accuracy <= 1.0)) {
            throw NumericError("comparison row " + r.algorithm + "/" + r.task + "/" + r.streams +
                               " has accuracy outside [0, 1]");
        }
    }
}

std::string ComparisonTable::to_text() const {
    std::ostringstream os;
    os << "algorithm\ttask\tstreams\taccuracy\tdetail\n";
    for (const auto& r : rows) {
        os << r.algorithm << '\t' << r.task << '\t' << r.streams << '\t' << fixed(r.accuracy * 100.0, 2) << "%\t"
           << r.detail << '\n';
    }
    return os.str();
}

std::string ComparisonTable::to_csv() const {
    std::ostringstream os;
    os << "algorithm,task,streams,accuracy,detail\n";
    for (const auto& r : rows) {
        os << r.algorithm << ',' << r.task << ',' << r.streams << ',' << fixed(r.accuracy, 6) << ',' << r.detail
           << '\n';
    }
    return os.str();
}

std::string streams_name(std::span<const ChannelGroup> groups) {
    std::string s;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        if (i) s += '+';
        s += data::name_of(groups[i]);
    }
    return s;
}

std::vector<StreamCell> comparison_cells() {
    const auto body = model::body_actions();
    const auto head = model::head_gestures();
    return {
        {"body", {ChannelGroup::LinearVelocity}, body},
        {"body", {ChannelGroup::LinearAcceleration}, body},
        {"body", {ChannelGroup::LinearVelocity, ChannelGroup::LinearAcceleration}, body},
        {"head", {ChannelGroup::AngularVelocity}, head},
        {"head", {ChannelGroup::AngularAcceleration}, head},
        {"head", {ChannelGroup::AngularVelocity, ChannelGroup::AngularAcceleration}, head},
    };
}

std::vector<data::Window> every_nth(std::span<const data::Window> windows, std::size_t stride) {
    if (stride == 0) throw ConfigError("train stride must be >= 1");
    std::vector<data::Window> out;
    out.reserve(windows.size() / stride + 1);
    for (std::size_t i = 0; i < windows.size(); i += stride) out.push_back(windows[i]);
    return out;
}

std::size_t epochs_for(std::size_t n, const CompareConfig& config) {
    if (config.budget_steps == 0) return config.epochs;
    const std::size_t steps_per_epoch = std::max<std::size_t>(1, (n + config.batch_size - 1) / config.batch_size);
    return std::max<std::size_t>(1, (config.budget_steps + steps_per_epoch - 1) / steps_per_epoch);
}

double train_and_score(const model::NetworkConfig& network, std::span<const data::Window> train,
                       std::span<const data::Window> test, const CompareConfig& config, std::uint64_t seed) {
    model::TrainConfig tc;
    tc.batch_size = config.batch_size;
    tc.learning_rate = config.learning_rate;
    tc.epochs = epochs_for(train.size(), config);
    tc.seed = derive_seed(seed, {1});
    model::FitResult fit = model::fit(model::init_weights(network, derive_seed(seed, {0})), train, {}, tc);
    return model::evaluate(fit.weights, test).accuracy;
}

HmmCellResult run_hmm_cell(std::span<const data::Window> train, std::span<const data::Window> test,
                           const hmm::HmmClassifierConfig& base, const CompareConfig& config) {
    HmmCellResult r;
    if (config.select_on == SelectOn::Test) {
        r.sweep = hmm::sweep(train, test, base, config.symbol_grid, config.state_grid);
        r.test_accuracy = r.sweep.best.accuracy;
        return r;
    }
    std::vector<data::Window> fit_part, validation;
    for (const auto& w : train) (w.trial().trial_index == 3 ? validation : fit_part).push_back(w);
    if (fit_part.empty() || validation.empty()) {
        throw ConfigError("validation selection needs training windows from trials 1-2 and 3");
    }
    r.sweep = hmm::sweep(fit_part, validation, base, config.symbol_grid, config.state_grid);
    hmm::HmmClassifierConfig best = base;
    best.n_symbols = r.sweep.best.n_symbols;
    best.n_states = r.sweep.best.n_states;
    r.test_accuracy = hmm::hmm_accuracy(hmm::train_hmm_classifier(train, best), test);
    return r;
}

ComparisonTable run_comparison(const data::DatasetSplit& split, const CompareConfig& config,
                               const ProgressFn& progress) {
    if (split.train.empty() || split.test.empty()) throw ConfigError("compare: empty train or test split");
    auto say = [&](const std::string& s) {
        if (progress) progress(s);
    };
    const std::vector<data::Window> net_train = every_nth(split.train, config.train_stride);
    const std::string budget_note = "stride=" + std::to_string(config.train_stride);

    ComparisonTable table;
    const auto cells = comparison_cells();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const StreamCell& cell = cells[i];
        const std::string streams = streams_name(cell.groups);
        const auto test = model::filter_classes(split.test, cell.classes);
        if (config.include_cnn) {
            say("cnn " + cell.task + " " + streams);
            const auto train = model::filter_classes(net_train, cell.classes);
            const double acc = train_and_score(model::NetworkConfig::single(cell.groups, cell.classes), train, test,
                                               config, derive_seed(config.seed, {0xc0, i}));
            table.rows.push_back({"1D-CNN", cell.task, streams, acc,
                                  budget_note + " epochs=" + std::to_string(epochs_for(train.size(), config))});
        }
        if (config.include_hmm) {
            say("hmm " + cell.task + " " + streams);
            hmm::HmmClassifierConfig hc = config.hmm;
            hc.groups = cell.groups;
            hc.seed = derive_seed(config.seed, {0x4d, i});
            const auto train = model::filter_classes(split.train, cell.classes);
            const HmmCellResult r = run_hmm_cell(train, test, hc, config);
            table.rows.push_back({"HMM", cell.task, streams, r.test_accuracy,
                                  "K=" + std::to_string(r.sweep.best.n_symbols) +
                                      " N=" + std::to_string(r.sweep.best.n_states)});
        }
    }
    if (config.include_fusion) {
        const std::uint64_t fusion_seed = derive_seed(config.seed, {0xf0});
        const auto two = model::NetworkConfig::two_stream();
        const auto one = model::NetworkConfig::single_stream();
        auto note = budget_note + " epochs=" + std::to_string(epochs_for(net_train.size(), config));
        say("two-stream cnn");
        table.rows.push_back({"two-stream CNN", "all",
                              streams_name(two.streams[0].groups) + " | " + streams_name(two.streams[1].groups),
                              train_and_score(two, net_train, split.test, config, derive_seed(fusion_seed, {2})),
                              note});
        say("single-stream cnn");
        table.rows.push_back({"single-stream CNN", "all", streams_name(one.streams[0].groups),
                              train_and_score(one, net_train, split.test, config, derive_seed(fusion_seed, {1})),
                              note});
    }
    table.validate();
    return table;
}

}  // namespace hmdrec::harness
