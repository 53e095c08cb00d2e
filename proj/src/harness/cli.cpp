#include "hmdrec/harness/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "hmdrec/data/dataset_io.hpp"
#include "hmdrec/data/generator.hpp"
#include "hmdrec/data/preparation.hpp"
#include "hmdrec/error.hpp"
#include "hmdrec/harness/compare.hpp"
#include "hmdrec/harness/report.hpp"
#include "hmdrec/model/training.hpp"
#include "hmdrec/model/weights_io.hpp"
#include "hmdrec/recognizer/calibration.hpp"
#include "hmdrec/recognizer/latency.hpp"
#include "hmdrec/recognizer/recognizer.hpp"
#include "hmdrec/seed.hpp"

namespace hmdrec::harness {

namespace {

using data::ChannelGroup;
using model::ClassLabel;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << content;
    if (!out) throw IoError("failed writing " + path);
}

/// Effective options of one run; input files contribute their content digest.
class Digest {
public:
    explicit Digest(std::string command) { kv_.set("command", std::move(command)); }
    template <typename T>
    void add(const std::string& key, const T& value) {
        std::ostringstream os;
        os << value;
        kv_.set(key, os.str());
    }
    void add(const std::string& key, double value) { kv_.set(key, value); }
    void add_file(const std::string& key, const std::string& path) { kv_.set(key, config_digest(read_file(path))); }
    std::string value() const { return config_digest(kv_.to_string()); }

private:
    data::KeyValueConfig kv_;
};

class Timer {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::vector<ChannelGroup> parse_groups(const std::vector<std::string>& names) {
    std::vector<ChannelGroup> out;
    for (const auto& n : names) {
        const auto g = data::parse_channel_group(n);
        if (!g) throw ConfigError("unknown stream '" + n + "' (expected LinearVel, LinearAcc, AngVel or AngAcc)");
        out.push_back(*g);
    }
    return out;
}

std::vector<ClassLabel> task_classes(const std::string& task) {
    if (task == "body") return model::body_actions();
    if (task == "head") return model::head_gestures();
    return model::all_classes();
}

struct ResolutionFlags {
    std::string config_path;
    std::optional<double> tau_shake, tau_nod, tau_jog;
    std::optional<std::string> gate_mode;
    std::optional<std::size_t> monitor_len;

    void attach(CLI::App* app) {
        app->add_option("--config", config_path, "recognizer key-value config (tau_shake, tau_nod, ...)");
        app->add_option("--tau-shake", tau_shake, "shaking gate");
        app->add_option("--tau-nod", tau_nod, "nodding gate");
        app->add_option("--tau-jog", tau_jog, "jogging gate");
        app->add_option("--gate-mode", gate_mode, "score or margin")->check(CLI::IsMember({"score", "margin"}));
        app->add_option("--monitor-len", monitor_len, "consecutive agreeing frames before an emission");
    }

    recognizer::ResolutionConfig resolve(Digest& digest) const {
        recognizer::ResolutionConfig c;
        if (!config_path.empty()) c = recognizer::ResolutionConfig::from_kv(data::KeyValueConfig::load(config_path));
        if (tau_shake) c.tau_shake = *tau_shake;
        if (tau_nod) c.tau_nod = *tau_nod;
        if (tau_jog) c.tau_jog = *tau_jog;
        if (gate_mode) c.gate_mode = recognizer::parse_gate_mode(*gate_mode);
        if (monitor_len) c.monitor_len = *monitor_len;
        c.validate();
        const auto kv = c.to_kv();
        for (const auto& [k, v] : kv.entries()) digest.add("recognizer." + k, v);
        return c;
    }
};

void emit_report(const RunReport& report, const std::string& text_path, const std::string& csv_path,
                 std::ostream& out) {
    const std::string text = report.to_text();
    out << text;
    if (!text_path.empty()) write_file(text_path, text);
    if (!csv_path.empty()) write_file(csv_path, report.to_csv());
}

// ---- generate ---------------------------------------------------------------

struct GenerateArgs {
    std::string out_path;
    std::string config_path;
    std::string write_config;
    std::optional<int> subjects;
    std::optional<int> trials;
    std::uint64_t seed = 7;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out, std::ostream& err) {
    data::GeneratorConfig cfg;
    if (!a.config_path.empty()) cfg = data::GeneratorConfig::from_kv(data::KeyValueConfig::load(a.config_path));
    if (a.subjects) cfg.subjects = *a.subjects;
    if (a.trials) cfg.trials_per_class = *a.trials;
    cfg.seed = a.seed;
    cfg.validate();
    Timer t;
    const auto trials = data::generate_cohort(cfg);
    std::ostringstream os;
    data::write_dataset(trials, os);
    write_file(a.out_path, os.str());
    if (!a.write_config.empty()) cfg.to_kv().save(a.write_config);
    std::size_t samples = 0;
    for (const auto& tr : trials) samples += tr.samples.size();
    out << "trials\t" << trials.size() << "\nsamples\t" << samples << "\nconfig_digest\t"
        << config_digest(cfg.to_kv().to_string()) << "\ndataset_digest\t" << config_digest(os.str()) << '\n';
    err << "generated in " << fixed(t.seconds(), 2) << " s\n";
    return 0;
}

// ---- train ------------------------------------------------------------------

struct TrainArgs {
    std::string data_path;
    std::string out_path;
    std::string arch = "two-stream";
    std::size_t epochs = 60;
    std::size_t batch = 512;
    double lr = 1e-4;
    std::optional<double> target;
    std::size_t stride = 1;
    std::uint64_t seed = 1;
    std::string report_path;
};

int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
    Digest digest("train");
    digest.add_file("data", a.data_path);
    digest.add("arch", a.arch);
    digest.add("epochs", a.epochs);
    digest.add("batch", a.batch);
    digest.add("lr", a.lr);
    digest.add("target_accuracy", a.target ? data::format_double(*a.target) : std::string("none"));
    digest.add("train_stride", a.stride);
    digest.add("seed", a.seed);

    model::TrainConfig tc;
    tc.batch_size = a.batch;
    tc.learning_rate = a.lr;
    tc.epochs = a.epochs;
    tc.seed = a.seed;
    tc.target_accuracy = a.target;
    tc.validate();
    if (a.stride == 0) throw ConfigError("train stride must be >= 1");

    const auto trials = data::read_dataset(std::filesystem::path(a.data_path));
    const auto split = data::split_dataset(trials);
    const auto train = every_nth(split.train, a.stride);
    const model::NetworkConfig net =
        a.arch == "two-stream" ? model::NetworkConfig::two_stream() : model::NetworkConfig::single_stream();

    Timer t;
    model::FitResult fit =
        model::fit(model::init_weights(net, derive_seed(a.seed, {0})), train, split.test, tc,
                   [&](const model::EpochRecord& e) {
                       err << "epoch " << e.epoch << " loss " << fixed(e.mean_loss, 6) << " test accuracy "
                           << fixed(e.test_accuracy, 4) << " (" << fixed(t.seconds(), 1) << " s)\n";
                   });
    model::save_weights(fit.weights, a.out_path);

    RunReport rep;
    rep.command = "train";
    rep.seed = a.seed;
    rep.config_digest = digest.value();
    rep.metadata = {{"arch", a.arch},
                    {"train_windows", std::to_string(train.size())},
                    {"test_windows", std::to_string(split.test.size())},
                    {"rejected_trials", std::to_string(split.rejected.size())},
                    {"epochs_run", std::to_string(fit.history.size())}};
    rep.history = fit.history;
    rep.evaluation = model::evaluate(fit.weights, split.test);
    emit_report(rep, a.report_path, "", out);
    return 0;
}

// ---- eval -------------------------------------------------------------------

struct EvalArgs {
    std::string data_path;
    std::string weights_path;
    std::string split = "test";
    std::string report_path;
    std::string csv_path;
    std::uint64_t seed = 1;
};

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
    Digest digest("eval");
    digest.add_file("data", a.data_path);
    digest.add_file("weights", a.weights_path);
    digest.add("split", a.split);
    digest.add("seed", a.seed);

    const auto weights = model::load_weights(a.weights_path);
    const auto split = data::split_dataset(data::read_dataset(std::filesystem::path(a.data_path)));
    std::vector<data::Window> windows;
    if (a.split != "train") windows.insert(windows.end(), split.test.begin(), split.test.end());
    if (a.split != "test") windows.insert(windows.end(), split.train.begin(), split.train.end());
    const auto scored = model::filter_classes(windows, weights.config.classes);

    RunReport rep;
    rep.command = "eval";
    rep.seed = a.seed;
    rep.config_digest = digest.value();
    rep.classes = weights.config.classes;
    rep.metadata = {{"split", a.split}, {"windows", std::to_string(scored.size())}};
    rep.evaluation = model::evaluate(weights, scored);
    for (const auto& w : rep.warnings()) err << "warning: " << w << '\n';
    emit_report(rep, a.report_path, a.csv_path, out);
    return 0;
}

// ---- calibrate ----------------------------------------------------------------

struct CalibrateArgs {
    std::string data_path;
    std::string weights_path;
    std::string mode = "score";
    double shake_offset = 0.0;
    double nod_offset = 0.0;
    double jog_offset = 0.0;
    std::string out_path;
    std::uint64_t seed = 1;
};

int cmd_calibrate(const CalibrateArgs& a, std::ostream& out, std::ostream&) {
    Digest digest("calibrate");
    digest.add_file("data", a.data_path);
    digest.add_file("weights", a.weights_path);
    digest.add("mode", a.mode);
    digest.add("shake_offset", a.shake_offset);
    digest.add("nod_offset", a.nod_offset);
    digest.add("jog_offset", a.jog_offset);
    digest.add("seed", a.seed);

    const auto weights = model::load_weights(a.weights_path);
    const auto split = data::split_dataset(data::read_dataset(std::filesystem::path(a.data_path)));
    recognizer::CalibrationOptions opt;
    opt.mode = recognizer::parse_gate_mode(a.mode);
    opt.shake_offset = a.shake_offset;
    opt.nod_offset = a.nod_offset;
    opt.jog_offset = a.jog_offset;
    const auto t = recognizer::calibrate_thresholds(weights, split.train, opt);
    recognizer::ResolutionConfig rc;
    rc.gate_mode = opt.mode;
    rc = recognizer::with_thresholds(rc, t);
    const std::string text = "# calibrated thresholds, config_digest " + digest.value() + "\n" + rc.to_kv().to_string();
    out << text;
    if (!a.out_path.empty()) write_file(a.out_path, text);
    return 0;
}

// ---- stream -----------------------------------------------------------------

struct StreamArgs {
    std::string weights_path;
    std::string input_path = "-";
    std::string out_path;
    std::string audit_path;
    bool batched = false;
    ResolutionFlags resolution;
    std::uint64_t seed = 1;
};

std::string audit_csv(const std::vector<recognizer::AuditEntry>& log) {
    std::ostringstream os;
    os << "sample_index,network_label,candidate,emitted,gesture_demoted,displacement_rejected,jog_gated";
    for (std::size_t i = 0; i < model::kNumClasses; ++i) os << ",score_" << model::name_of(model::label_at(i));
    os << '\n';
    for (const auto& e : log) {
        os << e.sample_index << ',' << model::name_of(e.resolution.network_label) << ','
           << model::name_of(e.resolution.candidate) << ',' << model::name_of(e.emitted) << ','
           << e.resolution.gesture_demoted << ',' << e.resolution.displacement_rejected << ','
           << e.resolution.jog_gated;
        for (double s : e.scores) os << ',' << data::format_double(s);
        os << '\n';
    }
    return os.str();
}

int cmd_stream(const StreamArgs& a, std::istream& in, std::ostream& out, std::ostream& err) {
    Digest digest("stream");
    const auto rc = a.resolution.resolve(digest);
    const auto weights = model::load_weights(a.weights_path);

    std::ifstream file;
    std::istream* src = &in;
    if (a.input_path != "-") {
        file.open(a.input_path);
        if (!file) throw IoError("cannot open " + a.input_path);
        src = &file;
    }

    std::ostringstream events;
    auto write_event = [&](const recognizer::Event& e) {
        events << e.sample_index << '\t' << model::name_of(e.label) << '\t' << model::index_of(e.label) << '\n';
    };

    std::vector<recognizer::AuditEntry> audit;
    std::size_t rejected = 0;
    std::string line;
    std::size_t line_no = 0;
    if (a.batched) {
        std::vector<data::TrackingSample> samples;
        while (std::getline(*src, line)) {
            if (auto s = data::parse_sample_line(line, ++line_no)) samples.push_back(*s);
        }
        for (const auto& e : recognizer::recognize_stream(weights, rc, samples, a.audit_path.empty() ? nullptr : &audit)) {
            write_event(e);
        }
        for (const auto& s : samples) rejected += s.all_finite() ? 0 : 1;
    } else {
        recognizer::Recognizer rec(weights, rc);
        rec.enable_audit(!a.audit_path.empty());
        while (std::getline(*src, line)) {
            if (auto s = data::parse_sample_line(line, ++line_no)) write_event(rec.push_sample(*s));
        }
        audit = rec.audit_log();
        rejected = rec.rejected_samples();
    }
    if (a.out_path.empty()) {
        out << events.str();
    } else {
        write_file(a.out_path, events.str());
    }
    if (!a.audit_path.empty()) write_file(a.audit_path, audit_csv(audit));
    if (rejected > 0) err << "rejected " << rejected << " non-finite samples\n";
    return 0;
}

// ---- latency ----------------------------------------------------------------

struct LatencyArgs {
    std::string data_path;
    std::string weights_path;
    std::string trials = "test";
    std::size_t idle_prefix = 80;
    std::string report_path;
    std::string csv_path;
    ResolutionFlags resolution;
    std::uint64_t seed = 1;
};

int cmd_latency(const LatencyArgs& a, std::ostream& out, std::ostream& err) {
    Digest digest("latency");
    digest.add_file("data", a.data_path);
    digest.add_file("weights", a.weights_path);
    digest.add("trials", a.trials);
    digest.add("idle_prefix", a.idle_prefix);
    digest.add("seed", a.seed);
    const auto rc = a.resolution.resolve(digest);
    const auto weights = model::load_weights(a.weights_path);

    std::vector<data::Trial> trials;
    for (auto& t : data::read_dataset(std::filesystem::path(a.data_path))) {
        if (a.trials == "all" || t.trial_index == 4) trials.push_back(std::move(t));
    }
    recognizer::LatencyOptions opt;
    opt.idle_prefix_samples = a.idle_prefix;
    opt.seed = a.seed;
    Timer t;
    RunReport rep;
    rep.command = "latency";
    rep.seed = a.seed;
    rep.config_digest = digest.value();
    rep.metadata = {{"trials", std::to_string(trials.size())}};
    rep.latency = recognizer::measure_latency(weights, rc, trials, opt);
    err << "latency measured in " << fixed(t.seconds(), 1) << " s\n";
    emit_report(rep, a.report_path, a.csv_path, out);
    return 0;
}

// ---- baseline / compare -----------------------------------------------------------

struct GridArgs {
    std::vector<std::size_t> symbols{16, 32, 64};
    std::vector<std::size_t> states{3, 5, 8};
    std::string select_on = "test";
    std::size_t em_iters = 500;
    double em_tol = 1e-2;
    std::size_t window_stride = 4;
    std::size_t max_sequences = 600;

    void attach(CLI::App* app) {
        app->add_option("--symbols", symbols, "codebook sizes to sweep")->delimiter(',');
        app->add_option("--states", states, "state counts to sweep")->delimiter(',');
        app->add_option("--select-on", select_on, "split used to pick (K, N)")
            ->check(CLI::IsMember({"test", "validation"}));
        app->add_option("--em-iters", em_iters, "Baum-Welch iterations");
        app->add_option("--em-tol", em_tol, "stop when the log-likelihood gain drops below this (0 = never)");
        app->add_option("--hmm-window-stride", window_stride, "keep every n-th training window per class");
        app->add_option("--hmm-max-sequences", max_sequences, "training sequences per class");
    }

    void apply(CompareConfig& c, Digest& d) const {
        c.symbol_grid = symbols;
        c.state_grid = states;
        c.select_on = select_on == "validation" ? SelectOn::Validation : SelectOn::Test;
        c.hmm.em_iters = em_iters;
        c.hmm.em_tol = em_tol;
        c.hmm.window_stride = window_stride;
        c.hmm.max_sequences_per_class = max_sequences;
        std::ostringstream ks, ns;
        for (auto k : symbols) ks << k << ' ';
        for (auto n : states) ns << n << ' ';
        d.add("symbols", ks.str());
        d.add("states", ns.str());
        d.add("select_on", select_on);
        d.add("em_iters", em_iters);
        d.add("em_tol", em_tol);
        d.add("hmm_window_stride", window_stride);
        d.add("hmm_max_sequences", max_sequences);
    }
};

struct BaselineArgs {
    std::string data_path;
    std::string task = "body";
    std::vector<std::string> streams;
    GridArgs grid;
    std::string out_path;
    std::uint64_t seed = 1;
};

int cmd_baseline(const BaselineArgs& a, std::ostream& out, std::ostream& err) {
    Digest digest("baseline");
    digest.add_file("data", a.data_path);
    digest.add("task", a.task);
    digest.add("seed", a.seed);
    CompareConfig cc;
    a.grid.apply(cc, digest);
    std::vector<std::string> names = a.streams;
    if (names.empty()) {
        names = a.task == "body"   ? std::vector<std::string>{"LinearVel"}
                : a.task == "head" ? std::vector<std::string>{"AngVel", "AngAcc"}
                                   : std::vector<std::string>{"LinearVel", "AngVel", "AngAcc"};
    }
    hmm::HmmClassifierConfig hc = cc.hmm;
    hc.groups = parse_groups(names);
    hc.seed = a.seed;
    digest.add("streams", streams_name(hc.groups));

    const auto split = data::split_dataset(data::read_dataset(std::filesystem::path(a.data_path)));
    const auto classes = task_classes(a.task);
    Timer t;
    const HmmCellResult r = run_hmm_cell(model::filter_classes(split.train, classes),
                                         model::filter_classes(split.test, classes), hc, cc);
    err << "sweep finished in " << fixed(t.seconds(), 1) << " s\n";

    std::ostringstream text, csv;
    text << "command\tbaseline\nseed\t" << a.seed << "\nconfig_digest\t" << digest.value() << "\ntask\t" << a.task
         << "\nstreams\t" << streams_name(hc.groups) << "\nselect_on\t" << a.grid.select_on << '\n';
    text << "symbols\tstates\taccuracy\n";
    csv << "symbols,states,accuracy\n";
    for (const auto& c : r.sweep.cells) {
        text << c.n_symbols << '\t' << c.n_states << '\t' << fixed(c.accuracy, 6) << '\n';
        csv << c.n_symbols << ',' << c.n_states << ',' << fixed(c.accuracy, 6) << '\n';
    }
    text << "best\tK=" << r.sweep.best.n_symbols << " N=" << r.sweep.best.n_states << "\ntest_accuracy\t"
         << fixed(r.test_accuracy, 6) << '\n';
    out << text.str();
    if (!a.out_path.empty()) write_file(a.out_path, csv.str());
    return 0;
}

struct CompareArgs {
    std::string data_path;
    std::size_t epochs = 60;
    std::size_t budget_steps = 0;
    std::size_t batch = 512;
    double lr = 1e-4;
    std::size_t stride = 1;
    bool no_cnn = false;
    bool no_hmm = false;
    bool no_fusion = false;
    GridArgs grid;
    std::string out_path;
    std::uint64_t seed = 1;
};

int cmd_compare(const CompareArgs& a, std::ostream& out, std::ostream& err) {
    Digest digest("compare");
    digest.add_file("data", a.data_path);
    digest.add("epochs", a.epochs);
    digest.add("budget_steps", a.budget_steps);
    digest.add("batch", a.batch);
    digest.add("lr", a.lr);
    digest.add("train_stride", a.stride);
    digest.add("cnn", !a.no_cnn);
    digest.add("hmm", !a.no_hmm);
    digest.add("fusion", !a.no_fusion);
    digest.add("seed", a.seed);
    CompareConfig cc;
    a.grid.apply(cc, digest);
    cc.seed = a.seed;
    cc.epochs = a.epochs;
    cc.budget_steps = a.budget_steps;
    cc.batch_size = a.batch;
    cc.learning_rate = a.lr;
    cc.train_stride = a.stride;
    cc.include_cnn = !a.no_cnn;
    cc.include_hmm = !a.no_hmm;
    cc.include_fusion = !a.no_fusion;

    const auto split = data::split_dataset(data::read_dataset(std::filesystem::path(a.data_path)));
    Timer t;
    const ComparisonTable table = run_comparison(split, cc, [&](const std::string& s) {
        err << "[" << fixed(t.seconds(), 1) << " s] " << s << '\n';
    });
    out << "command\tcompare\nseed\t" << a.seed << "\nconfig_digest\t" << digest.value() << '\n' << table.to_text();
    if (!a.out_path.empty()) {
        write_file(a.out_path, "# config_digest=" + digest.value() + "\n" + table.to_csv());
    }
    return 0;
}

int dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Head-tracking body action and head gesture recognition toolkit", "hmdrec"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "help for every subcommand");

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "write a synthetic dataset");
    g->add_option("--out", gen.out_path, "dataset file")->required();
    g->add_option("--config", gen.config_path, "generator key-value config");
    g->add_option("--write-config", gen.write_config, "save the effective generator config");
    g->add_option("--subjects", gen.subjects, "number of subjects");
    g->add_option("--trials", gen.trials, "trials per subject and class");
    g->add_option("--seed", gen.seed, "generator seed")->capture_default_str();

    TrainArgs tr;
    auto* t = app.add_subcommand("train", "train a network on trials 1-3 and score trial 4");
    t->add_option("--data", tr.data_path, "dataset file")->required();
    t->add_option("--out", tr.out_path, "weight file")->required();
    t->add_option("--arch", tr.arch, "two-stream or single-stream")
        ->check(CLI::IsMember({"two-stream", "single-stream"}))
        ->capture_default_str();
    t->add_option("--epochs", tr.epochs)->capture_default_str();
    t->add_option("--batch", tr.batch)->capture_default_str();
    t->add_option("--lr", tr.lr)->capture_default_str();
    t->add_option("--target-accuracy", tr.target, "stop once held-out accuracy reaches this");
    t->add_option("--train-stride", tr.stride, "keep every n-th training window")->capture_default_str();
    t->add_option("--report", tr.report_path, "write the text report here as well");
    t->add_option("--seed", tr.seed)->capture_default_str();

    EvalArgs ev;
    auto* e = app.add_subcommand("eval", "accuracy, per-class metrics and confusion matrix");
    e->add_option("--data", ev.data_path, "dataset file")->required();
    e->add_option("--weights", ev.weights_path, "weight file")->required();
    e->add_option("--split", ev.split)->check(CLI::IsMember({"test", "train", "all"}))->capture_default_str();
    e->add_option("--report", ev.report_path, "text report file");
    e->add_option("--csv", ev.csv_path, "CSV report file");
    e->add_option("--seed", ev.seed)->capture_default_str();

    CalibrateArgs ca;
    auto* c = app.add_subcommand("calibrate", "derive shake / nod / jog gates from the training split");
    c->add_option("--data", ca.data_path, "dataset file")->required();
    c->add_option("--weights", ca.weights_path, "weight file")->required();
    c->add_option("--mode", ca.mode, "score or margin")->check(CLI::IsMember({"score", "margin"}))->capture_default_str();
    c->add_option("--shake-offset", ca.shake_offset)->capture_default_str();
    c->add_option("--nod-offset", ca.nod_offset)->capture_default_str();
    c->add_option("--jog-offset", ca.jog_offset)->capture_default_str();
    c->add_option("--out", ca.out_path, "recognizer config file to write");
    c->add_option("--seed", ca.seed)->capture_default_str();

    StreamArgs st;
    auto* s = app.add_subcommand("stream", "run the real-time recognizer over sample lines");
    s->add_option("--weights", st.weights_path, "weight file")->required();
    s->add_option("--input", st.input_path, "dataset-format sample lines, - for stdin")->capture_default_str();
    s->add_option("--out", st.out_path, "event file (default stdout)");
    s->add_option("--audit", st.audit_path, "per-frame CSV audit log");
    s->add_flag("--batched", st.batched, "score all windows up front instead of one per sample");
    st.resolution.attach(s);
    s->add_option("--seed", st.seed)->capture_default_str();

    LatencyArgs la;
    auto* l = app.add_subcommand("latency", "recognition latency per class");
    l->add_option("--data", la.data_path, "dataset file")->required();
    l->add_option("--weights", la.weights_path, "weight file")->required();
    l->add_option("--trials", la.trials, "test (trial 4) or all")->check(CLI::IsMember({"test", "all"}))->capture_default_str();
    l->add_option("--idle-prefix", la.idle_prefix, "idle samples streamed before each trial")->capture_default_str();
    l->add_option("--report", la.report_path, "text report file");
    l->add_option("--csv", la.csv_path, "CSV report file");
    la.resolution.attach(l);
    l->add_option("--seed", la.seed, "idle-prefix noise seed")->capture_default_str();

    BaselineArgs ba;
    auto* b = app.add_subcommand("baseline", "HMM baseline with a symbols x states sweep");
    b->add_option("--data", ba.data_path, "dataset file")->required();
    b->add_option("--task", ba.task)->check(CLI::IsMember({"body", "head", "all"}))->capture_default_str();
    b->add_option("--streams", ba.streams, "LinearVel, LinearAcc, AngVel, AngAcc")->delimiter(',');
    ba.grid.attach(b);
    b->add_option("--out", ba.out_path, "sweep CSV file");
    b->add_option("--seed", ba.seed)->capture_default_str();

    CompareArgs co;
    auto* m = app.add_subcommand("compare", "CNN vs HMM across data-stream combinations");
    m->add_option("--data", co.data_path, "dataset file")->required();
    m->add_option("--epochs", co.epochs)->capture_default_str();
    m->add_option("--budget-steps", co.budget_steps, "train each network for at least this many steps instead");
    m->add_option("--batch", co.batch)->capture_default_str();
    m->add_option("--lr", co.lr)->capture_default_str();
    m->add_option("--train-stride", co.stride, "keep every n-th training window for the networks")->capture_default_str();
    m->add_flag("--no-cnn", co.no_cnn);
    m->add_flag("--no-hmm", co.no_hmm);
    m->add_flag("--no-fusion", co.no_fusion, "skip the two-stream and single-stream networks");
    co.grid.attach(m);
    m->add_option("--out", co.out_path, "CSV table file");
    m->add_option("--seed", co.seed)->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& ex) {
        const int code = app.exit(ex, out, err);
        return code == 0 ? 0 : static_cast<int>(ExitCode::Usage);
    }

    if (app.got_subcommand(g)) return cmd_generate(gen, out, err);
    if (app.got_subcommand(t)) return cmd_train(tr, out, err);
    if (app.got_subcommand(e)) return cmd_eval(ev, out, err);
    if (app.got_subcommand(c)) return cmd_calibrate(ca, out, err);
    if (app.got_subcommand(s)) return cmd_stream(st, in, out, err);
    if (app.got_subcommand(l)) return cmd_latency(la, out, err);
    if (app.got_subcommand(b)) return cmd_baseline(ba, out, err);
    return cmd_compare(co, out, err);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(args, in, out, err);
    } catch (const IoError& ex) {
        err << "error: " << ex.what() << '\n';
        return static_cast<int>(ExitCode::Io);
    } catch (const ParseError& ex) {
        err << "error: " << ex.what() << '\n';
        return static_cast<int>(ExitCode::Format);
    } catch (const LoadError& ex) {
        err << "error: " << ex.what() << '\n';
        return static_cast<int>(ExitCode::Format);
    } catch (const ConfigError& ex) {
        err << "error: " << ex.what() << '\n';
        return static_cast<int>(ExitCode::Config);
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << '\n';
        return static_cast<int>(ExitCode::Runtime);
    }
}

int run_cli(int argc, const char* const* argv) {
    std::vector<std::string> args(argv + (argc > 0 ? 1 : 0), argv + argc);
    return run_cli(args, std::cin, std::cout, std::cerr);
}

}  // namespace hmdrec::harness
