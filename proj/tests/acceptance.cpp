// Acceptance runner: one PASS/FAIL line per criterion, details indented
// underneath. Exit status is the number of failed criteria (capped at 100).

#include <unistd.h>

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hmdrec/data/dataset_io.hpp"
#include "hmdrec/data/generator.hpp"
#include "hmdrec/data/preparation.hpp"
#include "hmdrec/error.hpp"
#include "hmdrec/harness/cli.hpp"
#include "hmdrec/harness/compare.hpp"
#include "hmdrec/harness/report.hpp"
#include "hmdrec/hmm/classifier.hpp"
#include "hmdrec/model/training.hpp"
#include "hmdrec/model/weights_io.hpp"
#include "hmdrec/nn/kernels.hpp"
#include "hmdrec/recognizer/calibration.hpp"
#include "hmdrec/recognizer/latency.hpp"
#include "hmdrec/recognizer/recognizer.hpp"
#include "oracles.hpp"

using namespace hmdrec;
namespace fs = std::filesystem;
using model::ClassLabel;

namespace {

class Log {
public:
    void note(const std::string& s) { lines_.push_back(s); }
    void require(bool ok, const std::string& what) {
        if (!ok) {
            failed_ = true;
            lines_.push_back("violated: " + what);
        }
    }
    bool failed() const { return failed_; }
    const std::vector<std::string>& lines() const { return lines_; }

private:
    std::vector<std::string> lines_;
    bool failed_ = false;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string pct(double v) { return harness::fixed(100.0 * v, 2) + "%"; }
std::string num(double v, int d = 4) { return harness::fixed(v, d); }

std::string sci(double v) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(2) << v;
    return os.str();
}

// ---------------------------------------------------------------- criterion 1

void gradient_check(Log& log) {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20240501);
    double worst = 0.0;
    std::size_t params = 0;
    for (int trial = 0; trial < 10; ++trial) {
        const model::NetworkConfig cfg = oracle::tiny_two_stream(rng);
        model::NetworkWeights w = model::init_weights(cfg, rng());
        // Zero biases can park a pre-activation exactly on the ReLU kink when
        // a whole layer is dead, where finite differences are meaningless.
        for (auto& stream : w.streams) {
            for (auto& layer : stream) layer.bias = oracle::random_vector(layer.bias.size(), rng, -0.1, 0.1);
        }
        for (auto& layer : w.dense) layer.bias = oracle::random_vector(layer.bias.size(), rng, -0.1, 0.1);
        const model::NetworkInput input = oracle::random_input(cfg, 4, rng);
        std::vector<std::size_t> targets;
        for (std::size_t b = 0; b < input.batch; ++b) targets.push_back(rng() % cfg.n_classes());
        const oracle::GradCheck r = oracle::network_gradcheck(w, input, targets, rng(), 1e-5);
        log.require(r.parameters == w.parameter_count(), "every parameter checked");
        log.require(r.max_relative_error < 1e-4,
                    "config " + std::to_string(trial) + " max relative error " + sci(r.max_relative_error));
        worst = std::max(worst, r.max_relative_error);
        params += r.parameters;
    }
    const double elapsed = seconds_since(t0);
    log.note("10 configs, " + std::to_string(params) + " parameters, max relative error " + sci(worst) + ", " +
             num(elapsed, 1) + " s");
    log.require(elapsed < 60.0, "runtime under 1 min");
}

// ---------------------------------------------------------------- criterion 2

std::vector<std::vector<double>> rows_of(const nn::Array2& a) {
    std::vector<std::vector<double>> rows(a.channels, std::vector<double>(a.length));
    for (std::size_t c = 0; c < a.channels; ++c) {
        for (std::size_t i = 0; i < a.length; ++i) rows[c][i] = a(c, i);
    }
    return rows;
}

void kernel_oracles(Log& log) {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<std::size_t> ch(1, 8), len(7, 64), k(1, 7), st(1, 3), pad(0, 3), dim(1, 64);
    std::size_t conv_ok = 0, pool_ok = 0, dense_ok = 0;
    for (int trial = 0; trial < 100; ++trial) {
        nn::Conv1DLayer conv(ch(rng), ch(rng), k(rng), st(rng), pad(rng));
        conv.weights = oracle::random_vector(conv.weights.size(), rng);
        conv.bias = oracle::random_vector(conv.bias.size(), rng);
        const std::size_t conv_len = len(rng);
        const nn::Array2 x(conv.in_channels, conv_len, oracle::random_vector(conv.in_channels * conv_len, rng, -2, 2));
        conv_ok += rows_of(nn::conv1d_forward(x, conv)) == oracle::conv(rows_of(x), conv) ? 1 : 0;

        const std::size_t pool_k = 1 + trial % 4;
        const std::size_t pool_c = ch(rng), pool_len = pool_k + len(rng);
        const nn::Array2 p(pool_c, pool_len, oracle::random_vector(pool_c * pool_len, rng, -2, 2));
        const nn::PoolResult pr = nn::maxpool1d_forward(p, pool_k);
        const auto prow = rows_of(p);
        bool same = true;
        for (std::size_t c = 0; c < pool_c; ++c) {
            const auto want = oracle::maxpool(prow[c], pool_k);
            same = same && want.size() == pr.output.length;
            for (std::size_t j = 0; same && j < want.size(); ++j) same = pr.output(c, j) == want[j];
        }
        pool_ok += same ? 1 : 0;

        nn::DenseLayer dense(dim(rng), dim(rng));
        dense.weights = oracle::random_vector(dense.weights.size(), rng);
        dense.bias = oracle::random_vector(dense.bias.size(), rng);
        const auto dx = oracle::random_vector(dense.in_dim, rng);
        dense_ok += nn::dense_forward(dx, dense, false) == oracle::matvec(dense, dx) ? 1 : 0;
    }
    log.note("exact matches: conv " + std::to_string(conv_ok) + "/100, maxpool " + std::to_string(pool_ok) +
             "/100, dense " + std::to_string(dense_ok) + "/100");
    log.require(conv_ok == 100 && pool_ok == 100 && dense_ok == 100, "all kernel instances match exactly");

    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + trial % 2;
        const std::size_t symbols = 2 + trial % 4;
        const hmm::DiscreteHMM h = hmm::random_hmm(n, symbols, rng);
        std::uniform_int_distribution<hmm::Symbol> sym(0, static_cast<hmm::Symbol>(symbols - 1));
        std::vector<hmm::Symbol> seq(1 + trial % 8);
        for (auto& s : seq) s = sym(rng);
        worst = std::max(worst, std::abs(hmm::forward_loglik(h, seq) - oracle::path_enumeration_loglik(h, seq)));
    }
    log.note("HMM forward vs path enumeration on 100 toys: max |diff| " + sci(worst));
    log.require(worst <= 1e-10, "HMM forward within 1e-10 of path enumeration");
}

// ---------------------------------------------------------------- criterion 3

void shape_contract(Log& log) {
    const auto cfg = model::NetworkConfig::two_stream();
    const model::ShapeTrace trace = model::shape_trace(cfg);
    std::ostringstream os;
    for (std::size_t i = 0; i < trace.lengths.size(); ++i) os << (i ? ", " : "[") << trace.lengths[i];
    os << "], flatten " << trace.stream_features << ", concat " << trace.concat_features;
    log.require(trace.lengths == std::vector<std::size_t>{38, 12, 10, 3, 1}, "length trace [38, 12, 10, 3, 1]");
    log.require(trace.stream_features == 256, "flatten 256");
    log.require(trace.concat_features == 512, "concat 512");

    const model::NetworkWeights w = model::init_weights(cfg, 3);
    std::mt19937_64 rng(4);
    const model::NetworkInput input = oracle::random_input(cfg, 2, rng);
    model::ForwardCache cache;
    const nn::Matrix scores = model::forward_batch(w, input, nn::Mode::Eval, rng, &cache);
    for (const auto& stream : cache.streams) {
        std::vector<std::size_t> conv_lengths;
        for (const auto& stage : stream) conv_lengths.push_back(stage.activation.length);
        log.require(conv_lengths == std::vector<std::size_t>{38, 10, 1}, "forward pass conv lengths 38, 10, 1");
    }
    log.require(w.dense.front().in_dim == 512, "first dense layer consumes 512 features");
    log.require(scores.rows() == 18 && scores.cols() == 2, "output 18 scores per window");
    os << ", output " << scores.rows();
    log.note(os.str());
}

// ---------------------------------------------------------------- criteria 4, 7

struct TrainedBenchmark {
    data::GeneratorConfig generator;
    std::vector<data::Trial> trials;
    data::DatasetSplit split;
    std::optional<model::NetworkWeights> weights;
};

TrainedBenchmark& benchmark() {
    static TrainedBenchmark b = [] {
        TrainedBenchmark r;
        r.trials = data::generate_cohort(r.generator);
        r.split = data::split_dataset(r.trials);
        return r;
    }();
    return b;
}

void end_to_end_training(Log& log) {
    TrainedBenchmark& b = benchmark();
    const auto t0 = std::chrono::steady_clock::now();
    model::TrainConfig tc;
    tc.batch_size = 512;
    tc.learning_rate = 1e-4;
    tc.epochs = 60;
    tc.seed = 1;
    tc.target_accuracy = 0.95;
    const auto cfg = model::NetworkConfig::two_stream();
    std::size_t reached_at = 0;
    model::FitResult fit = model::fit(model::init_weights(cfg, 2), b.split.train, b.split.test, tc,
                                      [&](const model::EpochRecord& e) {
                                          std::cerr << "  [criterion 4] epoch " << e.epoch << " loss "
                                                    << num(e.mean_loss) << " test " << pct(e.test_accuracy) << " ("
                                                    << num(seconds_since(t0), 0) << " s)\n";
                                          if (!reached_at && e.test_accuracy >= 0.90) reached_at = e.epoch;
                                      });
    const double elapsed = seconds_since(t0);
    const double final_acc = model::evaluate(fit.weights, b.split.test).accuracy;
    log.note(std::to_string(b.generator.subjects) + " subjects, " + std::to_string(b.split.train.size()) +
             " train / " + std::to_string(b.split.test.size()) + " test windows; batch 512, lr 1e-4");
    log.note("90% first reached at epoch " + (reached_at ? std::to_string(reached_at) : std::string("never")) +
             "; stopped after " + std::to_string(fit.history.size()) + " epochs at " + pct(final_acc) + ", " +
             num(elapsed / 60.0, 1) + " min");
    log.require(reached_at >= 1 && reached_at <= 60, "held-out accuracy >= 90% within 60 epochs");
    log.require(elapsed < 1800.0, "runtime under 30 min");
    b.weights = std::move(fit.weights);
}

void latency_harness(Log& log) {
    TrainedBenchmark& b = benchmark();
    if (!b.weights) {
        log.require(false, "needs the criterion 4 model");
        return;
    }
    const recognizer::Thresholds t = recognizer::calibrate_thresholds(*b.weights, b.split.train);
    const recognizer::ResolutionConfig rc = recognizer::with_thresholds({}, t);
    log.note("calibrated gates: shake " + num(t.shake, 2) + ", nod " + num(t.nod, 2) + ", jog " + num(t.jog, 2));

    std::vector<data::Trial> test;
    for (const auto& tr : b.trials) {
        if (tr.trial_index == 4) test.push_back(tr);
    }
    const recognizer::LatencyReport rep = recognizer::measure_latency(*b.weights, rc, test);
    for (const auto& line : [&] {
             std::vector<std::string> out;
             std::istringstream in(harness::render_latency(rep));
             for (std::string s; std::getline(in, s);) out.push_back(s);
             return out;
         }()) {
        log.note(line);
    }

    double min_latency = std::numeric_limits<double>::infinity();
    for (const auto& c : rep.per_class) {
        for (double v : c.latencies) min_latency = std::min(min_latency, v);
    }
    log.require(min_latency >= 0.0625 - 1e-12, "every latency >= 62.5 ms (min " + num(min_latency) + " s)");

    const auto body = recognizer::ungated_body_actions();
    const auto head = recognizer::ungated_head_gestures();
    const recognizer::LatencySummary body_pool = rep.pooled(body);
    const recognizer::LatencySummary head_pool = rep.pooled(head);
    log.note("non-gated body mean " + num(body_pool.mean, 3) + " s over " + std::to_string(body_pool.hits) +
             " hits; non-gated head mean " + num(head_pool.mean, 3) + " s over " + std::to_string(head_pool.hits));
    log.require(body_pool.hits > 0 && body_pool.mean >= 0.1 && body_pool.mean <= 1.5,
                "non-gated body mean latency in [0.1, 1.5] s");
    auto gated = [&](ClassLabel c, const recognizer::LatencySummary& base, const std::string& base_name) {
        const recognizer::ClassLatency* cl = rep.find(c);
        const bool ok = cl && !cl->latencies.empty() && cl->mean > base.mean;
        log.require(ok, std::string(model::name_of(c)) + " mean " +
                            (cl && !cl->latencies.empty() ? num(cl->mean, 3) : std::string("n/a")) +
                            " s exceeds non-gated " + base_name + " mean " + num(base.mean, 3) + " s");
    };
    gated(ClassLabel::JoggingInPlace, body_pool, "body");
    gated(ClassLabel::Nodding, head_pool, "head");
    gated(ClassLabel::Shaking, head_pool, "head");
}

// ---------------------------------------------------------------- criterion 5

struct CompareSettings {
    std::vector<std::uint64_t> seeds{1, 2, 3};
    std::size_t batch = 128;
    std::size_t budget_steps = 1000;
    std::size_t train_stride = 4;
};

void table_orderings(Log& log, const CompareSettings& s) {
    for (std::uint64_t seed : s.seeds) {
        const auto t0 = std::chrono::steady_clock::now();
        data::GeneratorConfig g;
        g.seed = seed;
        const data::DatasetSplit split = data::split_dataset(data::generate_cohort(g));
        harness::CompareConfig cc;
        cc.seed = seed;
        cc.batch_size = s.batch;
        cc.learning_rate = 1e-4;
        cc.budget_steps = s.budget_steps;
        cc.train_stride = s.train_stride;
        const harness::ComparisonTable table = harness::run_comparison(split, cc, [&](const std::string& m) {
            std::cerr << "  [criterion 5] seed " << seed << " [" << num(seconds_since(t0), 0) << " s] " << m << '\n';
        });
        log.note("seed " + std::to_string(seed) + " (" + num(seconds_since(t0) / 60.0, 1) + " min):");
        std::istringstream rows(table.to_text());
        for (std::string line; std::getline(rows, line);) log.note("  " + line);

        const std::string tag = "seed " + std::to_string(seed) + ": ";
        const auto* two = table.find("two-stream CNN", "all", "LinearVel | AngVel+AngAcc");
        const auto* one = table.find("single-stream CNN", "all", "LinearVel+AngVel+AngAcc");
        if (!two || !one) {
            log.require(false, tag + "fusion rows present");
            continue;
        }
        log.require(two->accuracy >= one->accuracy - 0.01,
                    tag + "(a) two-stream " + pct(two->accuracy) + " >= single-stream " + pct(one->accuracy) +
                        " - 1 pt");
        for (const auto& cell : harness::comparison_cells()) {
            const std::string streams = harness::streams_name(cell.groups);
            const auto* cnn = table.find("1D-CNN", cell.task, streams);
            const auto* hmm = table.find("HMM", cell.task, streams);
            log.require(cnn && hmm && cnn->accuracy > hmm->accuracy,
                        tag + "(b) " + cell.task + " " + streams + ": CNN " + (cnn ? pct(cnn->accuracy) : "n/a") +
                            " > HMM " + (hmm ? pct(hmm->accuracy) : "n/a"));
        }
        for (const char* algo : {"1D-CNN", "HMM"}) {
            const auto* both = table.find(algo, "head", "AngVel+AngAcc");
            const auto* acc = table.find(algo, "head", "AngAcc");
            log.require(both && acc && both->accuracy >= acc->accuracy,
                        tag + "(c) " + algo + " head AngVel+AngAcc " + (both ? pct(both->accuracy) : "n/a") +
                            " >= AngAcc " + (acc ? pct(acc->accuracy) : "n/a"));
        }
    }
}

// ---------------------------------------------------------------- criterion 6

std::vector<double> one_hot(ClassLabel c, double v = 100.0) {
    std::vector<double> s(model::kNumClasses, 0.0);
    s[static_cast<std::size_t>(model::index_of(c))] = v;
    return s;
}

void recognizer_properties(Log& log) {
    std::mt19937_64 rng(606);
    std::uniform_int_distribution<std::size_t> cls(0, model::kNumClasses - 1);
    std::uniform_int_distribution<int> coin(0, 3);

    // Monitor: emits iff the last five candidates are identical and valid.
    std::size_t monitor_checks = 0;
    for (int trial = 0; trial < 200; ++trial) {
        recognizer::Monitor m(5);
        std::vector<ClassLabel> hist;
        for (int i = 0; i < 60; ++i) {
            ClassLabel c = coin(rng) == 0 ? ClassLabel::Invalid : model::label_at(cls(rng) % 3);
            hist.push_back(c);
            const ClassLabel got = m.push(c);
            ClassLabel want = ClassLabel::Invalid;
            if (hist.size() >= 5) {
                bool same = model::is_valid(c);
                for (std::size_t k = hist.size() - 5; k < hist.size(); ++k) same = same && hist[k] == c;
                if (same) want = c;
            }
            log.require(got == want, "monitor rule at step " + std::to_string(i));
            ++monitor_checks;
        }
    }

    // Jump gate on non-increasing buffers.
    std::size_t jump_checks = 0;
    std::uniform_real_distribution<double> drop(0.0, 0.03);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> y(40);
        y[0] = 1.8;
        for (std::size_t i = 1; i < y.size(); ++i) y[i] = y[i - 1] - (coin(rng) == 0 ? 0.0 : drop(rng));
        const auto r = recognizer::resolve_candidate(one_hot(ClassLabel::Jumping), y, {});
        log.require(r.candidate != ClassLabel::Jumping, "jump confirmed on a non-increasing buffer");
        ++jump_checks;
    }

    // Gate examples on constructed score vectors.
    const std::vector<double> flat(40, 1.7);
    std::vector<double> rise = flat;
    for (std::size_t i = 10; i < 22; ++i) rise[i] = rise[i - 1] + 0.01;
    for (std::size_t i = 22; i < 40; ++i) rise[i] = rise[21];
    log.require(recognizer::resolve_candidate(one_hot(ClassLabel::Jumping), rise, {}).candidate == ClassLabel::Jumping,
                "jump with 0.12 m rise is confirmed");
    std::vector<double> dip = flat;
    for (std::size_t i = 10; i < 18; ++i) dip[i] = dip[i - 1] - 0.01;
    for (std::size_t i = 18; i < 40; ++i) dip[i] = dip[17];
    log.require(recognizer::resolve_candidate(one_hot(ClassLabel::SquattingDown), dip, {}).candidate ==
                    ClassLabel::Invalid,
                "squat with -0.08 m drop is Invalid");
    auto shake = one_hot(ClassLabel::Shaking, 110.0);
    shake[static_cast<std::size_t>(model::index_of(ClassLabel::RotatingLeft))] = 90.0;
    log.require(recognizer::resolve_candidate(shake, flat, {}).candidate == ClassLabel::RotatingLeft,
                "shake at 110 <= 120 demoted to RotatingLeft");
    shake[static_cast<std::size_t>(model::index_of(ClassLabel::Shaking))] = 130.0;
    log.require(recognizer::resolve_candidate(shake, flat, {}).candidate == ClassLabel::Shaking,
                "shake at 130 > 120 kept");
    auto nod = one_hot(ClassLabel::Nodding, 70.0);
    nod[static_cast<std::size_t>(model::index_of(ClassLabel::TiltingUp))] = 60.0;
    log.require(recognizer::resolve_candidate(nod, flat, {}).candidate == ClassLabel::TiltingUp,
                "nod at 70 <= 75 demoted to TiltingUp");
    log.require(recognizer::resolve_candidate(one_hot(ClassLabel::JoggingInPlace, 70.0), flat, {}).candidate ==
                    ClassLabel::SteppingInPlace,
                "jog at 70 <= 75 becomes SteppingInPlace");
    log.require(recognizer::resolve_candidate(one_hot(ClassLabel::JoggingInPlace, 80.0), flat, {}).candidate ==
                    ClassLabel::JoggingInPlace,
                "jog at 80 > 75 kept");

    // Raising the jog gate only converts jogging into stepping.
    std::uniform_real_distribution<double> score(-50.0, 150.0);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> s(model::kNumClasses);
        for (double& x : s) x = score(rng);
        recognizer::ResolutionConfig lo, hi;
        lo.tau_jog = score(rng);
        hi.tau_jog = lo.tau_jog + std::abs(score(rng));
        const ClassLabel a = recognizer::resolve_candidate(s, flat, lo).candidate;
        const ClassLabel b = recognizer::resolve_candidate(s, flat, hi).candidate;
        log.require(a == b || (a == ClassLabel::JoggingInPlace && b == ClassLabel::SteppingInPlace),
                    "jog gate monotonicity");
    }

    // One event per pushed sample from a scripted scorer; nothing valid before 44 pushes.
    std::size_t pushed = 0;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<data::TrackingSample> stream(100 + trial);
        std::vector<ClassLabel> script(stream.size());
        ClassLabel current = model::label_at(cls(rng));
        for (std::size_t i = 0; i < stream.size(); ++i) {
            if (coin(rng) == 0 && coin(rng) == 0) current = model::label_at(cls(rng));
            script[i] = current;
            stream[i].t = static_cast<double>(i) / 80.0;
            stream[i].position = {static_cast<double>(model::index_of(current)), 1.7, 0.0};
        }
        recognizer::Recognizer rec(
            [](std::span<const data::TrackingSample> w) {
                std::vector<double> s(model::kNumClasses, 0.0);
                s[static_cast<std::size_t>(w.back().position[0])] = 200.0;
                return s;
            },
            {});
        for (std::size_t i = 0; i < stream.size(); ++i) {
            const recognizer::Event e = rec.push_sample(stream[i]);
            ++pushed;
            log.require(e.sample_index == i, "one event per push");
            // The window ending at i scores script[i]; a flat head height
            // rules out Jumping and SquattingDown.
            bool stable = i >= 39 + 4;
            for (std::size_t k = i - std::min<std::size_t>(i, 4); stable && k <= i; ++k) {
                stable = script[k] == script[i];
            }
            stable = stable && script[i] != ClassLabel::Jumping && script[i] != ClassLabel::SquattingDown;
            const ClassLabel want = stable ? script[i] : ClassLabel::Invalid;
            if (e.label != want) {
                log.require(false, "scripted stream " + std::to_string(trial) + " sample " + std::to_string(i) +
                                       ": got " + std::string(model::name_of(e.label)) + ", expected " +
                                       std::string(model::name_of(want)));
                break;
            }
        }
        log.require(rec.pushed_samples() == stream.size(), "push count");
    }
    log.note(std::to_string(monitor_checks) + " monitor steps, " + std::to_string(jump_checks) +
             " non-increasing buffers, 1000 gate pairs, " + std::to_string(pushed) + " scripted pushes");
}

// ---------------------------------------------------------------- criterion 8

void baum_welch(Log& log) {
    hmm::DiscreteHMM truth;
    truth.n_states = 2;
    truth.n_symbols = 3;
    truth.initial = {0.5, 0.5};
    truth.transition = {0.9, 0.1, 0.2, 0.8};
    truth.emission = {0.8, 0.15, 0.05, 0.1, 0.2, 0.7};
    std::mt19937_64 rng(808);
    std::vector<std::vector<hmm::Symbol>> seqs;
    for (int i = 0; i < 100; ++i) seqs.push_back(hmm::sample_sequence(truth, 100, rng));
    hmm::BaumWelchConfig cfg;
    cfg.n_states = 2;
    cfg.max_iters = 500;
    cfg.tol = 0.0;
    cfg.seed = 5;
    const auto r = hmm::baum_welch_fit(seqs, 3, cfg);
    double err[2] = {0.0, 0.0};
    for (std::size_t perm = 0; perm < 2; ++perm) {
        auto state = [&](std::size_t i) { return perm ? 1 - i : i; };
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                err[perm] = std::max(err[perm], std::abs(r.hmm.a(state(i), state(j)) - truth.a(i, j)));
            }
            for (hmm::Symbol o = 0; o < 3; ++o) {
                err[perm] = std::max(err[perm], std::abs(r.hmm.b(state(i), o) - truth.b(i, o)));
            }
        }
    }
    const double recovered = std::min(err[0], err[1]);
    log.note("2-state recovery from 10^4 symbols: max entrywise error over A and B " + num(recovered));
    log.require(recovered < 0.05, "transition and emission matrices recovered within 0.05");

    std::size_t runs = 0, iterations = 0;
    auto check_monotone = [&](const hmm::BaumWelchResult& res, const std::string& what) {
        ++runs;
        iterations += res.log_likelihood.size();
        for (std::size_t t = 1; t < res.log_likelihood.size(); ++t) {
            const double slack = 1e-8 * std::max(1.0, std::abs(res.log_likelihood[t]));
            if (res.log_likelihood[t] < res.log_likelihood[t - 1] - slack) {
                log.require(false, what + " log-likelihood decreased at iteration " + std::to_string(t));
                return;
            }
        }
    };
    check_monotone(r, "recovery run");
    for (int trial = 0; trial < 20; ++trial) {
        const hmm::DiscreteHMM gen = hmm::random_hmm(2 + trial % 4, 4 + trial % 12, rng);
        std::vector<std::vector<hmm::Symbol>> s;
        for (int i = 0; i < 20; ++i) s.push_back(hmm::sample_sequence(gen, 40, rng));
        hmm::BaumWelchConfig c;
        c.n_states = 1 + trial % 8;
        c.max_iters = 500;
        c.tol = 0.0;
        c.seed = rng();
        check_monotone(hmm::baum_welch_fit(s, gen.n_symbols, c), "random run " + std::to_string(trial));
    }

    // Every per-class model of a classifier trained on generated windows.
    data::GeneratorConfig g;
    g.subjects = 3;
    g.seed = 8;
    const auto split = data::split_dataset(data::generate_cohort(g));
    hmm::HmmClassifierConfig hc;
    hc.n_symbols = 32;
    hc.n_states = 5;
    hc.em_tol = 0.0;
    hc.em_iters = 500;
    hc.max_sequences_per_class = 100;
    std::vector<hmm::BaumWelchResult> logs;
    hmm::train_hmm_classifier(split.train, hc, &logs);
    for (std::size_t i = 0; i < logs.size(); ++i) check_monotone(logs[i], "class model " + std::to_string(i));
    log.note(std::to_string(runs) + " EM runs, " + std::to_string(iterations) +
             " iterations, log-likelihood never decreased beyond 1e-8 relative slack");
}

// ---------------------------------------------------------------- criterion 9

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    if (!f) return "<missing " + p.string() + ">";
    return {std::istreambuf_iterator<char>(f), {}};
}

void determinism(Log& log) {
    const fs::path root = fs::temp_directory_path() / ("hmdrec-acceptance-" + std::to_string(::getpid()));
    fs::remove_all(root);
    const fs::path run_dirs[2] = {root / "a", root / "b"};
    for (const auto& d : run_dirs) fs::create_directories(d);

    struct Step {
        std::string name;
        std::vector<std::string> args;  // "@/" expands to the run directory
        std::vector<std::string> outputs;
        std::string stdin_file;
    };
    const std::vector<Step> steps{
        {"generate", {"generate", "--out", "@/data.txt", "--subjects", "1", "--seed", "11", "--write-config", "@/gen.cfg"},
         {"data.txt", "gen.cfg"}, ""},
        {"train",
         {"train", "--data", "@/data.txt", "--out", "@/w.bin", "--epochs", "2", "--batch", "64", "--lr", "1e-3",
          "--train-stride", "8", "--seed", "3", "--report", "@/train.txt"},
         {"w.bin", "train.txt"}, ""},
        {"eval", {"eval", "--data", "@/data.txt", "--weights", "@/w.bin", "--report", "@/eval.txt", "--csv", "@/eval.csv"},
         {"eval.txt", "eval.csv"}, ""},
        {"calibrate", {"calibrate", "--data", "@/data.txt", "--weights", "@/w.bin", "--out", "@/rec.cfg"}, {"rec.cfg"}, ""},
        {"stream",
         {"stream", "--weights", "@/w.bin", "--config", "@/rec.cfg", "--input", "@/data.txt", "--out", "@/events.tsv",
          "--audit", "@/audit.csv"},
         {"events.tsv", "audit.csv"}, ""},
        {"latency",
         {"latency", "--data", "@/data.txt", "--weights", "@/w.bin", "--config", "@/rec.cfg", "--report", "@/lat.txt",
          "--csv", "@/lat.csv", "--seed", "5"},
         {"lat.txt", "lat.csv"}, ""},
        {"baseline",
         {"baseline", "--data", "@/data.txt", "--task", "head", "--streams", "AngVel", "--symbols", "8,16", "--states",
          "2,3", "--em-iters", "10", "--hmm-max-sequences", "40", "--out", "@/baseline.csv", "--seed", "2"},
         {"baseline.csv"}, ""},
        {"compare",
         {"compare", "--data", "@/data.txt", "--budget-steps", "4", "--batch", "64", "--train-stride", "16", "--symbols",
          "8", "--states", "2", "--em-iters", "5", "--hmm-max-sequences", "30", "--out", "@/compare.csv", "--seed", "4"},
         {"compare.csv"}, ""},
    };

    std::vector<std::string> stdout_of[2];
    for (std::size_t run = 0; run < 2; ++run) {
        for (const Step& step : steps) {
            std::vector<std::string> args;
            for (std::string a : step.args) {
                if (a.rfind("@/", 0) == 0) a = (run_dirs[run] / a.substr(2)).string();
                args.push_back(a);
            }
            std::istringstream in;
            std::ostringstream out, err;
            const int code = harness::run_cli(args, in, out, err);
            if (code != 0) log.require(false, step.name + " exited " + std::to_string(code) + ": " + err.str());
            stdout_of[run].push_back(out.str());
        }
    }
    std::size_t compared = 0;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        bool same = stdout_of[0][i] == stdout_of[1][i];
        for (const auto& f : steps[i].outputs) {
            same = same && slurp(run_dirs[0] / f) == slurp(run_dirs[1] / f);
            ++compared;
        }
        log.require(same, steps[i].name + " output differs between identical runs");
    }
    const std::string events = slurp(run_dirs[0] / "events.tsv");
    std::size_t samples = 0;
    for (const auto& t : data::read_dataset(run_dirs[0] / "data.txt")) samples += t.samples.size();
    log.require(static_cast<std::size_t>(std::count(events.begin(), events.end(), '\n')) == samples,
                "stream writes one line per input sample");
    log.note(std::to_string(steps.size()) + " subcommands run twice; stdout and " + std::to_string(compared) +
             " output files byte-identical");
    fs::remove_all(root);
}

// ---------------------------------------------------------------- criterion 10

template <typename E>
bool throws_as(const std::function<void()>& f) {
    try {
        f();
    } catch (const E&) {
        return true;
    } catch (...) {
        return false;
    }
    return false;
}

void formats(Log& log) {
    const model::NetworkWeights w = model::init_weights(model::NetworkConfig::two_stream(), 10);
    const std::vector<std::uint8_t> bytes = model::encode_weights(w);
    const model::NetworkWeights back = model::decode_weights(bytes);
    bool exact = back.config == w.config && model::encode_weights(back) == bytes;
    const auto pa = w.parameter_arrays();
    const auto pb = back.parameter_arrays();
    for (std::size_t a = 0; exact && a < pa.size(); ++a) {
        exact = std::equal(pa[a].begin(), pa[a].end(), pb[a].begin(), pb[a].end());
    }
    log.require(exact, "weight round trip bit-exact");

    auto corrupt = bytes;
    corrupt[0] ^= 0xff;
    log.require(throws_as<MagicMismatchError>([&] { model::decode_weights(corrupt); }), "bad magic -> MagicMismatchError");
    corrupt = bytes;
    corrupt[8] = 99;
    log.require(throws_as<VersionMismatchError>([&] { model::decode_weights(corrupt); }),
                "bad version -> VersionMismatchError");
    std::size_t truncations = 0;
    for (std::size_t cut : {std::size_t{0}, std::size_t{5}, std::size_t{12}, std::size_t{40}, bytes.size() / 2,
                            bytes.size() - 1}) {
        const std::vector<std::uint8_t> part(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(cut));
        log.require(throws_as<TruncatedFileError>([&] { model::decode_weights(part); }), "truncation at " + std::to_string(cut) + " bytes -> TruncatedFileError");
        ++truncations;
    }
    auto extended = bytes;
    extended.push_back(0);
    log.require(throws_as<LoadError>([&] { model::decode_weights(extended); }), "trailing bytes rejected");
    log.require(throws_as<TopologyMismatchError>(
                    [&] { model::decode_weights(bytes, model::NetworkConfig::single_stream()); }),
                "unexpected topology -> TopologyMismatchError");

    data::GeneratorConfig g;
    g.subjects = 1;
    g.seed = 12;
    const auto trials = data::generate_cohort(g);
    std::stringstream buf;
    data::write_dataset(trials, buf);
    const std::string text = buf.str();
    const auto read = data::read_dataset(buf);
    double worst = 0.0;
    bool meta = read.size() == trials.size();
    for (std::size_t i = 0; meta && i < trials.size(); ++i) {
        meta = read[i].label == trials[i].label && read[i].subject_id == trials[i].subject_id &&
               read[i].trial_index == trials[i].trial_index && read[i].onset == trials[i].onset &&
               read[i].samples.size() == trials[i].samples.size();
        for (std::size_t j = 0; meta && j < trials[i].samples.size(); ++j) {
            const auto a = trials[i].samples[j].fields(), b = read[i].samples[j].fields();
            for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
        }
    }
    log.require(meta && worst <= 1e-12, "dataset round trip within 1e-12 (max |diff| " + sci(worst) + ")");

    std::vector<std::string> lines;
    {
        std::istringstream in(text);
        for (std::string l; std::getline(in, l);) lines.push_back(l);
    }
    auto join = [](const std::vector<std::string>& ls) {
        std::string out;
        for (const auto& l : ls) out += l + "\n";
        return out;
    };
    auto parse_error_line = [](const std::string& bad) -> std::optional<std::size_t> {
        std::istringstream in(bad);
        try {
            data::read_dataset(in);
        } catch (const ParseError& e) {
            return e.line();
        } catch (...) {
        }
        return std::nullopt;
    };
    auto edited = lines;
    edited[2] = edited[2].substr(0, edited[2].rfind(' '));
    log.require(parse_error_line(join(edited)) == 3u, "missing field -> ParseError at line 3");
    edited = lines;
    edited[1].replace(edited[1].find("BeingIdle"), 9, "Cartwheel");
    log.require(parse_error_line(join(edited)) == 2u, "unknown class -> ParseError at line 2");
    edited = lines;
    edited[4] = "x" + edited[4].substr(1);
    log.require(parse_error_line(join(edited)) == 5u, "non-numeric field -> ParseError at line 5");
    edited = lines;
    edited.resize(lines.size() / 2);
    log.require(parse_error_line(join(edited)).has_value(), "truncated dataset -> ParseError");
    edited = lines;
    edited[0] = "# something else";
    log.require(parse_error_line(join(edited)) == 1u, "wrong header -> ParseError at line 1");
    log.note("weights " + std::to_string(bytes.size()) + " bytes, " + std::to_string(truncations) +
             " truncation points; dataset " + std::to_string(trials.size()) + " trials, max |diff| " + sci(worst));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria runner"};
    std::vector<int> only;
    CompareSettings compare;
    app.add_option("--only", only, "criteria to run (default all)")->delimiter(',');
    app.add_option("--seeds", compare.seeds, "seeds for the comparison orderings")->delimiter(',');
    app.add_option("--compare-batch", compare.batch)->capture_default_str();
    app.add_option("--compare-steps", compare.budget_steps)->capture_default_str();
    app.add_option("--compare-stride", compare.train_stride)->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::string, std::function<void(Log&)>>> criteria{
        {"gradient correctness", gradient_check},
        {"kernel oracles", kernel_oracles},
        {"shape contract", shape_contract},
        {"end-to-end training", end_to_end_training},
        {"comparison orderings", [&](Log& l) { table_orderings(l, compare); }},
        {"recognizer properties", recognizer_properties},
        {"latency harness", latency_harness},
        {"Baum-Welch", baum_welch},
        {"determinism", determinism},
        {"formats", formats},
    };
    // The latency criterion reuses the model trained for criterion 4.
    if (!only.empty() && std::find(only.begin(), only.end(), 7) != only.end() &&
        std::find(only.begin(), only.end(), 4) == only.end()) {
        only.push_back(4);
    }

    int failures = 0;
    std::vector<std::string> summary;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i + 1);
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        Log log;
        const auto t0 = std::chrono::steady_clock::now();
        std::cerr << "running criterion " << id << " (" << criteria[i].first << ")\n";
        try {
            criteria[i].second(log);
        } catch (const std::exception& e) {
            log.require(false, std::string("exception: ") + e.what());
        }
        const std::string line = std::string(log.failed() ? "FAIL" : "PASS") + "  criterion " + std::to_string(id) +
                                 ": " + criteria[i].first + " (" + num(seconds_since(t0), 1) + " s)";
        std::cout << line << '\n';
        for (const auto& l : log.lines()) std::cout << "      " << l << '\n';
        std::cout.flush();
        summary.push_back(line);
        failures += log.failed() ? 1 : 0;
    }
    std::cout << "\nsummary\n";
    for (const auto& s : summary) std::cout << s << '\n';
    return std::min(failures, 100);
}
