#include "hmdrec/hmm/classifier.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <tuple>

#include "hmdrec/error.hpp"
#include "hmdrec/seed.hpp"

namespace hmdrec::hmm {

namespace {

auto trial_key(const data::Trial& t) { return std::make_tuple(t.subject_id, model::index_of(t.label), t.trial_index); }

std::vector<const data::Window*> canonical(std::span<const data::Window> windows) {
    std::vector<const data::Window*> out;
    out.reserve(windows.size());
    for (const auto& w : windows) out.push_back(&w);
    std::stable_sort(out.begin(), out.end(), [](const data::Window* a, const data::Window* b) {
        return std::make_tuple(trial_key(a->trial()), a->start()) < std::make_tuple(trial_key(b->trial()), b->start());
    });
    return out;
}

template <typename T>
std::vector<T> thin(const std::vector<T>& items, std::size_t limit) {
    if (items.size() <= limit) return items;
    std::vector<T> out;
    out.reserve(limit);
    for (std::size_t i = 0; i < limit; ++i) out.push_back(items[i * items.size() / limit]);
    return out;
}

}  // namespace

void HmmClassifierConfig::validate() const {
    if (groups.empty()) throw ConfigError("hmm classifier: no channel groups selected");
    if (n_symbols == 0 || n_states == 0) throw ConfigError("hmm classifier: K and N must be >= 1");
    if (window_stride == 0 || max_sequences_per_class == 0 || kmeans_max_points == 0) {
        throw ConfigError("hmm classifier: stride and caps must be >= 1");
    }
}

Codebook fit_codebook(std::span<const data::Window> train, const HmmClassifierConfig& config) {
    config.validate();
    if (train.empty()) throw ConfigError("hmm classifier: no training windows");
    std::map<std::tuple<int, int, int>, const data::Trial*> trials;
    for (const auto& w : train) trials.emplace(trial_key(w.trial()), &w.trial());

    std::vector<data::TrackingSample> samples;
    for (const auto& [key, trial] : trials) samples.insert(samples.end(), trial->samples.begin(), trial->samples.end());
    samples = thin(samples, config.kmeans_max_points);

    const std::size_t dim = 3 * config.groups.size();
    const std::vector<double> raw = timestep_vectors(samples, config.groups);
    Codebook scaling;
    fit_standardization(scaling, raw, dim);
    std::vector<double> standardized(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        standardized[i] = (raw[i] - scaling.offset[i % dim]) / scaling.scale[i % dim];
    }
    Codebook cb = kmeans_fit(standardized, dim, config.n_symbols, config.kmeans_iters,
                             derive_seed(config.seed, {0x6b6d65616e73ULL, config.n_symbols}))
                      .codebook;
    cb.offset = scaling.offset;
    cb.scale = scaling.scale;
    return cb;
}

HMMClassifier train_hmm_classifier(std::span<const data::Window> train, const HmmClassifierConfig& config,
                                   std::vector<BaumWelchResult>* em_logs) {
    return train_hmm_classifier(train, fit_codebook(train, config), config, em_logs);
}

HMMClassifier train_hmm_classifier(std::span<const data::Window> train, Codebook codebook,
                                   const HmmClassifierConfig& config, std::vector<BaumWelchResult>* em_logs) {
    config.validate();
    codebook.validate();
    if (train.empty()) throw ConfigError("hmm classifier: no training windows");
    if (codebook.dim != 3 * config.groups.size()) throw ConfigError("hmm classifier: codebook dimension mismatch");

    std::vector<std::vector<const data::Window*>> by_class(model::kNumClasses);
    for (const data::Window* w : canonical(train)) {
        by_class[static_cast<std::size_t>(model::index_of(w->label()))].push_back(w);
    }

    HMMClassifier clf;
    clf.groups = config.groups;
    clf.codebook = std::move(codebook);
    if (em_logs) em_logs->clear();
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        if (by_class[c].empty()) continue;
        std::vector<const data::Window*> strided;
        for (std::size_t i = 0; i < by_class[c].size(); i += config.window_stride) strided.push_back(by_class[c][i]);
        strided = thin(strided, config.max_sequences_per_class);

        std::vector<std::vector<Symbol>> sequences;
        sequences.reserve(strided.size());
        for (const data::Window* w : strided) sequences.push_back(quantize(w->samples(), clf.codebook, clf.groups));

        BaumWelchConfig em;
        em.n_states = config.n_states;
        em.max_iters = config.em_iters;
        em.tol = config.em_tol;
        em.seed = derive_seed(config.seed, {0x686d6dULL, c, config.n_symbols, config.n_states});
        BaumWelchResult fit = baum_welch_fit(sequences, config.n_symbols, em);
        clf.classes.push_back(model::label_at(c));
        clf.models.push_back(fit.hmm);
        if (em_logs) em_logs->push_back(std::move(fit));
    }
    return clf;
}

ClassLabel hmm_classify(const HMMClassifier& classifier, const data::Window& window) {
    if (classifier.models.empty()) throw ConfigError("hmm_classify: classifier has no models");
    const std::vector<Symbol> seq = quantize(window.samples(), classifier.codebook, classifier.groups);
    std::size_t best = 0;
    double best_ll = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < classifier.models.size(); ++i) {
        const double ll = forward_loglik(classifier.models[i], seq);
        if (ll > best_ll) {
            best_ll = ll;
            best = i;
        }
    }
    return classifier.classes[best];
}

double hmm_accuracy(const HMMClassifier& classifier, std::span<const data::Window> windows) {
    if (windows.empty()) throw ConfigError("hmm_accuracy: no windows");
    std::size_t correct = 0;
    for (const auto& w : windows) correct += hmm_classify(classifier, w) == w.label() ? 1 : 0;
    return static_cast<double>(correct) / static_cast<double>(windows.size());
}

SweepResult sweep(std::span<const data::Window> train, std::span<const data::Window> eval,
                  const HmmClassifierConfig& base, std::span<const std::size_t> symbol_grid,
                  std::span<const std::size_t> state_grid) {
    if (symbol_grid.empty() || state_grid.empty()) throw ConfigError("sweep: empty grid");
    SweepResult r;
    bool have_best = false;
    for (std::size_t k : symbol_grid) {
        HmmClassifierConfig cfg = base;
        cfg.n_symbols = k;
        const Codebook cb = fit_codebook(train, cfg);
        for (std::size_t n : state_grid) {
            cfg.n_states = n;
            const HMMClassifier clf = train_hmm_classifier(train, cb, cfg);
            const SweepCell cell{k, n, hmm_accuracy(clf, eval)};
            r.cells.push_back(cell);
            if (!have_best || cell.accuracy > r.best.accuracy) {
                r.best = cell;
                have_best = true;
            }
        }
    }
    return r;
}

}  // namespace hmdrec::hmm
