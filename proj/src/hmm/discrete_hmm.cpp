#include "hmdrec/hmm/discrete_hmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hmdrec/error.hpp"

namespace hmdrec::hmm {

namespace {

void check_row(std::span<const double> row, double tol, const char* what) {
    double sum = 0.0;
    for (double v : row) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw NumericError(std::string("hmm: negative or non-finite ") + what);
        sum += v;
    }
    if (std::abs(sum - 1.0) > tol) throw NumericError(std::string("hmm: ") + what + " row does not sum to 1");
}

void check_symbols(std::span<const Symbol> seq, std::size_t n_symbols) {
    for (Symbol s : seq) {
        if (s >= n_symbols) {
            throw ConfigError("hmm: symbol " + std::to_string(s) + " outside alphabet of " + std::to_string(n_symbols));
        }
    }
}

void flat_dirichlet(std::span<double> row, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double sum = 0.0;
    for (double& v : row) {
        v = -std::log(1.0 - u(rng));  // Exp(1); 1 - u lies in (0, 1]
        sum += v;
    }
    if (!(sum > 0.0)) {
        std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(row.size()));
        return;
    }
    for (double& v : row) v /= sum;
}

// Sufficient statistics of one E-step.
struct Stats {
    std::vector<double> initial, transition, emission, occupancy;
    double log_likelihood = 0.0;
};

void accumulate(const DiscreteHMM& h, std::span<const Symbol> seq, Stats& st, std::vector<double>& alpha,
                std::vector<double>& beta, std::vector<double>& scale) {
    const std::size_t n = h.n_states;
    const std::size_t t_len = seq.size();
    alpha.assign(t_len * n, 0.0);
    beta.assign(t_len * n, 0.0);
    scale.assign(t_len, 0.0);

    for (std::size_t i = 0; i < n; ++i) alpha[i] = h.initial[i] * h.b(i, seq[0]);
    for (std::size_t t = 0;; ++t) {
        double c = 0.0;
        for (std::size_t i = 0; i < n; ++i) c += alpha[t * n + i];
        if (!(c > 0.0) || !std::isfinite(c)) throw NumericError("hmm: forward probability underflow");
        scale[t] = c;
        for (std::size_t i = 0; i < n; ++i) alpha[t * n + i] /= c;
        st.log_likelihood += std::log(c);
        if (t + 1 == t_len) break;
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += alpha[t * n + i] * h.a(i, j);
            alpha[(t + 1) * n + j] = s * h.b(j, seq[t + 1]);
        }
    }

    for (std::size_t i = 0; i < n; ++i) beta[(t_len - 1) * n + i] = 1.0;
    for (std::size_t t = t_len - 1; t-- > 0;) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += h.a(i, j) * h.b(j, seq[t + 1]) * beta[(t + 1) * n + j];
            beta[t * n + i] = s / scale[t + 1];
        }
    }

    for (std::size_t t = 0; t < t_len; ++t) {
        for (std::size_t i = 0; i < n; ++i) {
            const double g = alpha[t * n + i] * beta[t * n + i];
            if (t == 0) st.initial[i] += g;
            st.emission[i * h.n_symbols + seq[t]] += g;
            if (t + 1 < t_len) st.occupancy[i] += g;
        }
        if (t + 1 == t_len) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const double ai = alpha[t * n + i] / scale[t + 1];
            for (std::size_t j = 0; j < n; ++j) {
                st.transition[i * n + j] += ai * h.a(i, j) * h.b(j, seq[t + 1]) * beta[(t + 1) * n + j];
            }
        }
    }
}

}  // namespace

void DiscreteHMM::validate(double tol) const {
    if (n_states == 0 || n_symbols == 0) throw ConfigError("hmm: needs at least one state and one symbol");
    if (initial.size() != n_states || transition.size() != n_states * n_states ||
        emission.size() != n_states * n_symbols) {
        throw ConfigError("hmm: parameter sizes do not match N and K");
    }
    check_row(initial, tol, "initial");
    for (std::size_t i = 0; i < n_states; ++i) {
        check_row(std::span(transition).subspan(i * n_states, n_states), tol, "transition");
        check_row(std::span(emission).subspan(i * n_symbols, n_symbols), tol, "emission");
    }
}

DiscreteHMM random_hmm(std::size_t n_states, std::size_t n_symbols, std::mt19937_64& rng) {
    if (n_states == 0 || n_symbols == 0) throw ConfigError("hmm: needs at least one state and one symbol");
    DiscreteHMM h;
    h.n_states = n_states;
    h.n_symbols = n_symbols;
    h.initial.assign(n_states, 1.0 / static_cast<double>(n_states));
    h.transition.resize(n_states * n_states);
    h.emission.resize(n_states * n_symbols);
    for (std::size_t i = 0; i < n_states; ++i) {
        flat_dirichlet(std::span(h.transition).subspan(i * n_states, n_states), rng);
    }
    for (std::size_t i = 0; i < n_states; ++i) {
        flat_dirichlet(std::span(h.emission).subspan(i * n_symbols, n_symbols), rng);
    }
    return h;
}

std::vector<Symbol> sample_sequence(const DiscreteHMM& hmm, std::size_t length, std::mt19937_64& rng) {
    hmm.validate(1e-6);
    std::vector<Symbol> out;
    out.reserve(length);
    auto draw = [&](std::span<const double> p) {
        std::discrete_distribution<std::size_t> d(p.begin(), p.end());
        return d(rng);
    };
    if (length == 0) return out;
    std::size_t state = draw(hmm.initial);
    for (std::size_t t = 0; t < length; ++t) {
        out.push_back(static_cast<Symbol>(draw(std::span(hmm.emission).subspan(state * hmm.n_symbols, hmm.n_symbols))));
        state = draw(std::span(hmm.transition).subspan(state * hmm.n_states, hmm.n_states));
    }
    return out;
}

double forward_loglik(const DiscreteHMM& hmm, std::span<const Symbol> sequence) {
    if (sequence.empty()) throw ConfigError("forward_loglik: empty sequence");
    check_symbols(sequence, hmm.n_symbols);
    const std::size_t n = hmm.n_states;
    std::vector<double> alpha(n), next(n);
    for (std::size_t i = 0; i < n; ++i) alpha[i] = hmm.initial[i] * hmm.b(i, sequence[0]);
    double ll = 0.0;
    for (std::size_t t = 0;; ++t) {
        double c = 0.0;
        for (double v : alpha) c += v;
        if (!(c > 0.0)) return -std::numeric_limits<double>::infinity();
        for (double& v : alpha) v /= c;
        ll += std::log(c);
        if (t + 1 == sequence.size()) break;
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += alpha[i] * hmm.a(i, j);
            next[j] = s * hmm.b(j, sequence[t + 1]);
        }
        alpha.swap(next);
    }
    return ll;
}

BaumWelchResult baum_welch_fit(std::span<const std::vector<Symbol>> sequences, std::size_t n_symbols,
                               const BaumWelchConfig& config) {
    std::mt19937_64 rng(config.seed);
    return baum_welch_fit(sequences, random_hmm(config.n_states, n_symbols, rng), config);
}

BaumWelchResult baum_welch_fit(std::span<const std::vector<Symbol>> sequences, DiscreteHMM start,
                               const BaumWelchConfig& config) {
    if (sequences.empty()) throw ConfigError("baum_welch: no training sequences");
    start.validate(1e-6);
    for (const auto& s : sequences) {
        if (s.empty()) throw ConfigError("baum_welch: empty training sequence");
        check_symbols(s, start.n_symbols);
    }
    if (!(config.emission_floor >= 0.0) || !(config.tol >= 0.0)) throw ConfigError("baum_welch: bad floor or tol");

    BaumWelchResult r;
    r.hmm = std::move(start);
    DiscreteHMM& h = r.hmm;
    const std::size_t n = h.n_states;
    const std::size_t k = h.n_symbols;
    std::vector<double> alpha, beta, scale;

    for (std::size_t iter = 0; iter < config.max_iters; ++iter) {
        Stats st;
        st.initial.assign(n, 0.0);
        st.transition.assign(n * n, 0.0);
        st.emission.assign(n * k, 0.0);
        st.occupancy.assign(n, 0.0);
        for (const auto& s : sequences) accumulate(h, s, st, alpha, beta, scale);

        const double ll = st.log_likelihood;
        if (!r.log_likelihood.empty()) {
            const double prev = r.log_likelihood.back();
            if (ll < prev - 1e-8 * std::max(1.0, std::abs(prev))) {
                throw NumericError("baum_welch: log-likelihood fell from " + std::to_string(prev) + " to " +
                                   std::to_string(ll) + " at iteration " + std::to_string(iter));
            }
            r.log_likelihood.push_back(ll);
            if (config.tol > 0.0 && ll - prev < config.tol) {
                r.converged = true;
                break;
            }
        } else {
            r.log_likelihood.push_back(ll);
        }

        const double n_seq = static_cast<double>(sequences.size());
        for (std::size_t i = 0; i < n; ++i) h.initial[i] = st.initial[i] / n_seq;
        for (std::size_t i = 0; i < n; ++i) {
            if (st.occupancy[i] > 0.0) {
                double sum = 0.0;
                for (std::size_t j = 0; j < n; ++j) sum += st.transition[i * n + j];
                if (sum > 0.0) {
                    for (std::size_t j = 0; j < n; ++j) h.transition[i * n + j] = st.transition[i * n + j] / sum;
                }
            }
            double total = 0.0;
            for (std::size_t o = 0; o < k; ++o) total += st.emission[i * k + o];
            if (total > 0.0) {
                double sum = 0.0;
                for (std::size_t o = 0; o < k; ++o) {
                    double& e = h.emission[i * k + o];
                    e = std::max(st.emission[i * k + o] / total, config.emission_floor);
                    sum += e;
                }
                for (std::size_t o = 0; o < k; ++o) h.emission[i * k + o] /= sum;
            }
        }
        double pi_sum = 0.0;
        for (double p : h.initial) pi_sum += p;
        for (double& p : h.initial) p /= pi_sum;
    }
    return r;
}

}  // namespace hmdrec::hmm
