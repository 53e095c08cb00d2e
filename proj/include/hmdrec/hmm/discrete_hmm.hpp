#pragma once

// Discrete-observation hidden Markov model with scaled forward-backward
// Baum-Welch training.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "hmdrec/hmm/kmeans.hpp"

namespace hmdrec::hmm {

struct DiscreteHMM {
    std::size_t n_states = 0;
    std::size_t n_symbols = 0;
    std::vector<double> initial;     // N
    std::vector<double> transition;  // N x N, row-major, rows sum to 1
    std::vector<double> emission;    // N x K, row-major, rows sum to 1

    double a(std::size_t i, std::size_t j) const { return transition[i * n_states + j]; }
    double b(std::size_t i, Symbol o) const { return emission[i * n_symbols + o]; }

    /// Throws NumericError unless every distribution is non-negative and sums to 1 within `tol`.
    void validate(double tol = 1e-9) const;
};

/// Uniform initial distribution; transition and emission rows drawn from a
/// flat Dirichlet.
DiscreteHMM random_hmm(std::size_t n_states, std::size_t n_symbols, std::mt19937_64& rng);

/// Draws a state path and its observations.
std::vector<Symbol> sample_sequence(const DiscreteHMM& hmm, std::size_t length, std::mt19937_64& rng);

/// log P(sequence | hmm) by the scaled forward recursion. Throws ConfigError
/// for an empty sequence or a symbol outside the alphabet.
double forward_loglik(const DiscreteHMM& hmm, std::span<const Symbol> sequence);

struct BaumWelchConfig {
    std::size_t n_states = 5;
    std::size_t max_iters = 500;
    /// Stop once an iteration improves the total log-likelihood by less than
    /// this; 0 runs every iteration.
    double tol = 1e-2;
    double emission_floor = 1e-10;
    std::uint64_t seed = 1;
};

struct BaumWelchResult {
    DiscreteHMM hmm;
    /// Total log-likelihood of the parameters entering each iteration.
    std::vector<double> log_likelihood;
    bool converged = false;
};

/// EM over all sequences. Throws NumericError if an iteration lowers the
/// log-likelihood by more than 1e-8 * max(1, |LL|).
BaumWelchResult baum_welch_fit(std::span<const std::vector<Symbol>> sequences, std::size_t n_symbols,
                               const BaumWelchConfig& config);

/// Same, starting from given parameters.
BaumWelchResult baum_welch_fit(std::span<const std::vector<Symbol>> sequences, DiscreteHMM start,
                               const BaumWelchConfig& config);

}  // namespace hmdrec::hmm
