#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hmdrec::nn {

/// One gradient array per learnable parameter array, in the owner's declared order.
struct GradientSet {
    std::vector<std::vector<double>> arrays;

    void zero();
    bool all_finite() const;
};

struct AdamConfig {
    double learning_rate = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Moment estimates laid out like the parameter arrays they track.
struct AdamState {
    AdamConfig config;
    std::uint64_t step = 0;
    std::vector<std::vector<double>> first_moment;
    std::vector<std::vector<double>> second_moment;

    AdamState() = default;
    AdamState(AdamConfig cfg, const std::vector<std::size_t>& array_sizes);
};

/// Bias-corrected Adam update of every parameter array; increments state.step.
void adam_step(std::span<const std::span<double>> params, const GradientSet& grads, AdamState& state);

}  // namespace hmdrec::nn
