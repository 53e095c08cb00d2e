#include "hmdrec/nn/adam.hpp"

#include <algorithm>
#include <cmath>

#include "hmdrec/error.hpp"

namespace hmdrec::nn {

void GradientSet::zero() {
    for (auto& a : arrays) std::fill(a.begin(), a.end(), 0.0);
}

bool GradientSet::all_finite() const {
    return std::all_of(arrays.begin(), arrays.end(), [](const std::vector<double>& a) {
        return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
    });
}

AdamState::AdamState(AdamConfig cfg, const std::vector<std::size_t>& array_sizes) : config(cfg) {
    if (!(cfg.beta1 > 0.0 && cfg.beta1 < 1.0 && cfg.beta2 > 0.0 && cfg.beta2 < 1.0)) {
        throw ConfigError("adam: betas must lie in (0, 1)");
    }
    for (std::size_t n : array_sizes) {
        first_moment.emplace_back(n, 0.0);
        second_moment.emplace_back(n, 0.0);
    }
}

void adam_step(std::span<const std::span<double>> params, const GradientSet& grads, AdamState& state) {
    if (params.size() != grads.arrays.size() || params.size() != state.first_moment.size() ||
        params.size() != state.second_moment.size()) {
        throw ConfigError("adam: parameter, gradient and state array counts differ");
    }
    for (std::size_t a = 0; a < params.size(); ++a) {
        if (params[a].size() != grads.arrays[a].size() || params[a].size() != state.first_moment[a].size() ||
            params[a].size() != state.second_moment[a].size()) {
            throw ConfigError("adam: shape mismatch in array " + std::to_string(a));
        }
    }

    const AdamConfig& c = state.config;
    state.step += 1;
    const double t = static_cast<double>(state.step);
    const double bias1 = 1.0 - std::pow(c.beta1, t);
    const double bias2 = 1.0 - std::pow(c.beta2, t);
    for (std::size_t a = 0; a < params.size(); ++a) {
        std::span<double> p = params[a];
        const std::vector<double>& g = grads.arrays[a];
        std::vector<double>& m = state.first_moment[a];
        std::vector<double>& v = state.second_moment[a];
        for (std::size_t i = 0; i < p.size(); ++i) {
            m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g[i];
            v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g[i] * g[i];
            const double m_hat = m[i] / bias1;
            const double v_hat = v[i] / bias2;
            p[i] -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
        }
    }
}

}  // namespace hmdrec::nn
