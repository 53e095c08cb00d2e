#include "hmdrec/hmm/kmeans.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "hmdrec/error.hpp"

namespace hmdrec::hmm {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double t = a[i] - b[i];
        d += t * t;
    }
    return d;
}

}  // namespace

void Codebook::validate() const {
    if (dim == 0 || centroids.empty() || centroids.size() % dim != 0) throw ConfigError("codebook: bad shape");
    if (offset.size() != dim || scale.size() != dim) throw ConfigError("codebook: standardization size mismatch");
    for (double v : centroids) {
        if (!std::isfinite(v)) throw NumericError("codebook: non-finite centroid");
    }
    for (double s : scale) {
        if (!(s > 0.0) || !std::isfinite(s)) throw ConfigError("codebook: scale must be positive");
    }
}

KMeansResult kmeans_fit(std::span<const double> vectors, std::size_t dim, std::size_t k, std::size_t max_iters,
                        std::uint64_t seed) {
    if (dim == 0 || vectors.size() % dim != 0) throw ConfigError("kmeans: data is not a whole number of vectors");
    const std::size_t n = vectors.size() / dim;
    if (n == 0) throw ConfigError("kmeans: no vectors");
    if (k == 0) throw ConfigError("kmeans: k must be >= 1");
    if (k > n) throw ConfigError("kmeans: k = " + std::to_string(k) + " exceeds " + std::to_string(n) + " vectors");
    for (double v : vectors) {
        if (!std::isfinite(v)) throw NumericError("kmeans: non-finite input");
    }
    auto point = [&](std::size_t i) { return vectors.subspan(i * dim, dim); };

    KMeansResult result;
    Codebook& cb = result.codebook;
    cb.dim = dim;
    cb.offset.assign(dim, 0.0);
    cb.scale.assign(dim, 1.0);
    cb.centroids.resize(k * dim);

    // k distinct indices by a partial Fisher-Yates shuffle.
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(order[i], order[pick(rng)]);
        const auto p = point(order[i]);
        std::copy(p.begin(), p.end(), cb.centroids.begin() + static_cast<std::ptrdiff_t>(i * dim));
    }

    std::vector<std::size_t> assign(n, k);
    std::vector<double> sums(k * dim);
    std::vector<std::size_t> counts(k);
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            const Symbol s = nearest_centroid(cb, point(i));
            if (s != assign[i]) {
                assign[i] = s;
                changed = true;
            }
        }
        result.iterations = iter + 1;
        if (!changed) {
            result.converged = true;
            break;
        }
        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto p = point(i);
            for (std::size_t d = 0; d < dim; ++d) sums[assign[i] * dim + d] += p[d];
            ++counts[assign[i]];
        }
        std::vector<bool> taken(n, false);
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] > 0) {
                for (std::size_t d = 0; d < dim; ++d) {
                    cb.centroids[c * dim + d] = sums[c * dim + d] / static_cast<double>(counts[c]);
                }
                continue;
            }
            std::size_t far = n;
            double best = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (taken[i]) continue;
                const double d = squared_distance(point(i), cb.centroid(assign[i]));
                if (d > best) {
                    best = d;
                    far = i;
                }
            }
            taken[far] = true;
            const auto p = point(far);
            std::copy(p.begin(), p.end(), cb.centroids.begin() + static_cast<std::ptrdiff_t>(c * dim));
        }
    }
    return result;
}

Symbol nearest_centroid(const Codebook& codebook, std::span<const double> vector) {
    Symbol best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < codebook.size(); ++c) {
        const double d = squared_distance(vector, codebook.centroid(c));
        if (d < best_d) {
            best_d = d;
            best = static_cast<Symbol>(c);
        }
    }
    return best;
}

std::vector<Symbol> quantize_vectors(const Codebook& codebook, std::span<const double> vectors) {
    if (codebook.dim == 0 || vectors.size() % codebook.dim != 0) {
        throw ConfigError("quantize: vector size does not match codebook dimension");
    }
    std::vector<Symbol> out(vectors.size() / codebook.dim);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = nearest_centroid(codebook, vectors.subspan(i * codebook.dim, codebook.dim));
    }
    return out;
}

std::vector<double> timestep_vectors(std::span<const data::TrackingSample> samples,
                                     std::span<const data::ChannelGroup> groups) {
    const std::size_t dim = 3 * groups.size();
    std::vector<double> out(samples.size() * dim);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        for (std::size_t g = 0; g < groups.size(); ++g) {
            const auto& v = data::channel_values(samples[i], groups[g]);
            for (std::size_t a = 0; a < 3; ++a) out[i * dim + 3 * g + a] = v[a];
        }
    }
    return out;
}

std::vector<Symbol> quantize(std::span<const data::TrackingSample> samples, const Codebook& codebook,
                             std::span<const data::ChannelGroup> groups) {
    if (3 * groups.size() != codebook.dim) {
        throw ConfigError("quantize: selected streams have " + std::to_string(3 * groups.size()) +
                          " channels but the codebook has dimension " + std::to_string(codebook.dim));
    }
    std::vector<double> v = timestep_vectors(samples, groups);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::size_t d = i % codebook.dim;
        v[i] = (v[i] - codebook.offset[d]) / codebook.scale[d];
    }
    return quantize_vectors(codebook, v);
}

void fit_standardization(Codebook& codebook, std::span<const double> raw_vectors, std::size_t dim) {
    if (dim == 0 || raw_vectors.empty() || raw_vectors.size() % dim != 0) {
        throw ConfigError("standardization: bad input shape");
    }
    const std::size_t n = raw_vectors.size() / dim;
    codebook.offset.assign(dim, 0.0);
    codebook.scale.assign(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < dim; ++d) codebook.offset[d] += raw_vectors[i * dim + d];
    }
    for (double& m : codebook.offset) m /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < dim; ++d) {
            const double t = raw_vectors[i * dim + d] - codebook.offset[d];
            codebook.scale[d] += t * t;
        }
    }
    for (double& s : codebook.scale) {
        s = std::sqrt(s / static_cast<double>(n));
        if (!(s > 0.0)) s = 1.0;
    }
}

}  // namespace hmdrec::hmm
