#pragma once

// K-means vector quantization of per-timestep tracking vectors.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hmdrec/data/tracking.hpp"

namespace hmdrec::hmm {

using Symbol = std::uint32_t;

/// Centroids live in a standardized space: a raw vector x is mapped to
/// (x - offset) / scale before the nearest-centroid search.
struct Codebook {
    std::size_t dim = 0;
    std::vector<double> centroids;  // size() x dim, row-major
    std::vector<double> offset;     // dim, default 0
    std::vector<double> scale;      // dim, default 1

    std::size_t size() const { return dim == 0 ? 0 : centroids.size() / dim; }
    std::span<const double> centroid(std::size_t k) const { return {centroids.data() + k * dim, dim}; }
    void validate() const;
};

struct KMeansResult {
    Codebook codebook;
    std::size_t iterations = 0;
    bool converged = false;  // assignments reached a fixpoint
};

/// Lloyd's algorithm on `count x dim` row-major vectors (already in codebook
/// space), initialized from k distinct seeded random points. An empty cluster
/// is moved to the point farthest from its own centroid.
KMeansResult kmeans_fit(std::span<const double> vectors, std::size_t dim, std::size_t k, std::size_t max_iters,
                        std::uint64_t seed);

/// Index of the nearest centroid to an already standardized vector; ties go
/// to the lowest index.
Symbol nearest_centroid(const Codebook& codebook, std::span<const double> vector);

/// Symbols of standardized row-major vectors.
std::vector<Symbol> quantize_vectors(const Codebook& codebook, std::span<const double> vectors);

/// One symbol per sample, built from the selected channel groups.
/// Throws ConfigError when 3 * groups.size() differs from the codebook dimension.
std::vector<Symbol> quantize(std::span<const data::TrackingSample> samples, const Codebook& codebook,
                             std::span<const data::ChannelGroup> groups);

/// Per-dimension mean and standard deviation (1 where the spread is zero).
void fit_standardization(Codebook& codebook, std::span<const double> raw_vectors, std::size_t dim);

/// Selected channels of each sample as row-major `samples x 3*groups` vectors.
std::vector<double> timestep_vectors(std::span<const data::TrackingSample> samples,
                                     std::span<const data::ChannelGroup> groups);

}  // namespace hmdrec::hmm
