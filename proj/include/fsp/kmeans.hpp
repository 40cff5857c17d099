#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fsp/errors.hpp"

namespace fsp {

struct KMeansModel {
    std::uint32_t k = 0;
    std::size_t dim = 0;
    std::vector<double> centroids; // k x dim, row-major
    double inertia = 0.0;
    std::uint32_t iterations_run = 0;
    std::uint64_t seed = 0;

    const double* centroid(std::size_t j) const {
        return centroids.data() + j * dim;
    }
};

struct KMeansParams {
    std::uint32_t restarts = 10;
    std::uint32_t max_iter = 300;
    double tol = 1e-9;
};

/// Per-iteration objective values of every restart, in step order
/// (after-assignment, after-update, ...). Within a run the sequence never
/// increases; the tests assert it.
struct KMeansTrace {
    std::vector<std::vector<double>> restart_inertia;
};

/// Lloyd's algorithm with Forgy initialization (k distinct points sampled
/// without replacement), empty clusters reseeded to the point farthest from
/// its assigned centroid, best inertia kept over seeded restarts (ties
/// resolved to the lowest restart index). Deterministic for fixed
/// (points, k, seed, params) regardless of thread count.
KMeansModel fit_kmeans(std::span<const double> points, std::size_t dim,
                       std::uint32_t k, std::uint64_t seed,
                       const KMeansParams& params = {},
                       KMeansTrace* trace = nullptr);

/// Nearest centroid by squared Euclidean distance; ties break to the
/// lowest index.
std::size_t assign(const KMeansModel& model, std::span<const double> point);

/// Sum over points of the squared distance to the nearest centroid.
double inertia(const KMeansModel& model, std::span<const double> points);

} // namespace fsp
