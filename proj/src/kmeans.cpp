#include "fsp/kmeans.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>

#include "fsp/rng.hpp"

namespace fsp {

namespace {

double dist2(const double* a, const double* b, std::size_t d) {
    double s = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
        const double diff = a[c] - b[c];
        s += diff * diff;
    }
    return s;
}

struct RunResult {
    std::vector<double> centroids;
    double inertia = std::numeric_limits<double>::infinity();
    std::uint32_t iterations = 0;
};

RunResult lloyd_run(const double* pts, std::size_t n, std::size_t d,
                    std::uint32_t k, std::mt19937_64 eng,
                    const KMeansParams& params, std::vector<double>* trace) {
    // Forgy: k distinct point indices.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::uint32_t j = 0; j < k; ++j) {
        const std::size_t pick = j + rng::uniform_below(eng, n - j);
        std::swap(order[j], order[pick]);
    }
    RunResult run;
    run.centroids.resize(std::size_t{k} * d);
    for (std::uint32_t j = 0; j < k; ++j) {
        const double* src = pts + order[j] * d;
        std::copy(src, src + d, run.centroids.data() + std::size_t{j} * d);
    }

    std::vector<std::size_t> labels(n, 0);
    std::vector<std::size_t> counts(k, 0);
    std::vector<double> next(std::size_t{k} * d);
    std::vector<double> point_d2(n, 0.0);
    double prev_step = std::numeric_limits<double>::infinity();

    for (std::uint32_t iter = 1; iter <= params.max_iter; ++iter) {
        run.iterations = iter;

        // Assignment step.
        std::fill(counts.begin(), counts.end(), std::size_t{0});
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double best_d = dist2(pts + i * d, run.centroids.data(), d);
            for (std::uint32_t j = 1; j < k; ++j) {
                const double dj =
                    dist2(pts + i * d, run.centroids.data() + std::size_t{j} * d, d);
                if (dj < best_d) {
                    best_d = dj;
                    best = j;
                }
            }
            labels[i] = best;
            point_d2[i] = best_d;
            ++counts[best];
        }

        // Reseed empty clusters to the point currently farthest from its
        // assigned centroid.
        for (std::uint32_t j = 0; j < k; ++j) {
            if (counts[j] != 0) continue;
            std::size_t far = 0;
            for (std::size_t i = 1; i < n; ++i) {
                if (point_d2[i] > point_d2[far]) far = i;
            }
            const double* src = pts + far * d;
            std::copy(src, src + d, run.centroids.data() + std::size_t{j} * d);
            --counts[labels[far]];
            labels[far] = j;
            counts[j] = 1;
            point_d2[far] = 0.0;
        }

        double after_assign = 0.0;
        for (std::size_t i = 0; i < n; ++i) after_assign += point_d2[i];
        assert(after_assign <= prev_step * (1 + 1e-12) + 1e-12);
        if (trace) trace->push_back(after_assign);

        // Update step: centroid = mean of assigned points.
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double* src = pts + i * d;
            double* dst = next.data() + labels[i] * d;
            for (std::size_t c = 0; c < d; ++c) dst[c] += src[c];
        }
        double movement2 = 0.0;
        for (std::uint32_t j = 0; j < k; ++j) {
            double* dst = next.data() + std::size_t{j} * d;
            const double inv = 1.0 / static_cast<double>(counts[j]);
            for (std::size_t c = 0; c < d; ++c) dst[c] *= inv;
            movement2 = std::max(
                movement2, dist2(dst, run.centroids.data() + std::size_t{j} * d, d));
        }
        run.centroids.swap(next);

        double after_update = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            after_update +=
                dist2(pts + i * d, run.centroids.data() + labels[i] * d, d);
        }
        assert(after_update <= after_assign * (1 + 1e-12) + 1e-12);
        if (trace) trace->push_back(after_update);
        prev_step = after_update;

        if (std::sqrt(movement2) < params.tol) break;
    }

    // Inertia against the final centroids.
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double best = dist2(pts + i * d, run.centroids.data(), d);
        for (std::uint32_t j = 1; j < k; ++j) {
            best = std::min(
                best, dist2(pts + i * d, run.centroids.data() + std::size_t{j} * d, d));
        }
        total += best;
    }
    run.inertia = total;
    return run;
}

} // namespace

KMeansModel fit_kmeans(std::span<const double> points, std::size_t dim,
                       std::uint32_t k, std::uint64_t seed,
                       const KMeansParams& params, KMeansTrace* trace) {
    if (dim == 0 || points.size() % dim != 0) {
        throw DimensionError("fit_kmeans: point buffer size " +
                             std::to_string(points.size()) +
                             " is not a multiple of dim " + std::to_string(dim));
    }
    const std::size_t n = points.size() / dim;
    if (k == 0) throw DataError("fit_kmeans: k must be >= 1");
    if (n < k) {
        throw DataError("fit_kmeans: " + std::to_string(n) + " points < k = " +
                        std::to_string(k));
    }
    for (const double v : points) {
        if (!std::isfinite(v)) {
            throw DataError("fit_kmeans: non-finite input value");
        }
    }
    if (params.restarts == 0 || params.max_iter == 0) {
        throw DataError("fit_kmeans: restarts and max_iter must be >= 1");
    }

    std::vector<RunResult> results(params.restarts);
    if (trace) trace->restart_inertia.assign(params.restarts, {});

    const auto restarts = static_cast<std::int64_t>(params.restarts);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t r = 0; r < restarts; ++r) {
        results[r] = lloyd_run(points.data(), n, dim, k,
                               rng::make_engine(seed, std::uint64_t(r)), params,
                               trace ? &trace->restart_inertia[r] : nullptr);
    }

    std::size_t best = 0;
    for (std::size_t r = 1; r < results.size(); ++r) {
        if (results[r].inertia < results[best].inertia) best = r;
    }

    KMeansModel model;
    model.k = k;
    model.dim = dim;
    model.centroids = std::move(results[best].centroids);
    model.inertia = results[best].inertia;
    model.iterations_run = results[best].iterations;
    model.seed = seed;
    return model;
}

std::size_t assign(const KMeansModel& model, std::span<const double> point) {
    if (point.size() != model.dim) {
        throw DimensionError("assign: point dim " + std::to_string(point.size()) +
                             " != model dim " + std::to_string(model.dim));
    }
    std::size_t best = 0;
    double best_d = dist2(point.data(), model.centroid(0), model.dim);
    for (std::uint32_t j = 1; j < model.k; ++j) {
        const double dj = dist2(point.data(), model.centroid(j), model.dim);
        if (dj < best_d) {
            best_d = dj;
            best = j;
        }
    }
    return best;
}

double inertia(const KMeansModel& model, std::span<const double> points) {
    if (model.dim == 0 || points.size() % model.dim != 0) {
        throw DimensionError("inertia: point buffer size " +
                             std::to_string(points.size()) +
                             " is not a multiple of model dim " +
                             std::to_string(model.dim));
    }
    const std::size_t n = points.size() / model.dim;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* x = points.data() + i * model.dim;
        double best = dist2(x, model.centroid(0), model.dim);
        for (std::uint32_t j = 1; j < model.k; ++j) {
            best = std::min(best, dist2(x, model.centroid(j), model.dim));
        }
        total += best;
    }
    return total;
}

} // namespace fsp
