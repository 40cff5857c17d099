#include "fsp/pca.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "fsp/kernels.hpp"

namespace fsp {

namespace {

// Flip the row so its largest-magnitude entry (first occurrence) is positive.
void fix_sign(double* row, std::size_t p) {
    std::size_t arg = 0;
    double best = 0.0;
    for (std::size_t c = 0; c < p; ++c) {
        if (std::fabs(row[c]) > best) {
            best = std::fabs(row[c]);
            arg = c;
        }
    }
    if (row[arg] < 0.0) {
        for (std::size_t c = 0; c < p; ++c) row[c] = -row[c];
    }
}

// Deterministic unit vector orthogonal to the first `filled` rows of
// `components`, used when the data rank is below n_components.
void fill_null_component(std::vector<double>& components, std::size_t filled,
                         std::size_t p, double* out) {
    for (std::size_t basis = 0; basis < p; ++basis) {
        for (std::size_t c = 0; c < p; ++c) out[c] = 0.0;
        out[basis] = 1.0;
        for (std::size_t m = 0; m < filled; ++m) {
            const double* w = components.data() + m * p;
            const double proj = w[basis]; // <e_basis, w>
            for (std::size_t c = 0; c < p; ++c) out[c] -= proj * w[c];
        }
        double norm2 = 0.0;
        for (std::size_t c = 0; c < p; ++c) norm2 += out[c] * out[c];
        if (norm2 > 0.5) {
            const double inv = 1.0 / std::sqrt(norm2);
            for (std::size_t c = 0; c < p; ++c) out[c] *= inv;
            return;
        }
    }
    throw DataError("fit_pca: cannot complete orthonormal basis");
}

} // namespace

PcaModel fit_pca(const FeatureMatrix& X, std::size_t n_components) {
    const std::size_t n = X.rows;
    const std::size_t p = X.cols;
    if (n < 2) {
        throw DataError("fit_pca: need at least 2 samples, got " +
                        std::to_string(n));
    }
    if (n_components < 1 || n_components > std::min(n - 1, p)) {
        throw DataError("fit_pca: n_components " + std::to_string(n_components) +
                        " out of range [1, " + std::to_string(std::min(n - 1, p)) +
                        "]");
    }

    PcaModel model;
    model.dim = p;
    model.n_components = n_components;
    model.mean = kernels::column_means(X.data.data(), n, p);

    std::vector<double> centered(n * p);
    kernels::center_rows(X.data.data(), n, p, model.mean.data(), centered.data());

    std::vector<double> gram(n * n);
    kernels::gram(centered.data(), n, p, gram.data());

    Eigen::Map<const Eigen::MatrixXd> G(gram.data(), n, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    if (es.info() != Eigen::Success) {
        throw DataError("fit_pca: eigendecomposition failed");
    }
    // Ascending order from Eigen; consume from the back.
    const Eigen::VectorXd& evals = es.eigenvalues();
    const Eigen::MatrixXd& evecs = es.eigenvectors();

    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += gram[i * n + i];
    const double total_variance = std::max(trace, 0.0) / double(n - 1);
    const double rank_eps = 1e-12 * std::max(std::fabs(evals(n - 1)), 1.0);

    model.components.assign(n_components * p, 0.0);
    model.explained_variance.resize(n_components);
    model.explained_variance_ratio.resize(n_components);

    for (std::size_t i = 0; i < n_components; ++i) {
        const double lambda = std::max(evals(Eigen::Index(n - 1 - i)), 0.0);
        model.explained_variance[i] = lambda / double(n - 1);
        model.explained_variance_ratio[i] =
            total_variance > 0.0 ? model.explained_variance[i] / total_variance
                                 : 0.0;
        double* row = model.components.data() + i * p;
        if (lambda <= rank_eps) {
            // Zero-variance direction: complete the basis deterministically.
            fill_null_component(model.components, i, p, row);
        } else {
            // w_i = C^T v_i / sqrt(lambda_i)
            for (std::size_t r = 0; r < n; ++r) {
                const double v = evecs(Eigen::Index(r), Eigen::Index(n - 1 - i));
                const double* crow = centered.data() + r * p;
                for (std::size_t c = 0; c < p; ++c) row[c] += v * crow[c];
            }
            double norm2 = 0.0;
            for (std::size_t c = 0; c < p; ++c) norm2 += row[c] * row[c];
            const double inv = 1.0 / std::sqrt(norm2);
            for (std::size_t c = 0; c < p; ++c) row[c] *= inv;
        }
        fix_sign(row, p);
    }
    return model;
}

std::vector<double> transform(const PcaModel& model, std::span<const double> x) {
    if (x.size() != model.dim) {
        throw DimensionError("transform: vector length " +
                             std::to_string(x.size()) + " != model dim " +
                             std::to_string(model.dim));
    }
    std::vector<double> y(model.n_components);
    for (std::size_t m = 0; m < model.n_components; ++m) {
        const double* w = model.component(m);
        double s = 0.0;
        for (std::size_t c = 0; c < model.dim; ++c) {
            s += (x[c] - model.mean[c]) * w[c];
        }
        y[m] = s;
    }
    return y;
}

std::vector<double> transform_rows(const PcaModel& model, const double* data,
                                   std::size_t n) {
    std::vector<double> out(n * model.n_components);
    kernels::project_rows(data, n, model.dim, model.mean.data(),
                          model.components.data(), model.n_components,
                          out.data());
    return out;
}

const std::vector<double>& explained_variance_ratio(const PcaModel& model) {
    return model.explained_variance_ratio;
}

} // namespace fsp
