#pragma once

#include <span>
#include <vector>

#include "fsp/features.hpp"

namespace fsp {

/// Principal axes of a fitted model. Component rows are unit-norm and
/// mutually orthogonal; explained_variance is sorted descending.
struct PcaModel {
    std::size_t dim = 0;          // feature dimension p
    std::size_t n_components = 0; // k
    std::vector<double> mean;                     // p
    std::vector<double> components;               // k x p, row-major
    std::vector<double> explained_variance;       // k
    std::vector<double> explained_variance_ratio; // k

    const double* component(std::size_t i) const {
        return components.data() + i * dim;
    }
};

/// Fit by eigendecomposition of the n x n Gram matrix of the centered rows
/// (n << p makes the p x p covariance infeasible at full feature size).
/// Signs are fixed so each component's largest-magnitude entry is positive.
/// Requires n >= 2 and 1 <= n_components <= min(n-1, p).
PcaModel fit_pca(const FeatureMatrix& X, std::size_t n_components = 2);

/// components * (x - mean).
std::vector<double> transform(const PcaModel& model, std::span<const double> x);

/// Batch transform of a row-major n x p matrix; returns n x k row-major.
std::vector<double> transform_rows(const PcaModel& model, const double* data,
                                   std::size_t n);

/// Stored variance fractions, descending.
const std::vector<double>& explained_variance_ratio(const PcaModel& model);

} // namespace fsp
