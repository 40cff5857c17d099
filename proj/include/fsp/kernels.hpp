#pragma once

#include <cstdint>
#include <vector>

#include "fsp/imaging.hpp"

// Data-parallel kernels behind the numeric pipeline. Each kernel exists in
// two forms: the OpenMP version in fsp::kernels (parallel over independent
// output elements, serial inner accumulation) and the plain-loop reference
// in fsp::kernels::serial. Because the per-element accumulation order is
// identical, both forms produce bit-identical results; the tests assert
// exact equality and the bench target compares their throughput.

namespace fsp::kernels {

/// Per-frame sum of box pixels across all frames of the clip.
/// Integer accumulation: exact and order-independent.
std::vector<std::uint64_t> box_sums(const Clip& clip, const BoundingBox& box);

/// Per-frame mean of box pixels (box_sums / box area).
std::vector<double> box_means(const Clip& clip, const BoundingBox& box);

/// Column means of a row-major n x p matrix.
std::vector<double> column_means(const double* data, std::size_t n,
                                 std::size_t p);

/// out[i*p + j] = data[i*p + j] - mean[j].
void center_rows(const double* data, std::size_t n, std::size_t p,
                 const double* mean, double* out);

/// Gram matrix G = C * C^T of a row-major n x p matrix (full symmetric
/// n x n output, row-major).
void gram(const double* centered, std::size_t n, std::size_t p, double* out);

/// Y = (X - mean) * W^T for a k x p component matrix W; Y is n x k.
void project_rows(const double* data, std::size_t n, std::size_t p,
                  const double* mean, const double* components, std::size_t k,
                  double* out);

namespace serial {

std::vector<std::uint64_t> box_sums(const Clip& clip, const BoundingBox& box);
std::vector<double> box_means(const Clip& clip, const BoundingBox& box);
std::vector<double> column_means(const double* data, std::size_t n,
                                 std::size_t p);
void center_rows(const double* data, std::size_t n, std::size_t p,
                 const double* mean, double* out);
void gram(const double* centered, std::size_t n, std::size_t p, double* out);
void project_rows(const double* data, std::size_t n, std::size_t p,
                  const double* mean, const double* components, std::size_t k,
                  double* out);

} // namespace serial

} // namespace fsp::kernels
