#include "fsp/kernels.hpp"

namespace fsp::kernels {

namespace {

std::uint64_t one_box_sum(const Frame& f, const BoundingBox& box) {
    const std::uint32_t y0 = box.top_row(f.height);
    std::uint64_t sum = 0;
    for (std::uint32_t i = 0; i < box.height; ++i) {
        const std::uint8_t* row = f.pixels.data() +
                                  static_cast<std::size_t>(y0 + i) * f.width +
                                  box.left;
        for (std::uint32_t j = 0; j < box.width; ++j) sum += row[j];
    }
    return sum;
}

double dot(const double* a, const double* b, std::size_t p) {
    double s = 0.0;
    for (std::size_t c = 0; c < p; ++c) s += a[c] * b[c];
    return s;
}

} // namespace

std::vector<std::uint64_t> box_sums(const Clip& clip, const BoundingBox& box) {
    if (!clip.empty()) validate_box(box, clip.frames[0].width, clip.frames[0].height);
    std::vector<std::uint64_t> sums(clip.size());
    const auto n = static_cast<std::int64_t>(clip.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t t = 0; t < n; ++t) {
        sums[t] = one_box_sum(clip.frames[t], box);
    }
    return sums;
}

std::vector<double> box_means(const Clip& clip, const BoundingBox& box) {
    auto sums = box_sums(clip, box);
    std::vector<double> means(sums.size());
    const double area = static_cast<double>(box.area());
    for (std::size_t t = 0; t < sums.size(); ++t) {
        means[t] = static_cast<double>(sums[t]) / area;
    }
    return means;
}

std::vector<double> column_means(const double* data, std::size_t n,
                                 std::size_t p) {
    std::vector<double> mean(p, 0.0);
    const auto pc = static_cast<std::int64_t>(p);
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < pc; ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r) s += data[r * p + c];
        mean[c] = s / static_cast<double>(n);
    }
    return mean;
}

void center_rows(const double* data, std::size_t n, std::size_t p,
                 const double* mean, double* out) {
    const auto nr = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < nr; ++r) {
        const double* src = data + r * p;
        double* dst = out + r * p;
        for (std::size_t c = 0; c < p; ++c) dst[c] = src[c] - mean[c];
    }
}

void gram(const double* centered, std::size_t n, std::size_t p, double* out) {
    const auto nr = static_cast<std::int64_t>(n);
    // Upper triangle; mirrored afterwards. dynamic schedule evens out the
    // shrinking row lengths.
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < nr; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            out[i * n + j] = dot(centered + i * p, centered + j * p, p);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) out[i * n + j] = out[j * n + i];
    }
}

void project_rows(const double* data, std::size_t n, std::size_t p,
                  const double* mean, const double* components, std::size_t k,
                  double* out) {
    const auto nr = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < nr; ++r) {
        const double* row = data + r * p;
        for (std::size_t m = 0; m < k; ++m) {
            const double* w = components + m * p;
            double s = 0.0;
            for (std::size_t c = 0; c < p; ++c) s += (row[c] - mean[c]) * w[c];
            out[r * k + m] = s;
        }
    }
}

namespace serial {

std::vector<std::uint64_t> box_sums(const Clip& clip, const BoundingBox& box) {
    if (!clip.empty()) validate_box(box, clip.frames[0].width, clip.frames[0].height);
    std::vector<std::uint64_t> sums(clip.size());
    for (std::size_t t = 0; t < clip.size(); ++t) {
        sums[t] = one_box_sum(clip.frames[t], box);
    }
    return sums;
}

std::vector<double> box_means(const Clip& clip, const BoundingBox& box) {
    auto sums = box_sums(clip, box);
    std::vector<double> means(sums.size());
    const double area = static_cast<double>(box.area());
    for (std::size_t t = 0; t < sums.size(); ++t) {
        means[t] = static_cast<double>(sums[t]) / area;
    }
    return means;
}

std::vector<double> column_means(const double* data, std::size_t n,
                                 std::size_t p) {
    std::vector<double> mean(p, 0.0);
    for (std::size_t c = 0; c < p; ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r) s += data[r * p + c];
        mean[c] = s / static_cast<double>(n);
    }
    return mean;
}

void center_rows(const double* data, std::size_t n, std::size_t p,
                 const double* mean, double* out) {
    for (std::size_t r = 0; r < n; ++r) {
        const double* src = data + r * p;
        double* dst = out + r * p;
        for (std::size_t c = 0; c < p; ++c) dst[c] = src[c] - mean[c];
    }
}

void gram(const double* centered, std::size_t n, std::size_t p, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            out[i * n + j] = dot(centered + i * p, centered + j * p, p);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) out[i * n + j] = out[j * n + i];
    }
}

void project_rows(const double* data, std::size_t n, std::size_t p,
                  const double* mean, const double* components, std::size_t k,
                  double* out) {
    for (std::size_t r = 0; r < n; ++r) {
        const double* row = data + r * p;
        for (std::size_t m = 0; m < k; ++m) {
            const double* w = components + m * p;
            double s = 0.0;
            for (std::size_t c = 0; c < p; ++c) s += (row[c] - mean[c]) * w[c];
            out[r * k + m] = s;
        }
    }
}

} // namespace serial

} // namespace fsp::kernels
