#include "fsp/flsc.hpp"

#include <cmath>
#include <numeric>

#include "fsp/kernels.hpp"

namespace fsp {

const char* to_string(StabilityLabel label) {
    switch (label) {
        case StabilityLabel::Unstable: return "unstable";
        case StabilityLabel::Uncertain: return "uncertain";
        case StabilityLabel::Stable: return "stable";
    }
    return "?";
}

void FlscConfig::validate() const {
    if (!(uncertain_threshold > 0.0 && uncertain_threshold < unstable_threshold &&
          unstable_threshold < 1.0)) {
        throw DataError("flsc thresholds must satisfy 0 < uncertain < unstable < 1");
    }
}

double clip_mean_luminance(const Clip& clip, const BoundingBox& box) {
    if (clip.empty()) {
        throw DataError("clip_mean_luminance: empty clip");
    }
    const auto sums = kernels::box_sums(clip, box);
    const std::uint64_t total =
        std::accumulate(sums.begin(), sums.end(), std::uint64_t{0});
    return static_cast<double>(total) /
           (static_cast<double>(box.area()) * static_cast<double>(clip.size()));
}

DeviationSeries deviation_series(const Clip& clip, const FlscConfig& config) {
    config.validate();
    if (clip.empty()) {
        throw DataError("deviation_series: empty clip");
    }
    const auto sums = kernels::box_sums(clip, config.box);
    const std::uint64_t total =
        std::accumulate(sums.begin(), sums.end(), std::uint64_t{0});
    if (total == 0) {
        throw DataError("deviation_series: dark clip (zero mean luminance)");
    }
    const double area = static_cast<double>(config.box.area());
    DeviationSeries series;
    series.clip_mean =
        static_cast<double>(total) / (area * static_cast<double>(clip.size()));
    series.per_frame.reserve(clip.size());
    for (std::size_t t = 0; t < sums.size(); ++t) {
        const double fm = static_cast<double>(sums[t]) / area;
        series.per_frame.push_back(
            {t, fm, std::fabs(fm - series.clip_mean) / series.clip_mean});
    }
    return series;
}

StabilityLabel classify_deviations(const DeviationSeries& series,
                                   const FlscConfig& config) {
    double max_dev = 0.0;
    for (const auto& e : series.per_frame) {
        if (e.relative_deviation > max_dev) max_dev = e.relative_deviation;
    }
    if (max_dev > config.unstable_threshold) return StabilityLabel::Unstable;
    if (max_dev > config.uncertain_threshold) return StabilityLabel::Uncertain;
    return StabilityLabel::Stable;
}

StabilityLabel classify_clip_flsc(const Clip& clip, const FlscConfig& config) {
    config.validate();
    if (clip.empty()) {
        throw DataError("classify_clip_flsc: empty clip");
    }
    const auto sums = kernels::box_sums(clip, config.box);
    const std::uint64_t total =
        std::accumulate(sums.begin(), sums.end(), std::uint64_t{0});
    if (total == 0) {
        // A box region dark for the whole clip is the instability
        // signature itself.
        return StabilityLabel::Unstable;
    }
    const double area = static_cast<double>(config.box.area());
    const double clip_mean =
        static_cast<double>(total) / (area * static_cast<double>(clip.size()));
    double max_dev = 0.0;
    for (const std::uint64_t s : sums) {
        const double fm = static_cast<double>(s) / area;
        const double dev = std::fabs(fm - clip_mean) / clip_mean;
        if (dev > max_dev) max_dev = dev;
    }
    if (max_dev > config.unstable_threshold) return StabilityLabel::Unstable;
    if (max_dev > config.uncertain_threshold) return StabilityLabel::Uncertain;
    return StabilityLabel::Stable;
}

void write_deviation_csv(const DeviationSeries& series, std::ostream& out) {
    out << "frame,frame_mean,relative_deviation\n";
    char line[96];
    for (const auto& e : series.per_frame) {
        std::snprintf(line, sizeof line, "%zu,%.10g,%.10g\n", e.frame_index,
                      e.frame_mean, e.relative_deviation);
        out << line;
    }
}

} // namespace fsp
