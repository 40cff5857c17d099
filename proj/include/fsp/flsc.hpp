#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "fsp/imaging.hpp"

namespace fsp {

/// Ternary flame stability. Numeric codes match the rater scale:
/// 0 unstable, 1 uncertain, 2 stable.
enum class StabilityLabel : int {
    Unstable = 0,
    Uncertain = 1,
    Stable = 2,
};

const char* to_string(StabilityLabel label);

struct FlscConfig {
    BoundingBox box;
    double unstable_threshold = 0.25;
    double uncertain_threshold = 0.15;

    /// Throws DataError unless 0 < uncertain < unstable < 1.
    void validate() const;
};

/// Per-frame relative deviation of box mean luminance from the clip mean.
struct DeviationSeries {
    struct Entry {
        std::size_t frame_index;
        double frame_mean;
        double relative_deviation;
    };
    double clip_mean = 0.0;
    std::vector<Entry> per_frame;
};

/// Mean luminance over all box pixels of all frames.
double clip_mean_luminance(const Clip& clip, const BoundingBox& box);

/// One entry per frame, in order: |frame_mean - clip_mean| / clip_mean.
/// Throws DataError when the clip mean is zero (dark clip); callers that
/// classify treat that case as Unstable instead.
DeviationSeries deviation_series(const Clip& clip, const FlscConfig& config);

/// Unstable if any frame deviates more than unstable_threshold, Uncertain
/// if any deviates more than uncertain_threshold, Stable otherwise. An
/// all-dark box region short-circuits to Unstable (detached flame).
StabilityLabel classify_clip_flsc(const Clip& clip, const FlscConfig& config);

/// Label implied by a deviation series under the config thresholds.
StabilityLabel classify_deviations(const DeviationSeries& series,
                                   const FlscConfig& config);

/// CSV columns: frame,frame_mean,relative_deviation.
void write_deviation_csv(const DeviationSeries& series, std::ostream& out);

} // namespace fsp
