#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fsp/imaging.hpp"

namespace fsp {

/// Box-pixel luminances over `window_len` consecutive frames, flattened
/// frame-major then row-major within each cropped frame.
struct FeatureWindow {
    std::string clip_id;
    std::uint32_t window_index = 0;
    std::vector<double> values; // box.width * box.height * window_len
};

struct WindowProvenance {
    std::string clip_id;
    std::uint32_t window_index;
    bool operator==(const WindowProvenance&) const = default;
};

/// Row-major n x p matrix of stacked windows with their provenance.
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data; // rows * cols
    std::vector<WindowProvenance> provenance;

    const double* row(std::size_t r) const { return data.data() + r * cols; }
};

struct BuildWindowsResult {
    std::vector<FeatureWindow> windows;
    bool clip_too_short = false;
};

/// Non-overlapping by default (stride = window_len). A clip shorter than
/// window_len yields zero windows with the warning flag set.
BuildWindowsResult build_windows(const Clip& clip, const BoundingBox& box,
                                 std::string clip_id = {},
                                 std::uint32_t window_len = 30,
                                 std::uint32_t stride = 0);

/// Number of windows for the given geometry; stride >= 1.
std::size_t window_count(std::size_t n_frames, std::uint32_t window_len,
                         std::uint32_t stride);

/// Rows in input order, provenance preserved. `cols_if_empty` declares the
/// feature dimension when `windows` is empty.
FeatureMatrix stack(std::span<const FeatureWindow> windows,
                    std::size_t cols_if_empty = 0);

/// Inverse of the flattening: reconstruct the window_len cropped frames.
std::vector<Frame> unflatten_window(const FeatureWindow& window,
                                    const BoundingBox& box,
                                    std::uint32_t window_len);

} // namespace fsp
