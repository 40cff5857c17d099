#include "fsp/features.hpp"

#include <cmath>

namespace fsp {

std::size_t window_count(std::size_t n_frames, std::uint32_t window_len,
                         std::uint32_t stride) {
    if (window_len == 0 || stride == 0) {
        throw DataError("window_count: window_len and stride must be >= 1");
    }
    if (n_frames < window_len) return 0;
    return (n_frames - window_len) / stride + 1;
}

BuildWindowsResult build_windows(const Clip& clip, const BoundingBox& box,
                                 std::string clip_id, std::uint32_t window_len,
                                 std::uint32_t stride) {
    if (stride == 0) stride = window_len;
    if (window_len == 0) {
        throw DataError("build_windows: window_len must be >= 1");
    }
    BuildWindowsResult result;
    if (clip.size() < window_len) {
        result.clip_too_short = true;
        return result;
    }
    validate_box(box, clip.frames[0].width, clip.frames[0].height);

    const std::size_t count = window_count(clip.size(), window_len, stride);
    const std::uint32_t frame_w = clip.frames[0].width;
    const std::uint32_t y0 = box.top_row(clip.frames[0].height);
    const std::size_t box_area = box.area();

    result.windows.resize(count);
    const auto nw = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static)
    for (std::int64_t w = 0; w < nw; ++w) {
        FeatureWindow& win = result.windows[w];
        win.clip_id = clip_id;
        win.window_index = static_cast<std::uint32_t>(w);
        win.values.resize(box_area * window_len);
        double* dst = win.values.data();
        const std::size_t first = static_cast<std::size_t>(w) * stride;
        for (std::uint32_t t = 0; t < window_len; ++t) {
            const Frame& f = clip.frames[first + t];
            for (std::uint32_t i = 0; i < box.height; ++i) {
                const std::uint8_t* src =
                    f.pixels.data() +
                    static_cast<std::size_t>(y0 + i) * frame_w + box.left;
                for (std::uint32_t j = 0; j < box.width; ++j) {
                    *dst++ = static_cast<double>(src[j]);
                }
            }
        }
    }
    return result;
}

FeatureMatrix stack(std::span<const FeatureWindow> windows,
                    std::size_t cols_if_empty) {
    FeatureMatrix m;
    if (windows.empty()) {
        m.cols = cols_if_empty;
        return m;
    }
    m.rows = windows.size();
    m.cols = windows[0].values.size();
    m.data.reserve(m.rows * m.cols);
    m.provenance.reserve(m.rows);
    for (const auto& w : windows) {
        if (w.values.size() != m.cols) {
            throw DimensionError("stack: window " + w.clip_id + "#" +
                                 std::to_string(w.window_index) + " has length " +
                                 std::to_string(w.values.size()) + ", expected " +
                                 std::to_string(m.cols));
        }
        m.data.insert(m.data.end(), w.values.begin(), w.values.end());
        m.provenance.push_back({w.clip_id, w.window_index});
    }
    return m;
}

std::vector<Frame> unflatten_window(const FeatureWindow& window,
                                    const BoundingBox& box,
                                    std::uint32_t window_len) {
    const std::size_t box_area = box.area();
    if (window.values.size() != box_area * window_len) {
        throw DimensionError("unflatten_window: vector length " +
                             std::to_string(window.values.size()) +
                             " does not match box area * window_len");
    }
    std::vector<Frame> frames(window_len);
    const double* src = window.values.data();
    for (std::uint32_t t = 0; t < window_len; ++t) {
        Frame& f = frames[t];
        f.width = box.width;
        f.height = box.height;
        f.pixels.resize(box_area);
        for (std::size_t i = 0; i < box_area; ++i) {
            f.pixels[i] = static_cast<std::uint8_t>(std::lround(src[i]));
        }
        src += box_area;
    }
    return frames;
}

} // namespace fsp
