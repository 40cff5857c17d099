#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fsp/errors.hpp"

namespace fsp {

/// Single 8-bit grayscale frame, row-major, top row first.
struct Frame {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<std::uint8_t> pixels; // size = width * height

    std::uint8_t at(std::uint32_t y, std::uint32_t x) const {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
    std::uint8_t& at(std::uint32_t y, std::uint32_t x) {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
    bool operator==(const Frame&) const = default;
};

/// Ordered frame sequence at a nominal frame rate. All frames share
/// identical dimensions.
struct Clip {
    std::vector<Frame> frames;
    double fps = 30.0;

    std::size_t size() const { return frames.size(); }
    bool empty() const { return frames.empty(); }
};

/// Rectangle anchored with the vertical offset measured from the bottom
/// border up to the box's top-left corner. Conversion to top-origin
/// coordinates happens only inside crop_bbox().
struct BoundingBox {
    std::uint32_t left = 0;
    std::uint32_t bottom_offset = 0;
    std::uint32_t width = 0;
    std::uint32_t height = 0;

    std::size_t area() const {
        return static_cast<std::size_t>(width) * height;
    }
    /// Top-origin row of the box's top edge inside a frame of height
    /// `frame_height`. Caller must have validated fit.
    std::uint32_t top_row(std::uint32_t frame_height) const {
        return frame_height - bottom_offset;
    }
    bool operator==(const BoundingBox&) const = default;
};

/// Throws DimensionError unless `box` fits a width x height frame.
void validate_box(const BoundingBox& box, std::uint32_t frame_width,
                  std::uint32_t frame_height);

/// Decode a binary PGM (P5, maxval 255). Errors name the offending byte
/// offset.
Frame decode_pgm(const std::vector<std::uint8_t>& bytes);

/// Canonical P5 bytes: "P5\n<w> <h>\n255\n" + raster.
std::vector<std::uint8_t> encode_pgm(const Frame& frame);

/// Rounded channel average, keeping the result in [0,255].
std::uint8_t rgb_to_luminance(std::uint8_t r, std::uint8_t g, std::uint8_t b);

/// Extract the box region as a new frame.
Frame crop_bbox(const Frame& frame, const BoundingBox& box);

/// Arithmetic mean of all pixel values. Throws DataError on an empty frame.
double frame_mean_luminance(const Frame& frame);

/// Clip directory layout: frame_000001.pgm ... plus clip.json
/// {"fps": <number>, "frame_count": <integer>}.
Clip load_clip_dir(const std::filesystem::path& dir);
void save_clip_dir(const Clip& clip, const std::filesystem::path& dir);

} // namespace fsp
