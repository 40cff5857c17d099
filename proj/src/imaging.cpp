#include "fsp/imaging.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fsp {

void validate_box(const BoundingBox& box, std::uint32_t frame_width,
                  std::uint32_t frame_height) {
    const bool fits_h = box.width > 0 &&
                        static_cast<std::uint64_t>(box.left) + box.width <= frame_width;
    const bool fits_v = box.height > 0 && box.bottom_offset <= frame_height &&
                        static_cast<std::uint64_t>(frame_height) - box.bottom_offset +
                                box.height <= frame_height;
    if (!fits_h || !fits_v) {
        std::ostringstream os;
        os << "bounding box (left=" << box.left
           << ", bottom_offset=" << box.bottom_offset << ", w=" << box.width
           << ", h=" << box.height << ") does not fit frame " << frame_width
           << "x" << frame_height;
        throw DimensionError(os.str());
    }
}

namespace {

// Skips PGM whitespace and '#' comments, returns the next integer token.
// `pos` tracks the absolute byte offset for error messages.
std::uint64_t next_pgm_int(const std::vector<std::uint8_t>& b, std::size_t& pos,
                           const char* what) {
    while (pos < b.size()) {
        if (std::isspace(b[pos])) {
            ++pos;
        } else if (b[pos] == '#') {
            while (pos < b.size() && b[pos] != '\n') ++pos;
        } else {
            break;
        }
    }
    if (pos >= b.size() || !std::isdigit(b[pos])) {
        throw FormatError("pgm: expected " + std::string(what) + " at byte " +
                          std::to_string(pos));
    }
    std::uint64_t v = 0;
    while (pos < b.size() && std::isdigit(b[pos])) {
        v = v * 10 + (b[pos] - '0');
        if (v > 0xFFFFFFFFULL) {
            throw FormatError("pgm: oversized " + std::string(what) +
                              " at byte " + std::to_string(pos));
        }
        ++pos;
    }
    return v;
}

} // namespace

Frame decode_pgm(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
        throw FormatError("pgm: bad magic at byte 0 (expected \"P5\")");
    }
    std::size_t pos = 2;
    const std::uint64_t w = next_pgm_int(bytes, pos, "width");
    const std::uint64_t h = next_pgm_int(bytes, pos, "height");
    const std::size_t maxval_pos = pos;
    const std::uint64_t maxval = next_pgm_int(bytes, pos, "maxval");
    if (maxval != 255) {
        throw FormatError("pgm: unsupported maxval " + std::to_string(maxval) +
                          " at byte " + std::to_string(maxval_pos) +
                          " (only 255)");
    }
    if (w == 0 || h == 0) {
        throw FormatError("pgm: zero dimension in header");
    }
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
        throw FormatError("pgm: expected whitespace before raster at byte " +
                          std::to_string(pos));
    }
    ++pos; // exactly one whitespace byte separates header and raster
    const std::size_t need = static_cast<std::size_t>(w) * h;
    if (bytes.size() - pos < need) {
        throw FormatError("pgm: truncated raster at byte " +
                          std::to_string(bytes.size()) + " (need " +
                          std::to_string(pos + need) + " bytes)");
    }
    Frame f;
    f.width = static_cast<std::uint32_t>(w);
    f.height = static_cast<std::uint32_t>(h);
    f.pixels.assign(bytes.begin() + pos, bytes.begin() + pos + need);
    return f;
}

std::vector<std::uint8_t> encode_pgm(const Frame& frame) {
    char header[48];
    const int n = std::snprintf(header, sizeof header, "P5\n%u %u\n255\n",
                                frame.width, frame.height);
    std::vector<std::uint8_t> out;
    out.reserve(static_cast<std::size_t>(n) + frame.pixels.size());
    out.insert(out.end(), header, header + n);
    out.insert(out.end(), frame.pixels.begin(), frame.pixels.end());
    return out;
}

std::uint8_t rgb_to_luminance(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const int sum = int(r) + int(g) + int(b);
    return static_cast<std::uint8_t>(std::lround(sum / 3.0));
}

Frame crop_bbox(const Frame& frame, const BoundingBox& box) {
    validate_box(box, frame.width, frame.height);
    const std::uint32_t y0 = box.top_row(frame.height);
    Frame out;
    out.width = box.width;
    out.height = box.height;
    out.pixels.resize(box.area());
    for (std::uint32_t i = 0; i < box.height; ++i) {
        const std::uint8_t* src = frame.pixels.data() +
                                  static_cast<std::size_t>(y0 + i) * frame.width +
                                  box.left;
        std::copy(src, src + box.width,
                  out.pixels.data() + static_cast<std::size_t>(i) * box.width);
    }
    return out;
}

double frame_mean_luminance(const Frame& frame) {
    if (frame.pixels.empty()) {
        throw DataError("frame_mean_luminance: empty frame");
    }
    std::uint64_t sum = 0;
    for (std::uint8_t p : frame.pixels) sum += p;
    return static_cast<double>(sum) / static_cast<double>(frame.pixels.size());
}

Clip load_clip_dir(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    const fs::path meta_path = dir / "clip.json";
    std::ifstream meta(meta_path);
    if (!meta) {
        throw IoError("cannot open " + meta_path.string());
    }
    nlohmann::json j;
    try {
        meta >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(meta_path.string() + ": " + e.what());
    }
    if (!j.contains("fps") || !j.contains("frame_count")) {
        throw FormatError(meta_path.string() + ": missing fps or frame_count");
    }
    Clip clip;
    clip.fps = j["fps"].get<double>();
    const std::uint64_t count = j["frame_count"].get<std::uint64_t>();
    if (clip.fps <= 0) {
        throw DataError(meta_path.string() + ": fps must be positive");
    }
    clip.frames.reserve(count);
    for (std::uint64_t i = 1; i <= count; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%06llu.pgm",
                      static_cast<unsigned long long>(i));
        const fs::path frame_path = dir / name;
        std::ifstream in(frame_path, std::ios::binary);
        if (!in) {
            throw IoError("cannot open " + frame_path.string());
        }
        std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
        Frame f = decode_pgm(bytes);
        if (!clip.frames.empty() && (f.width != clip.frames[0].width ||
                                     f.height != clip.frames[0].height)) {
            throw DimensionError(frame_path.string() + ": frame size " +
                                 std::to_string(f.width) + "x" +
                                 std::to_string(f.height) +
                                 " differs from first frame");
        }
        clip.frames.push_back(std::move(f));
    }
    return clip;
}

void save_clip_dir(const Clip& clip, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    for (std::size_t i = 0; i < clip.frames.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%06llu.pgm",
                      static_cast<unsigned long long>(i + 1));
        const auto bytes = encode_pgm(clip.frames[i]);
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) {
            throw IoError("cannot write " + (dir / name).string());
        }
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
    }
    nlohmann::json j;
    j["fps"] = clip.fps;
    j["frame_count"] = clip.frames.size();
    std::ofstream meta(dir / "clip.json");
    if (!meta) {
        throw IoError("cannot write " + (dir / "clip.json").string());
    }
    meta << j.dump(2) << "\n";
}

} // namespace fsp
