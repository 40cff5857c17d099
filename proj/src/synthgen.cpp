#include "fsp/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fsp/rng.hpp"

namespace fsp {

void validate_scenario(const Scenario& s) {
    std::vector<std::string> bad;
    if (s.width == 0 || s.height == 0) bad.push_back("frame dimensions must be positive");
    if (s.fps <= 0) bad.push_back("fps must be positive");
    if (s.duration == 0) bad.push_back("duration must be >= 1 frame");
    if (s.base_luminance <= s.background_luminance) {
        bad.push_back("base_luminance must exceed background_luminance");
    }
    if (s.noise_sigma < 0) bad.push_back("noise_sigma must be >= 0");
    try {
        validate_box(s.flame_region, s.width, s.height);
    } catch (const DimensionError& e) {
        bad.push_back(e.what());
    }
    for (std::size_t i = 0; i < s.events.size(); ++i) {
        const auto& e = s.events[i];
        if (!(e.start_frame < e.end_frame && e.end_frame <= s.duration)) {
            bad.push_back("event " + std::to_string(i) +
                          ": frames must satisfy start < end <= duration");
        }
        if (!(e.depth > 0.0 && e.depth <= 1.0)) {
            bad.push_back("event " + std::to_string(i) + ": depth must be in (0,1]");
        }
    }
    if (!bad.empty()) {
        std::string msg = "invalid scenario:";
        for (const auto& b : bad) msg += "\n  - " + b;
        throw DataError(msg);
    }
}

std::uint8_t flame_level_at(const Scenario& s, std::uint32_t frame) {
    double max_depth = 0.0;
    for (const auto& e : s.events) {
        if (frame < e.start_frame || frame >= e.end_frame) continue;
        if (e.type == EventType::Extinction) return s.background_luminance;
        max_depth = std::max(max_depth, e.depth);
    }
    if (max_depth == 0.0) return s.base_luminance;
    const double level = double(s.base_luminance) -
                         max_depth * (double(s.base_luminance) -
                                      double(s.background_luminance));
    return static_cast<std::uint8_t>(
        std::clamp<long>(std::lround(level), 0, 255));
}

Clip generate_clip(const Scenario& s) {
    validate_scenario(s);
    Clip clip;
    clip.fps = s.fps;
    clip.frames.resize(s.duration);

    const std::uint32_t y0 = s.flame_region.top_row(s.height);
    const auto frames = static_cast<std::int64_t>(s.duration);
#pragma omp parallel for schedule(static)
    for (std::int64_t t = 0; t < frames; ++t) {
        Frame& f = clip.frames[t];
        f.width = s.width;
        f.height = s.height;
        f.pixels.assign(static_cast<std::size_t>(s.width) * s.height,
                        s.background_luminance);
        const std::uint8_t level = flame_level_at(s, std::uint32_t(t));
        for (std::uint32_t i = 0; i < s.flame_region.height; ++i) {
            std::uint8_t* row = f.pixels.data() +
                                static_cast<std::size_t>(y0 + i) * s.width +
                                s.flame_region.left;
            std::fill(row, row + s.flame_region.width, level);
        }
        if (s.noise_sigma > 0.0) {
            auto eng = rng::make_engine(s.seed, std::uint64_t(t));
            rng::Gaussian gauss;
            for (auto& px : f.pixels) {
                const double v = double(px) + s.noise_sigma * gauss(eng);
                px = static_cast<std::uint8_t>(
                    std::clamp<long>(std::lround(v), 0, 255));
            }
        }
    }
    return clip;
}

std::optional<StabilityLabel> expected_label(const Scenario& s,
                                             const FlscConfig& config) {
    validate_scenario(s);
    config.validate();
    validate_box(config.box, s.width, s.height);

    // Overlap of the analysis box with the flame rectangle, top-origin.
    const auto overlap_1d = [](std::uint32_t a0, std::uint32_t alen,
                               std::uint32_t b0, std::uint32_t blen) {
        const std::uint32_t lo = std::max(a0, b0);
        const std::uint32_t hi = std::min(a0 + alen, b0 + blen);
        return hi > lo ? hi - lo : 0u;
    };
    const std::uint32_t overlap_w = overlap_1d(
        config.box.left, config.box.width, s.flame_region.left, s.flame_region.width);
    const std::uint32_t overlap_h =
        overlap_1d(config.box.top_row(s.height), config.box.height,
                   s.flame_region.top_row(s.height), s.flame_region.height);
    const std::uint64_t n_overlap = std::uint64_t(overlap_w) * overlap_h;
    const std::uint64_t n_box = config.box.area();

    // Per-frame box sums mirror the classifier's integer arithmetic exactly.
    std::vector<std::uint64_t> sums(s.duration);
    std::uint64_t total = 0;
    for (std::uint32_t t = 0; t < s.duration; ++t) {
        const std::uint64_t level = flame_level_at(s, t);
        sums[t] = n_overlap * level +
                  (n_box - n_overlap) * std::uint64_t(s.background_luminance);
        total += sums[t];
    }
    if (total == 0) {
        if (s.noise_sigma > 0.0) return std::nullopt; // noise could light it up
        return StabilityLabel::Unstable;              // dark clip rule
    }

    const double area = double(n_box);
    const double clip_mean = double(total) / (area * double(s.duration));

    // Noise shifts a frame's box mean by ~noise_sigma/sqrt(n_box) plus
    // sub-unit quantization; refuse scenarios where that could cross a
    // threshold.
    const double sigma_mean = s.noise_sigma / std::sqrt(area);
    const double guard_units =
        s.noise_sigma > 0.0 ? 6.0 * sigma_mean + 1.0 / std::sqrt(area) : 0.0;
    if (s.noise_sigma > 0.0 && clip_mean <= 10.0 * guard_units) {
        return std::nullopt;
    }

    double max_dev = 0.0;
    double min_threshold_gap = std::numeric_limits<double>::infinity();
    for (std::uint32_t t = 0; t < s.duration; ++t) {
        const double fm = double(sums[t]) / area;
        const double dev = std::fabs(fm - clip_mean) / clip_mean;
        max_dev = std::max(max_dev, dev);
        min_threshold_gap =
            std::min({min_threshold_gap,
                      std::fabs(dev - config.unstable_threshold),
                      std::fabs(dev - config.uncertain_threshold)});
    }
    if (s.noise_sigma > 0.0) {
        const double dev_margin = guard_units * (2.0 + max_dev) / clip_mean;
        if (min_threshold_gap < dev_margin) return std::nullopt;
    }
    if (max_dev > config.unstable_threshold) return StabilityLabel::Unstable;
    if (max_dev > config.uncertain_threshold) return StabilityLabel::Uncertain;
    return StabilityLabel::Stable;
}

namespace {

nlohmann::json box_to_json(const BoundingBox& b) {
    return {{"left", b.left},
            {"bottom_offset", b.bottom_offset},
            {"width", b.width},
            {"height", b.height}};
}

BoundingBox box_from_json(const nlohmann::json& j) {
    BoundingBox b;
    b.left = j.at("left").get<std::uint32_t>();
    b.bottom_offset = j.at("bottom_offset").get<std::uint32_t>();
    b.width = j.at("width").get<std::uint32_t>();
    b.height = j.at("height").get<std::uint32_t>();
    return b;
}

} // namespace

Scenario load_scenario_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
        Scenario s;
        s.width = j.at("width").get<std::uint32_t>();
        s.height = j.at("height").get<std::uint32_t>();
        s.fps = j.at("fps").get<double>();
        s.duration = j.at("duration").get<std::uint32_t>();
        s.flame_region = box_from_json(j.at("flame_region"));
        s.base_luminance = j.at("base_luminance").get<std::uint8_t>();
        s.background_luminance = j.at("background_luminance").get<std::uint8_t>();
        s.noise_sigma = j.value("noise_sigma", 0.0);
        s.seed = j.value("seed", std::uint64_t{0});
        for (const auto& je : j.value("events", nlohmann::json::array())) {
            SynthEvent e;
            e.start_frame = je.at("start_frame").get<std::uint32_t>();
            e.end_frame = je.at("end_frame").get<std::uint32_t>();
            const std::string type = je.at("type").get<std::string>();
            if (type == "extinction") {
                e.type = EventType::Extinction;
            } else if (type == "dimming") {
                e.type = EventType::Dimming;
            } else {
                throw FormatError(path.string() + ": unknown event type \"" +
                                  type + "\"");
            }
            e.depth = je.value("depth", 1.0);
            s.events.push_back(e);
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void save_scenario_json(const Scenario& s, const std::filesystem::path& path) {
    nlohmann::json j;
    j["width"] = s.width;
    j["height"] = s.height;
    j["fps"] = s.fps;
    j["duration"] = s.duration;
    j["flame_region"] = box_to_json(s.flame_region);
    j["base_luminance"] = s.base_luminance;
    j["background_luminance"] = s.background_luminance;
    j["noise_sigma"] = s.noise_sigma;
    j["seed"] = s.seed;
    auto events = nlohmann::json::array();
    for (const auto& e : s.events) {
        events.push_back(
            {{"start_frame", e.start_frame},
             {"end_frame", e.end_frame},
             {"type", e.type == EventType::Extinction ? "extinction" : "dimming"},
             {"depth", e.depth}});
    }
    j["events"] = events;
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

} // namespace fsp
