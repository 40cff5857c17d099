#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "fsp/flsc.hpp"
#include "fsp/imaging.hpp"

namespace fsp {

enum class EventType {
    Extinction, // flame region drops to background
    Dimming,    // flame region drops by depth * (base - background)
};

struct SynthEvent {
    std::uint32_t start_frame = 0; // inclusive
    std::uint32_t end_frame = 0;   // exclusive
    EventType type = EventType::Extinction;
    double depth = 1.0; // (0,1]; ignored for extinction
};

/// Deterministic description of a synthetic clip: a flat bright rectangle
/// over a dark background, optional extinction/dimming intervals, and
/// additive gaussian sensor noise.
struct Scenario {
    std::uint32_t width = 640;
    std::uint32_t height = 480;
    double fps = 30.0;
    std::uint32_t duration = 90; // frames
    BoundingBox flame_region{450, 270, 30, 50};
    std::uint8_t base_luminance = 150;
    std::uint8_t background_luminance = 5;
    std::vector<SynthEvent> events;
    double noise_sigma = 0.0; // luminance units per pixel
    std::uint64_t seed = 0;
};

/// Throws DataError listing every violated constraint.
void validate_scenario(const Scenario& scenario);

/// Noise-free luminance of the flame region at `frame` (extinction wins
/// over dimming; the deepest dimming applies).
std::uint8_t flame_level_at(const Scenario& scenario, std::uint32_t frame);

/// Render the clip. Noise streams are derived per frame from
/// (seed, frame_index), so output is identical regardless of scheduling.
Clip generate_clip(const Scenario& scenario);

/// Analytic FLSC label from event depths/durations and box means, ignoring
/// noise. Returns nullopt ("indeterminate") when noise_sigma is large
/// enough that it could flip the label: any frame's deviation within
/// ~6 sigma of a threshold, or a near-dark clip mean.
std::optional<StabilityLabel> expected_label(const Scenario& scenario,
                                             const FlscConfig& config);

Scenario load_scenario_json(const std::filesystem::path& path);
void save_scenario_json(const Scenario& scenario,
                        const std::filesystem::path& path);

} // namespace fsp
