#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "divad/geometry.hpp"
#include "divad/pipeline.hpp"
#include "divad/tensor.hpp"

namespace divad {

enum class AnomalyKind { none, erratic_motion, flicker };

/// Keyframe: from `frame` on, the object sits at `position` and advances by
/// `velocity` per frame until the next waypoint takes over.
struct Waypoint {
    std::size_t frame = 0;
    Vec3 position;
    Vec3 velocity;
};

/// A fronto-parallel square prism of side L rendered as a filled square of
/// side f*L/Z pixels.
struct SceneObject {
    std::vector<Waypoint> motion;  // at least one waypoint; Z > 0 throughout
    double side = 1.0;             // L
    double intensity = 0.7;        // gray value in [0,1]
    bool is_anomalous = false;
    AnomalyKind anomaly_kind = AnomalyKind::none;

    // Visibility interval; outside it the object is not drawn.
    std::size_t appear_frame = 0;
    std::size_t vanish_frame = std::numeric_limits<std::size_t>::max();

    // erratic-motion: speed is resampled every frame at this multiple of the
    // first waypoint's speed, in a fresh random direction.
    double erratic_speed_factor = 4.0;

    // flicker: intensity alternates between the two levels every period.
    double flicker_low = 0.05;
    double flicker_high = 0.95;
    std::size_t flicker_period = 3;

    void validate() const;

    /// True when the object never moves (single waypoint, zero velocity);
    /// static objects contribute to the scene's reference depth map.
    bool is_static() const;
};

/// Static gradient background with a fixed low-amplitude texture, placed at
/// depth `depth`. When horizon_row >= 0 the rows below it form a receding
/// floor whose depth falls linearly from floor_far_depth at the horizon to
/// floor_near_depth at the bottom row, so the reference depth map carries
/// the corridor's near/far structure.
struct Background {
    double depth = 12.0;   // Z_bg (wall / above-horizon rows)
    double top = 0.30;     // gray at the top row
    double bottom = 0.55;  // gray at the bottom row
    double texture_amplitude = 0.02;
    std::uint64_t texture_seed = 1;

    double horizon_row = -1.0;  // <0: uniform depth everywhere
    double floor_far_depth = 10.0;
    double floor_near_depth = 2.0;

    double depth_at_row(double row, std::size_t image_size) const;
};

struct RenderResult {
    Tensor<float> frames;       // [F, S, S], grayscale in [0,1]
    Tensor<float> depth;        // [S, S] static reference depth
    std::vector<bool> frame_anomalous;
    std::vector<std::string> warnings;  // e.g. objects never in frame
};

/// Rasterizes the scene: axis-aligned squares of side round(f*L/Z) pixels,
/// drawn back-to-front so nearer objects occlude farther ones. The depth
/// map holds the Z of the front-most static surface per pixel (background
/// elsewhere). A frame is anomalous iff an anomalous object is visible in
/// it.
RenderResult render_scene(const PinholeCamera& camera,
                          const std::vector<SceneObject>& objects,
                          std::size_t frame_count, const Background& background,
                          std::uint64_t seed);

/// Object position at a frame, following waypoints (and, for erratic
/// motion, the per-frame resampled velocity stream derived from `seed` and
/// `object_index`).
Vec3 object_position(const SceneObject& object, std::size_t frame,
                     std::uint64_t seed, std::size_t object_index);

}  // namespace divad
