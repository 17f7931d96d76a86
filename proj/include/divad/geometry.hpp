#pragma once

#include <cmath>
#include <optional>

#include "divad/tensor.hpp"

namespace divad {

struct Vec3 {
    double x = 0, y = 0, z = 0;
};

struct ImagePoint {
    double u = 0, v = 0;
};

/// Pinhole camera with principal point at the image center.
struct PinholeCamera {
    double focal = 64.0;        // pixels
    std::size_t image_size = 64;

    PinholeCamera() = default;
    PinholeCamera(double f, std::size_t s) : focal(f), image_size(s) {
        if (focal <= 0) throw Error("camera: focal length must be positive");
        if (image_size == 0) throw Error("camera: image size must be positive");
    }

    double cx() const { return static_cast<double>(image_size) / 2.0; }
    double cy() const { return static_cast<double>(image_size) / 2.0; }
};

/// U = f*X/Z, V = f*Y/Z, shifted by the principal point for rendering.
inline ImagePoint project_point(const PinholeCamera& camera, const Vec3& p) {
    if (p.z <= 0)
        throw Error("project: point behind camera (Z = " + std::to_string(p.z) +
                    ")");
    return {camera.focal * p.x / p.z + camera.cx(),
            camera.focal * p.y / p.z + camera.cy()};
}

/// Projected area of a fronto-parallel square of side L at depth Z:
/// (f*L/Z)^2.
inline double projected_area(double focal, double side, double depth) {
    if (focal <= 0 || side <= 0 || depth <= 0)
        throw Error("projected_area: arguments must be positive");
    const double s = focal * side / depth;
    return s * s;
}

/// Raw, per-pixel-mean and depth-corrected anomaly scores for one event.
struct ScoreRecord {
    double raw_score = 0;          // area-summed window score
    double per_pixel_mean = 0;     // raw / projected area, when area known
    double correction_factor = 1;  // K = Z^2
    double corrected_score = 0;    // K * raw
};

/// Applies the Z^2 correction that makes the score of a fixed per-pixel
/// error pattern independent of its distance from the camera.
inline ScoreRecord depth_invariant_score(double raw_score, double depth,
                                         std::optional<double> area = std::nullopt) {
    if (depth <= 0) throw Error("depth_invariant_score: Z must be positive");
    if (raw_score < 0)
        throw Error("depth_invariant_score: raw score must be nonnegative");
    ScoreRecord r;
    r.raw_score = raw_score;
    r.correction_factor = depth * depth;
    r.corrected_score = r.correction_factor * raw_score;
    if (area) {
        if (*area <= 0) throw Error("depth_invariant_score: area must be positive");
        r.per_pixel_mean = raw_score / *area;
    }
    return r;
}

}  // namespace divad
