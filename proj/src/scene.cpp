#include "divad/scene.hpp"

#include <algorithm>
#include <cmath>

namespace divad {

void SceneObject::validate() const {
    if (motion.empty()) throw Error("scene object: needs at least one waypoint");
    for (const auto& wp : motion)
        if (wp.position.z <= 0)
            throw Error("scene object: waypoint depth Z must be positive");
    if (side <= 0) throw Error("scene object: side L must be positive");
    if (intensity < 0 || intensity > 1)
        throw Error("scene object: intensity must lie in [0,1]");
    if (is_anomalous && anomaly_kind == AnomalyKind::none)
        throw Error("scene object: anomalous object needs an anomaly kind");
    if (!is_anomalous && anomaly_kind != AnomalyKind::none)
        throw Error("scene object: anomaly kind set on a normal object");
}

bool SceneObject::is_static() const {
    return motion.size() == 1 && motion[0].velocity.x == 0 &&
           motion[0].velocity.y == 0 && motion[0].velocity.z == 0 &&
           anomaly_kind != AnomalyKind::erratic_motion;
}

double Background::depth_at_row(double row, std::size_t image_size) const {
    if (horizon_row < 0 || row <= horizon_row) return depth;
    const double span = static_cast<double>(image_size - 1) - horizon_row;
    if (span <= 0) return depth;
    const double t = std::clamp((row - horizon_row) / span, 0.0, 1.0);
    return floor_far_depth + (floor_near_depth - floor_far_depth) * t;
}

namespace {

const Waypoint& active_waypoint(const SceneObject& obj, std::size_t frame) {
    const Waypoint* active = &obj.motion.front();
    for (const auto& wp : obj.motion) {
        if (wp.frame <= frame) active = &wp;
        else break;
    }
    return active;
}

double base_speed(const SceneObject& obj) {
    const Vec3& v = obj.motion.front().velocity;
    return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
}

}  // namespace

Vec3 object_position(const SceneObject& object, std::size_t frame,
                     std::uint64_t seed, std::size_t object_index) {
    if (object.anomaly_kind == AnomalyKind::erratic_motion) {
        // Random walk: direction resampled every frame, speed fixed at
        // erratic_speed_factor times the nominal speed. Replayed from the
        // object's substream so any frame is reachable deterministically.
        Rng rng = Rng::substream(seed, 0x5ce0 + object_index);
        const double speed = base_speed(object) * object.erratic_speed_factor;
        Vec3 pos = object.motion.front().position;
        for (std::size_t f = object.motion.front().frame; f < frame; ++f) {
            const double angle = rng.uniform(0.0, 2.0 * M_PI);
            pos.x += speed * std::cos(angle);
            pos.y += speed * std::sin(angle);
        }
        return pos;
    }
    const Waypoint& wp = active_waypoint(object, frame);
    const double dt = static_cast<double>(frame) - static_cast<double>(wp.frame);
    return {wp.position.x + wp.velocity.x * dt, wp.position.y + wp.velocity.y * dt,
            wp.position.z + wp.velocity.z * dt};
}

namespace {

struct Square {
    long x0 = 0, y0 = 0;
    long n = 0;  // side in pixels
    bool in_frame(std::size_t s) const {
        return n > 0 && x0 + n > 0 && y0 + n > 0 && x0 < static_cast<long>(s) &&
               y0 < static_cast<long>(s);
    }
};

Square rasterize(const PinholeCamera& cam, const Vec3& pos, double side) {
    Square sq;
    if (pos.z <= 0) return sq;  // behind the camera, not drawn
    const ImagePoint c = project_point(cam, pos);
    sq.n = std::lround(cam.focal * side / pos.z);
    sq.x0 = std::lround(c.u - static_cast<double>(sq.n) * 0.5);
    sq.y0 = std::lround(c.v - static_cast<double>(sq.n) * 0.5);
    return sq;
}

void fill_square(Tensor<float>& img, const Square& sq, float value) {
    const long s = static_cast<long>(img.dim(0));
    const long y_lo = std::max(0L, sq.y0), y_hi = std::min(s, sq.y0 + sq.n);
    const long x_lo = std::max(0L, sq.x0), x_hi = std::min(s, sq.x0 + sq.n);
    for (long y = y_lo; y < y_hi; ++y)
        for (long x = x_lo; x < x_hi; ++x)
            img.data[static_cast<std::size_t>(y) * img.dim(1) +
                     static_cast<std::size_t>(x)] = value;
}

double object_intensity(const SceneObject& obj, std::size_t frame) {
    if (obj.anomaly_kind == AnomalyKind::flicker && obj.flicker_period > 0) {
        const std::size_t phase = (frame / obj.flicker_period) % 2;
        return phase == 0 ? obj.flicker_high : obj.flicker_low;
    }
    return obj.intensity;
}

}  // namespace

RenderResult render_scene(const PinholeCamera& camera,
                          const std::vector<SceneObject>& objects,
                          std::size_t frame_count, const Background& background,
                          std::uint64_t seed) {
    for (const auto& obj : objects) obj.validate();
    if (background.depth <= 0)
        throw Error("render: background depth must be positive");
    const std::size_t s = camera.image_size;

    // Static background: vertical gradient plus fixed per-pixel texture.
    Tensor<float> bg({s, s});
    {
        Rng tex(background.texture_seed);
        for (std::size_t y = 0; y < s; ++y) {
            const double t = s > 1 ? static_cast<double>(y) / (s - 1) : 0.0;
            const double base =
                background.top + (background.bottom - background.top) * t;
            for (std::size_t x = 0; x < s; ++x) {
                const double noise =
                    background.texture_amplitude * (tex.uniform() - 0.5) * 2.0;
                bg.data[y * s + x] =
                    static_cast<float>(std::clamp(base + noise, 0.0, 1.0));
            }
        }
    }

    // Reference depth: background plus static objects, front-most wins.
    RenderResult result;
    result.depth = Tensor<float>({s, s});
    for (std::size_t y = 0; y < s; ++y) {
        const float zy = static_cast<float>(
            background.depth_at_row(static_cast<double>(y), s));
        for (std::size_t x = 0; x < s; ++x) result.depth.data[y * s + x] = zy;
    }
    {
        std::vector<std::size_t> order(objects.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return objects[a].motion.front().position.z >
                   objects[b].motion.front().position.z;
        });
        for (std::size_t idx : order) {
            const auto& obj = objects[idx];
            if (!obj.is_static()) continue;
            const Vec3 pos = obj.motion.front().position;
            const Square sq = rasterize(camera, pos, obj.side);
            if (!sq.in_frame(s)) continue;
            fill_square(result.depth, sq, static_cast<float>(pos.z));
        }
    }

    result.frames = Tensor<float>({frame_count, s, s});
    result.frame_anomalous.assign(frame_count, false);
    std::vector<bool> ever_visible(objects.size(), false);

    std::vector<std::pair<double, std::size_t>> order;  // (depth, index)
    for (std::size_t f = 0; f < frame_count; ++f) {
        Tensor<float> frame = bg;
        order.clear();
        for (std::size_t i = 0; i < objects.size(); ++i) {
            const auto& obj = objects[i];
            if (f < obj.appear_frame || f >= obj.vanish_frame) continue;
            const Vec3 pos = object_position(obj, f, seed, i);
            if (pos.z <= 0) continue;
            order.emplace_back(pos.z, i);
        }
        // Back to front: nearer objects drawn last and therefore occlude.
        std::sort(order.begin(), order.end(),
                  [](const auto& a, const auto& b) { return a.first > b.first; });
        for (const auto& [z, i] : order) {
            const auto& obj = objects[i];
            const Vec3 pos = object_position(obj, f, seed, i);
            const Square sq = rasterize(camera, pos, obj.side);
            if (!sq.in_frame(s)) continue;
            fill_square(frame, sq, static_cast<float>(object_intensity(obj, f)));
            ever_visible[i] = true;
            if (obj.is_anomalous) result.frame_anomalous[f] = true;
        }
        std::copy(frame.data.begin(), frame.data.end(),
                  result.frames.data.begin() + static_cast<long>(f * s * s));
    }

    for (std::size_t i = 0; i < objects.size(); ++i) {
        if (!ever_visible[i])
            result.warnings.push_back("object " + std::to_string(i) +
                                      " never entered the frame");
    }
    return result;
}

}  // namespace divad
