#include "divad/pipeline.hpp"

#include <algorithm>
#include <cmath>

namespace divad {

std::string to_string(WindowLabel label) {
    switch (label) {
        case WindowLabel::normal: return "normal";
        case WindowLabel::anomalous: return "anomalous";
        case WindowLabel::proxy_outlier: return "proxy_outlier";
    }
    throw Error("unknown window label");
}

WindowLabel window_label_from_string(const std::string& s) {
    if (s == "normal") return WindowLabel::normal;
    if (s == "anomalous") return WindowLabel::anomalous;
    if (s == "proxy_outlier") return WindowLabel::proxy_outlier;
    throw Error("unknown window label '" + s + "'");
}

void DepthMap::validate() const {
    if (z.rank() != 2 && z.rank() != 3)
        throw Error("depth map: expected SxS or WxSxS, got " +
                    shape_string(z.shape));
    for (float v : z.data)
        if (!std::isfinite(v) || v < 0.0f)
            throw Error("depth map: values must be finite and nonnegative");
}

namespace {

float bilinear_sample(const Tensor<float>& img, double y, double x) {
    const std::size_t h = img.dim(0), w = img.dim(1);
    const double yc = std::clamp(y, 0.0, static_cast<double>(h - 1));
    const double xc = std::clamp(x, 0.0, static_cast<double>(w - 1));
    const std::size_t y0 = static_cast<std::size_t>(yc);
    const std::size_t x0 = static_cast<std::size_t>(xc);
    const std::size_t y1 = std::min(y0 + 1, h - 1);
    const std::size_t x1 = std::min(x0 + 1, w - 1);
    const double fy = yc - static_cast<double>(y0);
    const double fx = xc - static_cast<double>(x0);
    const double v00 = img.data[y0 * w + x0], v01 = img.data[y0 * w + x1];
    const double v10 = img.data[y1 * w + x0], v11 = img.data[y1 * w + x1];
    return static_cast<float>((v00 * (1 - fx) + v01 * fx) * (1 - fy) +
                              (v10 * (1 - fx) + v11 * fx) * fy);
}

}  // namespace

Tensor<float> preprocess_frame(const Tensor<float>& raw, std::size_t target_size) {
    if (target_size == 0) throw Error("preprocess: target size must be positive");
    if (raw.size() == 0) throw Error("preprocess: empty frame");
    if (raw.rank() != 2 && !(raw.rank() == 3 && raw.dim(2) == 3))
        throw Error("preprocess: expected [H,W] gray or [H,W,3] RGB, got " +
                    shape_string(raw.shape));

    const std::size_t h = raw.dim(0), w = raw.dim(1);
    if (h == 0 || w == 0) throw Error("preprocess: empty frame");

    // Grayscale + [0,1] normalization.
    Tensor<float> gray({h, w});
    if (raw.rank() == 2) {
        for (std::size_t i = 0; i < h * w; ++i)
            gray.data[i] = raw.data[i] / 255.0f;
    } else {
        for (std::size_t i = 0; i < h * w; ++i) {
            const float r = raw.data[3 * i], g = raw.data[3 * i + 1],
                        b = raw.data[3 * i + 2];
            gray.data[i] = (0.299f * r + 0.587f * g + 0.114f * b) / 255.0f;
        }
    }

    if (h == target_size && w == target_size) return gray;

    Tensor<float> out({target_size, target_size});
    const double sy = static_cast<double>(h) / static_cast<double>(target_size);
    const double sx = static_cast<double>(w) / static_cast<double>(target_size);
    for (std::size_t oy = 0; oy < target_size; ++oy) {
        const double y = (static_cast<double>(oy) + 0.5) * sy - 0.5;
        for (std::size_t ox = 0; ox < target_size; ++ox) {
            const double x = (static_cast<double>(ox) + 0.5) * sx - 0.5;
            out.data[oy * target_size + ox] = bilinear_sample(gray, y, x);
        }
    }
    return out;
}

std::size_t window_frame_count(double fps, double window_seconds) {
    const double exact = fps * window_seconds;
    const double rounded = std::llround(exact);
    if (exact <= 0 || std::abs(exact - rounded) > 1e-9)
        throw Error("windowize: fps*window_seconds must be a positive integer, got " +
                    std::to_string(exact));
    return static_cast<std::size_t>(rounded);
}

std::vector<WindowPlan> windowize_plan(
    std::size_t n_frames, double fps, double window_seconds,
    const std::vector<FrameInterval>& anomalous_intervals,
    const std::vector<FrameInterval>& proxy_intervals) {
    const std::size_t w = window_frame_count(fps, window_seconds);
    const std::size_t count = n_frames / w;
    auto overlaps = [&](std::size_t start,
                        const std::vector<FrameInterval>& intervals) {
        const std::size_t end = start + w;
        for (const auto& iv : intervals)
            if (iv.begin < end && iv.end > start) return true;
        return false;
    };
    std::vector<WindowPlan> plan;
    plan.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        WindowPlan p;
        p.start_frame = i * w;
        if (overlaps(p.start_frame, anomalous_intervals))
            p.label = WindowLabel::anomalous;
        else if (overlaps(p.start_frame, proxy_intervals))
            p.label = WindowLabel::proxy_outlier;
        plan.push_back(p);
    }
    return plan;
}

std::vector<Window> windowize(const Tensor<float>& clip_frames,
                              const std::string& clip_id, double fps,
                              double window_seconds,
                              const std::vector<FrameInterval>& anomalous_intervals,
                              const std::vector<FrameInterval>& proxy_intervals) {
    if (clip_frames.rank() != 3)
        throw Error("windowize: expected [N,S,S] frame stack, got " +
                    shape_string(clip_frames.shape));
    const std::size_t n = clip_frames.dim(0);
    const std::size_t s_y = clip_frames.dim(1), s_x = clip_frames.dim(2);
    const std::size_t w = window_frame_count(fps, window_seconds);
    auto plan = windowize_plan(n, fps, window_seconds, anomalous_intervals,
                               proxy_intervals);
    std::vector<Window> windows;
    windows.reserve(plan.size());
    for (const auto& p : plan) {
        Window win;
        win.frames = Tensor<float>({w, s_y, s_x});
        const std::size_t offset = p.start_frame * s_y * s_x;
        std::copy(clip_frames.data.begin() + static_cast<long>(offset),
                  clip_frames.data.begin() + static_cast<long>(offset + w * s_y * s_x),
                  win.frames.data.begin());
        win.source_clip = clip_id;
        win.start_frame = p.start_frame;
        win.label = p.label;
        windows.push_back(std::move(win));
    }
    return windows;
}

}  // namespace divad
