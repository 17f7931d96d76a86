#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "divad/tensor.hpp"

namespace divad {

enum class WindowLabel { normal, anomalous, proxy_outlier };

std::string to_string(WindowLabel label);
WindowLabel window_label_from_string(const std::string& s);

/// The scoring unit: a stack of W normalized SxS grayscale frames.
struct Window {
    Tensor<float> frames;  // [W, S, S], values in [0,1]
    std::string source_clip;
    std::size_t start_frame = 0;
    WindowLabel label = WindowLabel::normal;
    std::string group;  // cohort key for stratified evaluation; may be empty

    std::string id() const {
        return source_clip + ":" + std::to_string(start_frame);
    }
};

enum class DepthSource { static_reference, per_frame, external_file };

struct DepthMap {
    Tensor<float> z;  // [S,S] or [W,S,S], nonnegative
    DepthSource source = DepthSource::static_reference;

    void validate() const;
};

/// Grayscale conversion (luma 0.299/0.587/0.114 for RGB), scaling from
/// [0,255] to [0,1], and bilinear resize to target_size x target_size.
/// Accepts [H,W] gray or [H,W,3] RGB input.
Tensor<float> preprocess_frame(const Tensor<float>& raw, std::size_t target_size);

/// A frame interval [begin, end), e.g. an annotated anomalous episode.
struct FrameInterval {
    std::size_t begin = 0;
    std::size_t end = 0;
};

struct WindowPlan {
    std::size_t start_frame = 0;
    WindowLabel label = WindowLabel::normal;
};

/// Splits a clip of n_frames into non-overlapping windows of
/// fps*window_seconds frames each (trailing remainder dropped). A window is
/// labeled anomalous if it overlaps an anomalous interval by at least one
/// frame; proxy intervals mark windows proxy_outlier the same way, with
/// anomalous taking precedence.
std::vector<WindowPlan> windowize_plan(
    std::size_t n_frames, double fps, double window_seconds,
    const std::vector<FrameInterval>& anomalous_intervals = {},
    const std::vector<FrameInterval>& proxy_intervals = {});

/// Number of frames per window; errors unless fps*window_seconds is
/// integral.
std::size_t window_frame_count(double fps, double window_seconds);

/// Slices a clip's frame stack [N,S,S] into Windows according to the plan.
std::vector<Window> windowize(const Tensor<float>& clip_frames,
                              const std::string& clip_id, double fps,
                              double window_seconds,
                              const std::vector<FrameInterval>& anomalous_intervals = {},
                              const std::vector<FrameInterval>& proxy_intervals = {});

}  // namespace divad
