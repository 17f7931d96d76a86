#pragma once

#include <string>
#include <vector>

#include "divad/pipeline.hpp"

namespace divad {

enum class Split { train, test };

std::string to_string(Split split);
Split split_from_string(const std::string& s);

struct ClipEntry {
    std::string id;
    std::string path;  // relative to the dataset root
    Split split = Split::train;
    std::size_t frames = 0;
    double fps = 15.0;
};

struct WindowEntry {
    std::string clip_id;
    std::size_t start_frame = 0;
    WindowLabel label = WindowLabel::normal;
    std::string group;
};

/// manifest.json: clip table, window labels, split tags and proxy-outlier
/// annotations for one generated or ingested dataset.
struct DatasetManifest {
    int format_version = 1;
    double fps = 15.0;
    std::size_t window_frames = 75;
    std::size_t image_size = 64;
    std::string depth_path = "depth/static.tns";
    double background_depth = 0.0;
    std::string config_hash;
    std::vector<ClipEntry> clips;
    std::vector<WindowEntry> windows;

    /// Structural checks: window->clip references, window alignment, and
    /// train-split purity (no anomalous windows in the train split).
    void validate() const;

    const ClipEntry& clip(const std::string& id) const;

    std::vector<WindowEntry> windows_of_split(Split split) const;

    std::string to_json_string() const;
    static DatasetManifest from_json_string(const std::string& text);

    void save(const std::string& path) const;
    static DatasetManifest load(const std::string& path);

    /// `clip_id,window_start,label` rows for every window.
    void export_labels_csv(const std::string& path) const;
};

}  // namespace divad
