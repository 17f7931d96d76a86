#include "divad/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

namespace divad {

using nlohmann::json;

std::string to_string(Split split) {
    return split == Split::train ? "train" : "test";
}

Split split_from_string(const std::string& s) {
    if (s == "train") return Split::train;
    if (s == "test") return Split::test;
    throw Error("unknown split '" + s + "'");
}

void DatasetManifest::validate() const {
    std::set<std::string> ids;
    for (const auto& c : clips) {
        if (!ids.insert(c.id).second)
            throw Error("manifest: duplicate clip id '" + c.id + "'");
        if (c.frames == 0)
            throw Error("manifest: clip '" + c.id + "' has zero frames");
    }
    std::set<std::pair<std::string, std::size_t>> seen;
    for (const auto& w : windows) {
        const auto& c = clip(w.clip_id);
        if (w.start_frame % window_frames != 0)
            throw Error("manifest: window " + w.clip_id + ":" +
                        std::to_string(w.start_frame) +
                        " is not aligned to the window size");
        if (w.start_frame + window_frames > c.frames)
            throw Error("manifest: window " + w.clip_id + ":" +
                        std::to_string(w.start_frame) +
                        " extends past the end of its clip");
        if (!seen.insert({w.clip_id, w.start_frame}).second)
            throw Error("manifest: duplicate window " + w.clip_id + ":" +
                        std::to_string(w.start_frame));
        if (c.split == Split::train && w.label == WindowLabel::anomalous)
            throw Error("manifest: train split contains anomalous window " +
                        w.clip_id + ":" + std::to_string(w.start_frame));
    }
}

const ClipEntry& DatasetManifest::clip(const std::string& id) const {
    for (const auto& c : clips)
        if (c.id == id) return c;
    throw Error("manifest: window references unknown clip '" + id + "'");
}

std::vector<WindowEntry> DatasetManifest::windows_of_split(Split split) const {
    std::vector<WindowEntry> out;
    for (const auto& w : windows)
        if (clip(w.clip_id).split == split) out.push_back(w);
    return out;
}

std::string DatasetManifest::to_json_string() const {
    json j;
    j["format_version"] = format_version;
    j["fps"] = fps;
    j["window_frames"] = window_frames;
    j["image_size"] = image_size;
    j["depth_path"] = depth_path;
    j["background_depth"] = background_depth;
    j["config_hash"] = config_hash;
    j["clips"] = json::array();
    for (const auto& c : clips) {
        j["clips"].push_back({{"id", c.id},
                              {"path", c.path},
                              {"split", to_string(c.split)},
                              {"frames", c.frames},
                              {"fps", c.fps}});
    }
    j["windows"] = json::array();
    for (const auto& w : windows) {
        json jw = {{"clip_id", w.clip_id},
                   {"start_frame", w.start_frame},
                   {"label", to_string(w.label)}};
        if (!w.group.empty()) jw["group"] = w.group;
        j["windows"].push_back(jw);
    }
    return j.dump(2) + "\n";
}

DatasetManifest DatasetManifest::from_json_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(std::string("manifest: invalid JSON: ") + e.what());
    }
    DatasetManifest m;
    try {
        m.format_version = j.at("format_version").get<int>();
        if (m.format_version != 1)
            throw Error("manifest: unsupported format_version " +
                        std::to_string(m.format_version));
        m.fps = j.at("fps").get<double>();
        m.window_frames = j.at("window_frames").get<std::size_t>();
        m.image_size = j.at("image_size").get<std::size_t>();
        m.depth_path = j.value("depth_path", std::string("depth/static.tns"));
        m.background_depth = j.value("background_depth", 0.0);
        m.config_hash = j.value("config_hash", std::string());
        for (const auto& jc : j.at("clips")) {
            ClipEntry c;
            c.id = jc.at("id").get<std::string>();
            c.path = jc.at("path").get<std::string>();
            c.split = split_from_string(jc.at("split").get<std::string>());
            c.frames = jc.at("frames").get<std::size_t>();
            c.fps = jc.at("fps").get<double>();
            m.clips.push_back(std::move(c));
        }
        for (const auto& jw : j.at("windows")) {
            WindowEntry w;
            w.clip_id = jw.at("clip_id").get<std::string>();
            w.start_frame = jw.at("start_frame").get<std::size_t>();
            w.label = window_label_from_string(jw.at("label").get<std::string>());
            w.group = jw.value("group", std::string());
            m.windows.push_back(std::move(w));
        }
    } catch (const json::exception& e) {
        throw Error(std::string("manifest: schema error: ") + e.what());
    }
    return m;
}

void DatasetManifest::save(const std::string& path) const {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("manifest: cannot open '" + tmp + "'");
        out << to_json_string();
        if (!out) throw Error("manifest: write failed for '" + tmp + "'");
    }
    std::filesystem::rename(tmp, path);
}

DatasetManifest DatasetManifest::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("manifest: cannot open '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return from_json_string(text);
}

void DatasetManifest::export_labels_csv(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("manifest: cannot open '" + path + "'");
    out << "clip_id,window_start,label\n";
    for (const auto& w : windows)
        out << w.clip_id << "," << w.start_frame << "," << to_string(w.label)
            << "\n";
    if (!out) throw Error("manifest: write failed for '" + path + "'");
}

}  // namespace divad
