// Copyright 2026 The fusekit Authors
// SPDX-License-Identifier: Apache-2.0

#include "fusekit/dataset.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fusekit/errors.hpp"

namespace fusekit {

using nlohmann::ordered_json;

const char* to_string(SplitTag t) {
    switch (t) {
        case SplitTag::train: return "train";
        case SplitTag::val: return "val";
        case SplitTag::test: return "test";
    }
    return "train";
}

SplitTag split_tag_from_string(const std::string& s) {
    if (s == "train") return SplitTag::train;
    if (s == "val") return SplitTag::val;
    if (s == "test") return SplitTag::test;
    throw ConfigError("unknown split tag: " + s);
}

void SplitFractions::validate() const {
    if (train < 0.0 || val < 0.0 || test < 0.0) {
        throw ConfigError("split fractions must be non-negative");
    }
    if (std::abs(train + val + test - 1.0) > 1e-9) {
        throw ConfigError("split fractions must sum to 1");
    }
}

DatasetManifest split_dataset(std::vector<FrameRecord> frames, const SplitFractions& fractions,
                              int image_width, int image_height) {
    fractions.validate();
    if (frames.empty()) {
        throw ConfigError("split_dataset: no frames");
    }
    const auto n = static_cast<double>(frames.size());
    const auto train_end = static_cast<std::size_t>(std::floor(fractions.train * n));
    const auto val_end = static_cast<std::size_t>(std::floor((fractions.train + fractions.val) * n));
    for (std::size_t i = 0; i < frames.size(); ++i) {
        frames[i].split = i < train_end  ? SplitTag::train
                          : i < val_end ? SplitTag::val
                                        : SplitTag::test;
    }
    DatasetManifest manifest;
    manifest.frames = std::move(frames);
    manifest.fractions = fractions;
    manifest.image_width = image_width;
    manifest.image_height = image_height;
    return manifest;
}

BBox CropDownscale::apply(const BBox& box) const {
    return {(box.x_min - offset_x) * scale, (box.y_min - offset_y) * scale,
            (box.x_max - offset_x) * scale, (box.y_max - offset_y) * scale};
}

ImagePoint CropDownscale::apply(const ImagePoint& p) const {
    return {(p.u - offset_x) * scale, (p.v - offset_y) * scale};
}

CameraIntrinsics CropDownscale::apply(const CameraIntrinsics& k) const {
    CameraIntrinsics out;
    out.fx = k.fx * scale;
    out.fy = k.fy * scale;
    out.cx = (k.cx - offset_x) * scale;
    out.cy = (k.cy - offset_y) * scale;
    out.width = out_width;
    out.height = out_height;
    return out;
}

CropDownscale CropDownscale::inverse() const {
    CropDownscale inv;
    inv.offset_x = -offset_x * scale;
    inv.offset_y = -offset_y * scale;
    inv.scale = 1.0 / scale;
    inv.raw_width = out_width;
    inv.raw_height = out_height;
    inv.out_width = raw_width;
    inv.out_height = raw_height;
    return inv;
}

CropDownscale crop_downscale_meta(int raw_width, int raw_height, const BBox& crop, double scale) {
    if (!(scale > 0.0)) {
        throw ConfigError("crop_downscale_meta: scale must be positive");
    }
    if (!crop.valid() || crop.x_min < 0.0 || crop.y_min < 0.0 || crop.x_max > raw_width ||
        crop.y_max > raw_height || crop.area() <= 0.0) {
        throw ConfigError("crop_downscale_meta: crop outside raw image");
    }
    CropDownscale t;
    t.offset_x = crop.x_min;
    t.offset_y = crop.y_min;
    t.scale = scale;
    t.raw_width = raw_width;
    t.raw_height = raw_height;
    t.out_width = static_cast<int>(std::lround(crop.width() * scale));
    t.out_height = static_cast<int>(std::lround(crop.height() * scale));
    return t;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open manifest: " + path.string());
    }
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError(std::string("manifest: invalid JSON: ") + e.what());
    }
    try {
        DatasetManifest m;
        if (j.value("format", "") != "fusekit-manifest-v1") {
            throw IoError("manifest: unknown format tag");
        }
        m.image_width = j.at("image_dims").at("width").get<int>();
        m.image_height = j.at("image_dims").at("height").get<int>();
        m.fractions.train = j.at("split_fractions").at("train").get<double>();
        m.fractions.val = j.at("split_fractions").at("val").get<double>();
        m.fractions.test = j.at("split_fractions").at("test").get<double>();
        for (const auto& fj : j.at("frames")) {
            FrameRecord r;
            r.frame_id = fj.at("frame_id").get<std::string>();
            r.timestamp_us = fj.at("timestamp_us").get<std::int64_t>();
            r.gt_path = fj.at("gt").get<std::string>();
            r.scan_path = fj.at("scan").get<std::string>();
            r.range_image_path = fj.at("radar_range").get<std::string>();
            r.rate_image_path = fj.at("radar_rate").get<std::string>();
            r.split = split_tag_from_string(fj.at("split").get<std::string>());
            m.frames.push_back(r);
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("manifest: ") + e.what());
    }
}

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
    ordered_json j;
    j["format"] = "fusekit-manifest-v1";
    j["image_dims"] = {{"width", manifest.image_width}, {"height", manifest.image_height}};
    j["split_fractions"] = {{"train", manifest.fractions.train},
                            {"val", manifest.fractions.val},
                            {"test", manifest.fractions.test}};
    j["frames"] = ordered_json::array();
    for (const FrameRecord& r : manifest.frames) {
        ordered_json fj;
        fj["frame_id"] = r.frame_id;
        fj["timestamp_us"] = r.timestamp_us;
        fj["gt"] = r.gt_path;
        fj["scan"] = r.scan_path;
        fj["radar_range"] = r.range_image_path;
        fj["radar_rate"] = r.rate_image_path;
        fj["split"] = to_string(r.split);
        j["frames"].push_back(fj);
    }
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write manifest: " + path.string());
    }
    out << j.dump(2) << "\n";
}

}  // namespace fusekit
