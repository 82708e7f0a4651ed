// Copyright 2026 The fusekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fusekit/geometry.hpp"

namespace fusekit {

enum class SplitTag { train, val, test };

const char* to_string(SplitTag t);
SplitTag split_tag_from_string(const std::string& s);

/// One frame of the assembled dataset.
struct FrameRecord {
    std::string frame_id;
    std::int64_t timestamp_us = 0;
    std::string gt_path;           // wide-camera ground-truth boxes
    std::string scan_path;         // paired radar scan
    std::string range_image_path;  // rendered radar channels
    std::string rate_image_path;
    SplitTag split = SplitTag::train;
};

struct SplitFractions {
    double train = 0.7;
    double val = 0.1;
    double test = 0.2;

    /// Must sum to 1 within 1e-9.
    void validate() const;
};

/// Frame list in capture order with contiguous split tags.
struct DatasetManifest {
    std::vector<FrameRecord> frames;
    SplitFractions fractions;
    int image_width = 0;
    int image_height = 0;
};

/// Assigns contiguous, unshuffled split tags in capture order: train then
/// val then test, boundaries at the floor of the cumulative fractions.
/// Throws ConfigError on an empty frame list.
DatasetManifest split_dataset(std::vector<FrameRecord> frames, const SplitFractions& fractions,
                              int image_width, int image_height);

/// Composed crop-translate + uniform-scale transform applied to boxes,
/// image points and camera intrinsics when a raw capture is cropped and
/// downscaled into its final size.
struct CropDownscale {
    double offset_x = 0.0;  // crop origin in raw pixels
    double offset_y = 0.0;
    double scale = 1.0;
    int raw_width = 0;
    int raw_height = 0;
    int out_width = 0;
    int out_height = 0;

    BBox apply(const BBox& box) const;
    ImagePoint apply(const ImagePoint& p) const;
    CameraIntrinsics apply(const CameraIntrinsics& k) const;
    CropDownscale inverse() const;
};

/// Builds the transform for cropping `crop` out of a raw image of
/// `raw_width` x `raw_height` and scaling by `scale`. The crop must lie
/// within the raw image and the scale must be positive.
CropDownscale crop_downscale_meta(int raw_width, int raw_height, const BBox& crop, double scale);

DatasetManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

}  // namespace fusekit
