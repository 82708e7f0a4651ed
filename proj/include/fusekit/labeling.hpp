// Copyright 2026 The fusekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "fusekit/calibration.hpp"
#include "fusekit/geometry.hpp"

namespace fusekit {

enum class ObjectClass { vehicle = 0, pedestrian = 1 };
constexpr int kNumObjectClasses = 2;

enum class DetectionSource { wide, narrow, transferred };

const char* to_string(ObjectClass c);
const char* to_string(DetectionSource s);
ObjectClass object_class_from_string(const std::string& s);
DetectionSource detection_source_from_string(const std::string& s);

/// A single detector output: box, objectness P(O) and per-class P(C|O).
struct Detection {
    BBox box;
    double objectness = 0.0;
    std::array<double, kNumObjectClasses> class_probs{};
    ObjectClass class_id = ObjectClass::vehicle;
    DetectionSource source = DetectionSource::wide;

    /// Checks probability ranges and box validity; throws ConfigError.
    void validate() const;
};

/// The wide-camera image region also observed by the narrow camera.
struct JointRegion {
    BBox region;  // wide-camera pixels, clipped to wide bounds

    double area() const { return region.area(); }
};

/// Axis-aligned bounding box, in wide-camera pixels, of the narrow image's
/// four corners transferred into the wide camera, clipped to wide bounds.
/// Degenerate corner transfers surface as CalibrationError.
JointRegion compute_joint_region(const CameraIntrinsics& k_a, const CameraIntrinsics& k_b,
                                 const Rotation3& r_ab);

/// Border-overlap ratio: area(box ∩ joint) / min(area(box), area(joint)).
/// Defined as 0 when either area is zero.
double overlap_with_joint(const BBox& box, const JointRegion& joint);

/// Merges wide (A) and narrow (B) detections into one wide-frame label set:
/// every B detection is transferred and clipped to the wide bounds, tagged
/// `transferred`; A detections whose joint-region overlap exceeds tau are
/// discarded. Output sorted by descending objectness, ties by ascending
/// x_min. Throws ConfigError unless tau is in [0, 1].
std::vector<Detection> merge_detections(std::span<const Detection> dets_a,
                                        std::span<const Detection> dets_b,
                                        const RigCalibration& calib, double tau);

/// Mirrors boxes about the vertical image centre line: x -> width - x.
std::vector<BBox> flip_boxes(std::span<const BBox> boxes, double image_width);

/// Label-space counterpart of crop-then-resize augmentation: boxes are
/// translated by the crop origin, scaled to out_size and clipped; boxes
/// left with zero area are dropped. The crop must lie within the image and
/// span at least 0.6 of each full dimension (ConfigError otherwise).
std::vector<BBox> crop_resize_boxes(std::span<const BBox> boxes, const BBox& crop,
                                    double image_width, double image_height, double out_width,
                                    double out_height);

}  // namespace fusekit
