// Copyright 2026 The fusekit Authors
// SPDX-License-Identifier: Apache-2.0

#include "fusekit/labeling.hpp"

#include <algorithm>
#include <cmath>

namespace fusekit {

const char* to_string(ObjectClass c) {
    switch (c) {
        case ObjectClass::vehicle: return "vehicle";
        case ObjectClass::pedestrian: return "pedestrian";
    }
    return "vehicle";
}

const char* to_string(DetectionSource s) {
    switch (s) {
        case DetectionSource::wide: return "wide";
        case DetectionSource::narrow: return "narrow";
        case DetectionSource::transferred: return "transferred";
    }
    return "wide";
}

ObjectClass object_class_from_string(const std::string& s) {
    if (s == "vehicle") return ObjectClass::vehicle;
    if (s == "pedestrian") return ObjectClass::pedestrian;
    throw ConfigError("unknown object class: " + s);
}

DetectionSource detection_source_from_string(const std::string& s) {
    if (s == "wide") return DetectionSource::wide;
    if (s == "narrow") return DetectionSource::narrow;
    if (s == "transferred") return DetectionSource::transferred;
    throw ConfigError("unknown detection source: " + s);
}

void Detection::validate() const {
    if (!box.valid()) {
        throw ConfigError("detection box violates x_min <= x_max, y_min <= y_max");
    }
    if (!(objectness >= 0.0 && objectness <= 1.0)) {
        throw ConfigError("detection objectness outside [0, 1]");
    }
    double sum = 0.0;
    for (double p : class_probs) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ConfigError("detection class probability outside [0, 1]");
        }
        sum += p;
    }
    if (sum > 1.0 + 1e-6) {
        throw ConfigError("detection class probabilities sum above 1");
    }
}

JointRegion compute_joint_region(const CameraIntrinsics& k_a, const CameraIntrinsics& k_b,
                                 const Rotation3& r_ab) {
    const double w = static_cast<double>(k_b.width);
    const double h = static_cast<double>(k_b.height);
    const BBox narrow_frame{0.0, 0.0, w, h};
    BBox transferred;
    try {
        transferred = transfer_box(narrow_frame, k_a, k_b, r_ab);
    } catch (const TransferDegenerateError& e) {
        throw CalibrationError(std::string("joint region: ") + e.what());
    }
    JointRegion joint;
    joint.region = transferred.clip(static_cast<double>(k_a.width),
                                    static_cast<double>(k_a.height));
    return joint;
}

double overlap_with_joint(const BBox& box, const JointRegion& joint) {
    const double denom = std::min(box.area(), joint.area());
    if (denom <= 0.0) {
        return 0.0;
    }
    return box.intersect(joint.region).area() / denom;
}

std::vector<Detection> merge_detections(std::span<const Detection> dets_a,
                                        std::span<const Detection> dets_b,
                                        const RigCalibration& calib, double tau) {
    if (!(tau >= 0.0 && tau <= 1.0)) {
        throw ConfigError("merge threshold tau must be in [0, 1]");
    }
    const CameraIntrinsics& k_a = calib.camera_wide;
    const CameraIntrinsics& k_b = calib.camera_narrow;
    const JointRegion joint = compute_joint_region(k_a, k_b, calib.rotation_wide_narrow);
    const double wa = static_cast<double>(k_a.width);
    const double ha = static_cast<double>(k_a.height);

    std::vector<Detection> merged;
    merged.reserve(dets_a.size() + dets_b.size());

    for (const Detection& det : dets_b) {
        Detection t = det;
        t.box = transfer_box(det.box, k_a, k_b, calib.rotation_wide_narrow).clip(wa, ha);
        t.source = DetectionSource::transferred;
        merged.push_back(t);
    }
    for (const Detection& det : dets_a) {
        if (overlap_with_joint(det.box, joint) <= tau) {
            merged.push_back(det);
        }
    }

    std::stable_sort(merged.begin(), merged.end(), [](const Detection& a, const Detection& b) {
        if (a.objectness != b.objectness) return a.objectness > b.objectness;
        return a.box.x_min < b.box.x_min;
    });
    return merged;
}

std::vector<BBox> flip_boxes(std::span<const BBox> boxes, double image_width) {
    std::vector<BBox> out;
    out.reserve(boxes.size());
    for (const BBox& b : boxes) {
        BBox f;
        f.x_min = image_width - b.x_max;
        f.x_max = image_width - b.x_min;
        f.y_min = b.y_min;
        f.y_max = b.y_max;
        out.push_back(f);
    }
    return out;
}

std::vector<BBox> crop_resize_boxes(std::span<const BBox> boxes, const BBox& crop,
                                    double image_width, double image_height, double out_width,
                                    double out_height) {
    if (!crop.valid() || crop.x_min < 0.0 || crop.y_min < 0.0 || crop.x_max > image_width ||
        crop.y_max > image_height) {
        throw ConfigError("crop must lie within the image");
    }
    const double frac_x = crop.width() / image_width;
    const double frac_y = crop.height() / image_height;
    constexpr double kMinCropFraction = 0.6;
    constexpr double kTol = 1e-9;
    if (frac_x < kMinCropFraction - kTol || frac_y < kMinCropFraction - kTol ||
        frac_x > 1.0 + kTol || frac_y > 1.0 + kTol) {
        throw ConfigError("crop fraction must be within [0.6, 1.0] of full image dimensions");
    }
    const double sx = out_width / crop.width();
    const double sy = out_height / crop.height();

    std::vector<BBox> out;
    out.reserve(boxes.size());
    for (const BBox& b : boxes) {
        BBox r;
        r.x_min = (b.x_min - crop.x_min) * sx;
        r.x_max = (b.x_max - crop.x_min) * sx;
        r.y_min = (b.y_min - crop.y_min) * sy;
        r.y_max = (b.y_max - crop.y_min) * sy;
        r = r.clip(out_width, out_height);
        if (r.area() > 0.0) {
            out.push_back(r);
        }
    }
    return out;
}

}  // namespace fusekit
