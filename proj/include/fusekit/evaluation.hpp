// Copyright 2026 The fusekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fusekit/geometry.hpp"
#include "fusekit/labeling.hpp"

namespace fusekit {

enum class SizeCategory { small, medium, large };

const char* to_string(SizeCategory c);

/// Image-area-fraction thresholds between the size buckets. Both
/// boundaries are inclusive to medium.
struct SizeThresholds {
    double small_fraction = 0.0025;  // below: small
    double large_fraction = 0.025;   // above: large

    void validate() const;
};

/// Buckets a box by the fraction of image area it occupies.
SizeCategory classify_size(const BBox& box, double image_width, double image_height,
                           const SizeThresholds& thresholds = {});

/// Intersection area over union area; 0 when the union has zero area.
double iou(const BBox& a, const BBox& b);

/// A detection tagged with the frame it belongs to.
struct FrameDetection {
    std::string frame_id;
    Detection detection;
};

/// A ground-truth box tagged with its frame.
struct FrameGroundTruth {
    std::string frame_id;
    BBox box;
    ObjectClass class_id = ObjectClass::vehicle;
};

struct MatchResult {
    // Per detection, in descending-confidence order: matched gt index
    // (into the gts span) or -1 for FP; -2 marks an ignored detection.
    std::vector<int> detection_match;
    std::vector<char> gt_found;  // per gt, 1 when matched
    // Descending-confidence permutation of the input detections.
    std::vector<std::size_t> detection_order;
};

/// Greedy confidence-ordered matching within one frame: each detection
/// takes the highest-IoU unmatched ground truth with IoU >= threshold.
/// Ties in confidence break by ascending x_min; ties in IoU by lower gt
/// index. `ignored_gt`, when non-empty, marks ground truths that absorb
/// detections without scoring them (KITTI-style don't-care).
MatchResult match_detections(std::span<const Detection> dets, std::span<const BBox> gts,
                             double iou_threshold = 0.5,
                             std::span<const char> ignored_gt = {});

/// One point of a precision/recall sweep.
struct PRPoint {
    double confidence = 0.0;
    double precision = 0.0;
    double recall = 0.0;
};

struct PRCurve {
    std::vector<PRPoint> points;  // descending confidence
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t num_gt = 0;
};

/// VOC2012 average precision: the integral over recall of the monotone
/// envelope p~(r) = max over r' >= r of p(r'). Absent when there is no
/// ground truth.
std::optional<double> average_precision(const PRCurve& curve);

/// Builds the PR sweep from scored detections: (confidence, is_tp) pairs
/// plus the ground-truth count. Equal confidences collapse to one point.
PRCurve build_pr_curve(std::vector<std::pair<double, bool>> scored, std::size_t num_gt);

struct CategoryReport {
    std::optional<double> ap;
    PRCurve curve;
};

struct EvaluationReport {
    std::map<std::string, CategoryReport> categories;  // small, medium, large, all
    double iou_threshold = 0.5;
};

/// Frame-by-frame evaluation of a detection set against ground truth with
/// per-size-category APs. Out-of-category ground truths are ignored (not
/// counted, and detections matched to them are excluded).
EvaluationReport evaluate_detections(std::span<const FrameDetection> dets,
                                     std::span<const FrameGroundTruth> gts, double image_width,
                                     double image_height, double iou_threshold = 0.5,
                                     const SizeThresholds& thresholds = {});

}  // namespace fusekit
