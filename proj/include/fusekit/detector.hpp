// Copyright 2026 The fusekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fusekit/geometry.hpp"
#include "fusekit/labeling.hpp"

namespace fusekit {

/// Prior box in normalized image fractions, centre/size form.
struct DefaultBox {
    double cx = 0.0;
    double cy = 0.0;
    double w = 0.0;
    double h = 0.0;
    int scale_index = 0;
    int aspect_index = 0;
    int subdivision_index = 0;  // 0 .. s*s-1, row-major within the cell

    BBox corners() const { return {cx - w / 2.0, cy - h / 2.0, cx + w / 2.0, cy + h / 2.0}; }
};

struct FeatureMapSize {
    int width = 0;
    int height = 0;
};

/// Anchor generation settings. `scales[k]` is the box scale of feature map
/// k (normalized), aspect ratios are shared across maps, and `subdivisions`
/// duplicates every box on an s x s sub-grid of each cell.
struct AnchorConfig {
    std::vector<FeatureMapSize> feature_maps;
    std::vector<double> scales;  // one per feature map
    std::vector<double> aspect_ratios;
    int subdivisions = 2;

    void validate() const;
};

/// Generates sum over maps of w*h*s^2*|aspects| boxes. With s = 1 the
/// centres reduce to the standard ((i+0.5)/w, (j+0.5)/h) grid.
std::vector<DefaultBox> generate_default_boxes(const AnchorConfig& config);

/// Per-default-box assignment; kNegative marks background.
struct MatchAssignment {
    static constexpr int kNegative = -1;
    std::vector<int> matched_gt;  // gt index or kNegative, one per default box

    int num_matched() const;
};

/// SSD-style matching: a bipartite pass first guarantees every ground
/// truth its single best default box (greedy on globally highest IoU,
/// ties to the lower default then lower gt index), then any free default
/// with IoU >= threshold joins its best ground truth.
/// Ground-truth boxes are expected in the same normalized coordinates as
/// the default boxes.
MatchAssignment match_boxes(std::span<const DefaultBox> defaults, std::span<const BBox> gt_boxes,
                            double iou_threshold = 0.5);

struct SmoothL1 {
    double value = 0.0;
    double gradient = 0.0;
};

/// Huber-style regression loss: 0.5 x^2 for |x| < 1, |x| - 0.5 otherwise.
SmoothL1 smooth_l1(double x);

struct ClassificationLoss {
    double value = 0.0;
    // d(loss)/d(logit), same shape as the input scores.
    std::vector<std::vector<double>> gradients;
};

/// Softmax cross-entropy over matched boxes plus hard-mined negatives
/// (highest-loss negatives at `negative_ratio` per match), normalized by
/// the match count. Class 0 is background; a matched box's label is
/// gt_classes[matched_gt] + 1. Zero matches yields a loss of 0.
ClassificationLoss classification_loss(std::span<const std::vector<double>> scores,
                                       const MatchAssignment& assignment,
                                       std::span<const int> gt_classes,
                                       int negative_ratio = 3);

/// Greedy class-wise non-maximum suppression: keep by descending
/// objectness (ties by ascending x_min), suppress any same-class box with
/// IoU strictly above the threshold against a kept box, cap the output.
std::vector<Detection> nms(std::span<const Detection> detections, double iou_threshold = 0.45,
                           std::size_t max_out = 200);

}  // namespace fusekit
