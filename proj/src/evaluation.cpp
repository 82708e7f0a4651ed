// Copyright 2026 The fusekit Authors
// SPDX-License-Identifier: Apache-2.0

#include "fusekit/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fusekit {

const char* to_string(SizeCategory c) {
    switch (c) {
        case SizeCategory::small: return "small";
        case SizeCategory::medium: return "medium";
        case SizeCategory::large: return "large";
    }
    return "small";
}

void SizeThresholds::validate() const {
    if (!(small_fraction > 0.0) || !(large_fraction > small_fraction)) {
        throw ConfigError("size thresholds must be strictly increasing and positive");
    }
}

SizeCategory classify_size(const BBox& box, double image_width, double image_height,
                           const SizeThresholds& thresholds) {
    thresholds.validate();
    const double image_area = image_width * image_height;
    const double area = box.area();
    if (area < thresholds.small_fraction * image_area) return SizeCategory::small;
    if (area > thresholds.large_fraction * image_area) return SizeCategory::large;
    return SizeCategory::medium;
}

double iou(const BBox& a, const BBox& b) {
    const double inter = a.intersect(b).area();
    const double uni = a.area() + b.area() - inter;
    if (uni <= 0.0) return 0.0;
    return inter / uni;
}

MatchResult match_detections(std::span<const Detection> dets, std::span<const BBox> gts,
                             double iou_threshold, std::span<const char> ignored_gt) {
    MatchResult result;
    result.detection_order.resize(dets.size());
    std::iota(result.detection_order.begin(), result.detection_order.end(), std::size_t{0});
    std::stable_sort(result.detection_order.begin(), result.detection_order.end(),
                     [&dets](std::size_t a, std::size_t b) {
                         if (dets[a].objectness != dets[b].objectness) {
                             return dets[a].objectness > dets[b].objectness;
                         }
                         return dets[a].box.x_min < dets[b].box.x_min;
                     });

    result.gt_found.assign(gts.size(), 0);
    result.detection_match.reserve(dets.size());
    std::vector<char> gt_used(gts.size(), 0);

    for (std::size_t rank = 0; rank < result.detection_order.size(); ++rank) {
        const Detection& det = dets[result.detection_order[rank]];
        int best_gt = -1;
        double best_iou = 0.0;
        for (std::size_t g = 0; g < gts.size(); ++g) {
            if (gt_used[g]) continue;
            const double overlap = iou(det.box, gts[g]);
            if (overlap >= iou_threshold && overlap > best_iou) {
                best_iou = overlap;
                best_gt = static_cast<int>(g);
            }
        }
        if (best_gt < 0) {
            result.detection_match.push_back(-1);
            continue;
        }
        gt_used[static_cast<std::size_t>(best_gt)] = 1;
        const bool ignored = !ignored_gt.empty() && ignored_gt[static_cast<std::size_t>(best_gt)];
        if (ignored) {
            result.detection_match.push_back(-2);
        } else {
            result.detection_match.push_back(best_gt);
            result.gt_found[static_cast<std::size_t>(best_gt)] = 1;
        }
    }
    return result;
}

PRCurve build_pr_curve(std::vector<std::pair<double, bool>> scored, std::size_t num_gt) {
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    PRCurve curve;
    curve.num_gt = num_gt;
    std::size_t tp = 0;
    std::size_t seen = 0;
    for (std::size_t i = 0; i < scored.size(); ++i) {
        ++seen;
        if (scored[i].second) ++tp;
        // Emit one point per distinct confidence value.
        if (i + 1 < scored.size() && scored[i + 1].first == scored[i].first) continue;
        PRPoint p;
        p.confidence = scored[i].first;
        p.precision = static_cast<double>(tp) / static_cast<double>(seen);
        p.recall = num_gt == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(num_gt);
        curve.points.push_back(p);
    }
    curve.tp = tp;
    curve.fp = seen - tp;
    curve.fn = num_gt - std::min(num_gt, tp);
    return curve;
}

std::optional<double> average_precision(const PRCurve& curve) {
    if (curve.num_gt == 0) {
        return std::nullopt;
    }
    // Points are in descending confidence, so recall is non-decreasing.
    // Sweep backwards to build the monotone precision envelope.
    std::vector<double> env(curve.points.size(), 0.0);
    double envelope = 0.0;
    for (std::size_t i = curve.points.size(); i-- > 0;) {
        envelope = std::max(envelope, curve.points[i].precision);
        env[i] = envelope;
    }
    double ap = 0.0;
    double prev_recall = 0.0;
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        ap += (curve.points[i].recall - prev_recall) * env[i];
        prev_recall = curve.points[i].recall;
    }
    return ap;
}

namespace {

struct FrameData {
    std::vector<Detection> dets;
    std::vector<BBox> gts;
    std::vector<SizeCategory> gt_sizes;
};

std::map<std::string, FrameData> group_by_frame(std::span<const FrameDetection> dets,
                                                std::span<const FrameGroundTruth> gts,
                                                double image_width, double image_height,
                                                const SizeThresholds& thresholds) {
    std::map<std::string, FrameData> frames;
    for (const FrameGroundTruth& gt : gts) {
        FrameData& f = frames[gt.frame_id];
        f.gts.push_back(gt.box);
        f.gt_sizes.push_back(classify_size(gt.box, image_width, image_height, thresholds));
    }
    for (const FrameDetection& det : dets) {
        frames[det.frame_id].dets.push_back(det.detection);
    }
    return frames;
}

CategoryReport evaluate_category(const std::map<std::string, FrameData>& frames,
                                 std::optional<SizeCategory> category, double iou_threshold) {
    std::vector<std::pair<double, bool>> scored;
    std::size_t num_gt = 0;
    for (const auto& [frame_id, f] : frames) {
        std::vector<char> ignored(f.gts.size(), 0);
        if (category) {
            for (std::size_t g = 0; g < f.gts.size(); ++g) {
                ignored[g] = f.gt_sizes[g] != *category ? 1 : 0;
            }
        }
        for (char ig : ignored) {
            if (!ig) ++num_gt;
        }
        const MatchResult match =
            match_detections(f.dets, f.gts, iou_threshold, ignored);
        for (std::size_t rank = 0; rank < match.detection_order.size(); ++rank) {
            const int m = match.detection_match[rank];
            if (m == -2) continue;  // matched an ignored gt
            scored.emplace_back(f.dets[match.detection_order[rank]].objectness, m >= 0);
        }
    }
    CategoryReport report;
    report.curve = build_pr_curve(std::move(scored), num_gt);
    report.ap = average_precision(report.curve);
    return report;
}

}  // namespace

EvaluationReport evaluate_detections(std::span<const FrameDetection> dets,
                                     std::span<const FrameGroundTruth> gts, double image_width,
                                     double image_height, double iou_threshold,
                                     const SizeThresholds& thresholds) {
    const auto frames = group_by_frame(dets, gts, image_width, image_height, thresholds);
    EvaluationReport report;
    report.iou_threshold = iou_threshold;
    report.categories["small"] = evaluate_category(frames, SizeCategory::small, iou_threshold);
    report.categories["medium"] = evaluate_category(frames, SizeCategory::medium, iou_threshold);
    report.categories["large"] = evaluate_category(frames, SizeCategory::large, iou_threshold);
    report.categories["all"] = evaluate_category(frames, std::nullopt, iou_threshold);
    return report;
}

}  // namespace fusekit
