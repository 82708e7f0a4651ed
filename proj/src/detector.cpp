// Copyright 2026 The fusekit Authors
// SPDX-License-Identifier: Apache-2.0

#include "fusekit/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fusekit/evaluation.hpp"

namespace fusekit {

void AnchorConfig::validate() const {
    if (feature_maps.empty()) {
        throw ConfigError("anchor config: no feature maps");
    }
    if (scales.size() != feature_maps.size()) {
        throw ConfigError("anchor config: need one scale per feature map");
    }
    if (aspect_ratios.empty()) {
        throw ConfigError("anchor config: no aspect ratios");
    }
    if (subdivisions < 1) {
        throw ConfigError("anchor config: subdivisions must be >= 1");
    }
    for (const FeatureMapSize& m : feature_maps) {
        if (m.width <= 0 || m.height <= 0) {
            throw ConfigError("anchor config: feature map dimensions must be positive");
        }
    }
    for (double s : scales) {
        if (!(s > 0.0)) throw ConfigError("anchor config: scales must be positive");
    }
    for (double a : aspect_ratios) {
        if (!(a > 0.0)) throw ConfigError("anchor config: aspect ratios must be positive");
    }
}

std::vector<DefaultBox> generate_default_boxes(const AnchorConfig& config) {
    config.validate();
    const int s = config.subdivisions;
    std::vector<DefaultBox> boxes;
    std::size_t total = 0;
    for (std::size_t k = 0; k < config.feature_maps.size(); ++k) {
        total += static_cast<std::size_t>(config.feature_maps[k].width) *
                 config.feature_maps[k].height * s * s * config.aspect_ratios.size();
    }
    boxes.reserve(total);

    for (std::size_t k = 0; k < config.feature_maps.size(); ++k) {
        const FeatureMapSize& map = config.feature_maps[k];
        const double scale = config.scales[k];
        for (int j = 0; j < map.height; ++j) {
            for (int i = 0; i < map.width; ++i) {
                for (int sub = 0; sub < s * s; ++sub) {
                    const int sub_x = sub % s;
                    const int sub_y = sub / s;
                    const double cx = (i + (sub_x + 0.5) / s) / map.width;
                    const double cy = (j + (sub_y + 0.5) / s) / map.height;
                    for (std::size_t a = 0; a < config.aspect_ratios.size(); ++a) {
                        const double root = std::sqrt(config.aspect_ratios[a]);
                        DefaultBox box;
                        box.cx = cx;
                        box.cy = cy;
                        box.w = scale * root;
                        box.h = scale / root;
                        box.scale_index = static_cast<int>(k);
                        box.aspect_index = static_cast<int>(a);
                        box.subdivision_index = sub;
                        boxes.push_back(box);
                    }
                }
            }
        }
    }
    return boxes;
}

int MatchAssignment::num_matched() const {
    return static_cast<int>(std::count_if(matched_gt.begin(), matched_gt.end(),
                                          [](int m) { return m != kNegative; }));
}

MatchAssignment match_boxes(std::span<const DefaultBox> defaults, std::span<const BBox> gt_boxes,
                            double iou_threshold) {
    MatchAssignment assignment;
    assignment.matched_gt.assign(defaults.size(), MatchAssignment::kNegative);
    if (gt_boxes.empty() || defaults.empty()) {
        return assignment;
    }

    std::vector<std::vector<double>> overlaps(defaults.size(),
                                              std::vector<double>(gt_boxes.size(), 0.0));
    for (std::size_t d = 0; d < defaults.size(); ++d) {
        const BBox db = defaults[d].corners();
        for (std::size_t g = 0; g < gt_boxes.size(); ++g) {
            overlaps[d][g] = iou(db, gt_boxes[g]);
        }
    }

    // Bipartite pass: every gt claims its own best default, picking the
    // globally strongest pairs first so no two gts share one default.
    std::vector<char> gt_claimed(gt_boxes.size(), 0);
    std::vector<char> default_claimed(defaults.size(), 0);
    for (std::size_t round = 0; round < gt_boxes.size(); ++round) {
        double best = -1.0;
        std::size_t best_d = 0;
        std::size_t best_g = 0;
        bool found = false;
        for (std::size_t d = 0; d < defaults.size(); ++d) {
            if (default_claimed[d]) continue;
            for (std::size_t g = 0; g < gt_boxes.size(); ++g) {
                if (gt_claimed[g]) continue;
                if (overlaps[d][g] > best) {
                    best = overlaps[d][g];
                    best_d = d;
                    best_g = g;
                    found = true;
                }
            }
        }
        if (!found) break;
        gt_claimed[best_g] = 1;
        default_claimed[best_d] = 1;
        assignment.matched_gt[best_d] = static_cast<int>(best_g);
    }

    // Threshold pass for the remaining defaults.
    for (std::size_t d = 0; d < defaults.size(); ++d) {
        if (default_claimed[d]) continue;
        int best_g = MatchAssignment::kNegative;
        double best = 0.0;
        for (std::size_t g = 0; g < gt_boxes.size(); ++g) {
            if (overlaps[d][g] >= iou_threshold && overlaps[d][g] > best) {
                best = overlaps[d][g];
                best_g = static_cast<int>(g);
            }
        }
        assignment.matched_gt[d] = best_g;
    }
    return assignment;
}

SmoothL1 smooth_l1(double x) {
    SmoothL1 r;
    if (std::abs(x) < 1.0) {
        r.value = 0.5 * x * x;
        r.gradient = x;
    } else {
        r.value = std::abs(x) - 0.5;
        r.gradient = x > 0.0 ? 1.0 : -1.0;
    }
    return r;
}

namespace {

// Stable log-softmax: log(exp(x_i)/sum) = x_i - max - log(sum exp(x - max)).
std::vector<double> log_softmax(const std::vector<double>& logits) {
    const double mx = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double v : logits) sum += std::exp(v - mx);
    const double log_sum = std::log(sum);
    std::vector<double> out(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out[i] = logits[i] - mx - log_sum;
    }
    return out;
}

}  // namespace

ClassificationLoss classification_loss(std::span<const std::vector<double>> scores,
                                       const MatchAssignment& assignment,
                                       std::span<const int> gt_classes, int negative_ratio) {
    if (scores.size() != assignment.matched_gt.size()) {
        throw ConfigError("classification_loss: scores/assignment size mismatch");
    }
    ClassificationLoss result;
    result.gradients.resize(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        result.gradients[i].assign(scores[i].size(), 0.0);
    }
    const int num_matched = assignment.num_matched();
    if (num_matched == 0) {
        return result;
    }

    // Hard negative mining: keep the negatives the classifier finds
    // hardest to call background.
    std::vector<std::pair<double, std::size_t>> negative_losses;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (assignment.matched_gt[i] != MatchAssignment::kNegative) continue;
        const std::vector<double> lsm = log_softmax(scores[i]);
        negative_losses.emplace_back(-lsm[0], i);
    }
    const std::size_t num_negatives =
        std::min(negative_losses.size(),
                 static_cast<std::size_t>(negative_ratio) * static_cast<std::size_t>(num_matched));
    std::partial_sort(negative_losses.begin(), negative_losses.begin() + num_negatives,
                      negative_losses.end(), [](const auto& a, const auto& b) {
                          if (a.first != b.first) return a.first > b.first;
                          return a.second < b.second;
                      });

    std::vector<char> selected(scores.size(), 0);
    std::vector<int> labels(scores.size(), 0);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const int m = assignment.matched_gt[i];
        if (m != MatchAssignment::kNegative) {
            selected[i] = 1;
            if (m < 0 || static_cast<std::size_t>(m) >= gt_classes.size()) {
                throw ConfigError("classification_loss: match index outside gt_classes");
            }
            labels[i] = gt_classes[static_cast<std::size_t>(m)] + 1;  // 0 is background
        }
    }
    for (std::size_t n = 0; n < num_negatives; ++n) {
        selected[negative_losses[n].second] = 1;
        labels[negative_losses[n].second] = 0;
    }

    double total = 0.0;
    const double norm = 1.0 / static_cast<double>(num_matched);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!selected[i]) continue;
        const int label = labels[i];
        if (label < 0 || static_cast<std::size_t>(label) >= scores[i].size()) {
            throw ConfigError("classification_loss: class label outside score vector");
        }
        const std::vector<double> lsm = log_softmax(scores[i]);
        total += -lsm[static_cast<std::size_t>(label)];
        for (std::size_t c = 0; c < scores[i].size(); ++c) {
            const double softmax = std::exp(lsm[c]);
            result.gradients[i][c] =
                (softmax - (static_cast<int>(c) == label ? 1.0 : 0.0)) * norm;
        }
    }
    result.value = total * norm;
    return result;
}

std::vector<Detection> nms(std::span<const Detection> detections, double iou_threshold,
                           std::size_t max_out) {
    std::vector<std::size_t> order(detections.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&detections](std::size_t a, std::size_t b) {
        if (detections[a].objectness != detections[b].objectness) {
            return detections[a].objectness > detections[b].objectness;
        }
        return detections[a].box.x_min < detections[b].box.x_min;
    });

    std::vector<Detection> kept;
    kept.reserve(std::min(max_out, detections.size()));
    for (std::size_t idx : order) {
        if (kept.size() >= max_out) break;
        const Detection& candidate = detections[idx];
        bool suppressed = false;
        for (const Detection& k : kept) {
            if (k.class_id != candidate.class_id) continue;
            if (iou(k.box, candidate.box) > iou_threshold) {
                suppressed = true;
                break;
            }
        }
        if (!suppressed) {
            kept.push_back(candidate);
        }
    }
    return kept;
}

}  // namespace fusekit
