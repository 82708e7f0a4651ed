// Copyright 2026 The fusekit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "fusekit/detector.hpp"
#include "oracles.hpp"

using namespace fusekit;

namespace {

Detection make_det(const BBox& box, double conf, ObjectClass cls = ObjectClass::vehicle) {
    Detection d;
    d.box = box;
    d.objectness = conf;
    d.class_probs = {1.0, 0.0};
    d.class_id = cls;
    return d;
}

AnchorConfig random_anchor_config(std::mt19937& rng) {
    AnchorConfig cfg;
    std::uniform_int_distribution<int> maps(1, 3);
    std::uniform_int_distribution<int> dim(1, 9);
    std::uniform_int_distribution<int> aspects(1, 4);
    std::uniform_int_distribution<int> subs(1, 3);
    std::uniform_real_distribution<double> scale(0.02, 0.6);
    const int n = maps(rng);
    for (int i = 0; i < n; ++i) {
        cfg.feature_maps.push_back({dim(rng), dim(rng)});
        cfg.scales.push_back(scale(rng));
    }
    const int a = aspects(rng);
    for (int i = 0; i < a; ++i) {
        cfg.aspect_ratios.push_back(std::uniform_real_distribution<double>(0.4, 2.5)(rng));
    }
    cfg.subdivisions = subs(rng);
    return cfg;
}

}  // namespace

TEST_CASE("generate_default_boxes") {
    SUBCASE("single cell, no subdivision") {
        AnchorConfig cfg;
        cfg.feature_maps = {{1, 1}};
        cfg.scales = {0.5};
        cfg.aspect_ratios = {1.0};
        cfg.subdivisions = 1;
        const auto boxes = generate_default_boxes(cfg);
        REQUIRE(boxes.size() == 1);
        CHECK(boxes[0].cx == doctest::Approx(0.5));
        CHECK(boxes[0].cy == doctest::Approx(0.5));
        CHECK(boxes[0].w == doctest::Approx(0.5));
    }
    SUBCASE("2x2 map with subdivision 2 yields 16 boxes") {
        AnchorConfig cfg;
        cfg.feature_maps = {{2, 2}};
        cfg.scales = {0.25};
        cfg.aspect_ratios = {1.0};
        cfg.subdivisions = 2;
        CHECK(generate_default_boxes(cfg).size() == 16);
    }
    SUBCASE("subdivision 1 reproduces the standard cell-centre grid") {
        AnchorConfig cfg;
        cfg.feature_maps = {{8, 4}};
        cfg.scales = {0.1};
        cfg.aspect_ratios = {1.0, 2.0};
        cfg.subdivisions = 1;
        const auto boxes = generate_default_boxes(cfg);
        REQUIRE(boxes.size() == 8 * 4 * 2);
        std::size_t idx = 0;
        for (int j = 0; j < 4; ++j) {
            for (int i = 0; i < 8; ++i) {
                for (int a = 0; a < 2; ++a) {
                    CHECK(boxes[idx].cx == doctest::Approx((i + 0.5) / 8.0));
                    CHECK(boxes[idx].cy == doctest::Approx((j + 0.5) / 4.0));
                    ++idx;
                }
            }
        }
    }
    SUBCASE("subdivision 2 quadruples the per-cell count") {
        AnchorConfig cfg;
        cfg.feature_maps = {{5, 3}};
        cfg.scales = {0.2};
        cfg.aspect_ratios = {1.0, 0.5, 2.0};
        cfg.subdivisions = 1;
        const auto base = generate_default_boxes(cfg).size();
        cfg.subdivisions = 2;
        CHECK(generate_default_boxes(cfg).size() == base * 4);
    }
    SUBCASE("count formula holds on random configs") {
        std::mt19937 rng(77);
        for (int trial = 0; trial < 30; ++trial) {
            const AnchorConfig cfg = random_anchor_config(rng);
            std::size_t expected = 0;
            for (const FeatureMapSize& m : cfg.feature_maps) {
                expected += static_cast<std::size_t>(m.width) * m.height * cfg.subdivisions *
                            cfg.subdivisions * cfg.aspect_ratios.size();
            }
            const auto boxes = generate_default_boxes(cfg);
            CHECK(boxes.size() == expected);
            for (const DefaultBox& b : boxes) {
                CHECK(b.cx >= 0.0);
                CHECK(b.cx <= 1.0);
                CHECK(b.cy >= 0.0);
                CHECK(b.cy <= 1.0);
                CHECK(b.w > 0.0);
                CHECK(b.h > 0.0);
            }
        }
    }
    SUBCASE("bad configs are rejected") {
        AnchorConfig cfg;
        CHECK_THROWS_AS(generate_default_boxes(cfg), ConfigError);
        cfg.feature_maps = {{2, 2}};
        cfg.scales = {0.1};
        cfg.aspect_ratios = {1.0};
        cfg.subdivisions = 0;
        CHECK_THROWS_AS(generate_default_boxes(cfg), ConfigError);
    }
}

TEST_CASE("match_boxes") {
    AnchorConfig cfg;
    cfg.feature_maps = {{4, 4}};
    cfg.scales = {0.25};
    cfg.aspect_ratios = {1.0};
    cfg.subdivisions = 1;
    const auto defaults = generate_default_boxes(cfg);

    SUBCASE("a gt identical to a default matches it") {
        const BBox gt = defaults[5].corners();
        const MatchAssignment m = match_boxes(defaults, std::vector<BBox>{gt});
        CHECK(m.matched_gt[5] == 0);
        CHECK(m.num_matched() >= 1);
    }
    SUBCASE("a gt below threshold everywhere still gets its best default") {
        const std::vector<BBox> gts{{0.0, 0.0, 0.02, 0.02}};
        const MatchAssignment m = match_boxes(defaults, gts);
        CHECK(m.num_matched() == 1);
        // The forced default is the best-IoU one: the top-left cell box.
        CHECK(m.matched_gt[0] == 0);
    }
    SUBCASE("no gts means all negatives") {
        const MatchAssignment m = match_boxes(defaults, {});
        CHECK(m.num_matched() == 0);
    }
    SUBCASE("every gt gets at least one match, threshold matches respect the threshold") {
        std::mt19937 rng(13);
        std::uniform_real_distribution<double> u(0.05, 0.9);
        for (int trial = 0; trial < 25; ++trial) {
            std::vector<BBox> gts;
            const int n = 1 + trial % 5;
            for (int g = 0; g < n; ++g) {
                const double x = u(rng) * 0.7, y = u(rng) * 0.7;
                gts.push_back({x, y, x + u(rng) * 0.3, y + u(rng) * 0.3});
            }
            const MatchAssignment m = match_boxes(defaults, gts, 0.5);
            std::set<int> matched;
            for (std::size_t d = 0; d < defaults.size(); ++d) {
                const int g = m.matched_gt[d];
                if (g == MatchAssignment::kNegative) continue;
                matched.insert(g);
            }
            CHECK(matched.size() == gts.size());
        }
    }
    SUBCASE("two gts never share one forced default") {
        // Both gts overlap the same default most; the bipartite pass must
        // give the second gt a different default.
        const BBox base = defaults[5].corners();
        BBox near = base;
        near.x_min += 0.01;
        near.x_max += 0.01;
        const MatchAssignment m = match_boxes(defaults, std::vector<BBox>{base, near}, 0.99);
        std::set<int> matched;
        int count = 0;
        for (int g : m.matched_gt) {
            if (g == MatchAssignment::kNegative) continue;
            matched.insert(g);
            ++count;
        }
        CHECK(count >= 2);
        CHECK(matched.size() == 2);
    }
}

TEST_CASE("smooth_l1") {
    SUBCASE("anchor values and gradients") {
        CHECK(smooth_l1(0.0).value == 0.0);
        CHECK(smooth_l1(0.0).gradient == 0.0);
        CHECK(smooth_l1(0.5).value == doctest::Approx(0.125));
        CHECK(smooth_l1(0.5).gradient == doctest::Approx(0.5));
        CHECK(smooth_l1(1.0).value == doctest::Approx(0.5));
        CHECK(smooth_l1(1.0).gradient == doctest::Approx(1.0));
        CHECK(smooth_l1(2.0).value == doctest::Approx(1.5));
        CHECK(smooth_l1(2.0).gradient == doctest::Approx(1.0));
        CHECK(smooth_l1(-2.0).value == doctest::Approx(1.5));
        CHECK(smooth_l1(-2.0).gradient == doctest::Approx(-1.0));
    }
    SUBCASE("continuous and C1 at the knee") {
        const double eps = 1e-9;
        CHECK(smooth_l1(1.0 - eps).value == doctest::Approx(smooth_l1(1.0 + eps).value)
                                                .epsilon(1e-8));
        CHECK(smooth_l1(1.0 - eps).gradient == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(smooth_l1(-1.0 - eps).gradient == doctest::Approx(-1.0).epsilon(1e-8));
    }
}

TEST_CASE("classification_loss") {
    SUBCASE("uniform scores over C classes cost ln C per box") {
        // Every default matched, uniform logits, no negatives left to mine.
        MatchAssignment a;
        a.matched_gt = {0, 1};
        std::vector<std::vector<double>> scores{{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
        const std::vector<int> gt_classes{0, 0};
        const ClassificationLoss loss = classification_loss(scores, a, gt_classes);
        CHECK(loss.value == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    }
    SUBCASE("confident correct predictions drive the loss to zero") {
        MatchAssignment a;
        a.matched_gt = {0, MatchAssignment::kNegative};
        std::vector<std::vector<double>> scores{{-30.0, 30.0}, {30.0, -30.0}};
        const std::vector<int> gt_classes{0};
        const ClassificationLoss loss = classification_loss(scores, a, gt_classes);
        CHECK(loss.value < 1e-9);
    }
    SUBCASE("zero matches yield zero loss and zero gradient") {
        MatchAssignment a;
        a.matched_gt = {MatchAssignment::kNegative, MatchAssignment::kNegative};
        std::vector<std::vector<double>> scores{{1.0, -2.0}, {0.5, 0.25}};
        const ClassificationLoss loss = classification_loss(scores, a, {});
        CHECK(loss.value == 0.0);
        for (const auto& g : loss.gradients) {
            for (double v : g) CHECK(v == 0.0);
        }
    }
    SUBCASE("hard negative mining keeps the 3:1 ratio") {
        MatchAssignment a;
        a.matched_gt.assign(9, MatchAssignment::kNegative);
        a.matched_gt[0] = 0;
        std::vector<std::vector<double>> scores(9, std::vector<double>{0.0, 0.0});
        // Make negatives 1..4 much harder than 5..8.
        for (int i = 1; i <= 4; ++i) scores[i] = {-5.0, 5.0};
        const std::vector<int> gt_classes{0};
        const ClassificationLoss loss = classification_loss(scores, a, gt_classes, 3);
        int active_negatives = 0;
        for (int i = 1; i < 9; ++i) {
            bool touched = false;
            for (double g : loss.gradients[i]) touched |= g != 0.0;
            if (touched) {
                ++active_negatives;
                CHECK(i <= 4);  // only hard ones selected
            }
        }
        CHECK(active_negatives == 3);
    }
    SUBCASE("analytic gradient matches central finite differences") {
        std::mt19937 rng(55);
        std::uniform_real_distribution<double> logits(-2.0, 2.0);
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t n = 6;
            const std::size_t classes = 3;
            MatchAssignment a;
            a.matched_gt.assign(n, MatchAssignment::kNegative);
            a.matched_gt[0] = 0;
            a.matched_gt[3] = 1;
            const std::vector<int> gt_classes{1, 0};
            std::vector<std::vector<double>> scores(n);
            for (auto& s : scores) {
                for (std::size_t c = 0; c < classes; ++c) s.push_back(logits(rng));
            }
            const ClassificationLoss loss = classification_loss(scores, a, gt_classes);
            const double h = 1e-6;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t c = 0; c < classes; ++c) {
                    auto plus = scores;
                    auto minus = scores;
                    plus[i][c] += h;
                    minus[i][c] -= h;
                    const double fd = (classification_loss(plus, a, gt_classes).value -
                                       classification_loss(minus, a, gt_classes).value) /
                                      (2.0 * h);
                    const double an = loss.gradients[i][c];
                    const double scale = std::max({std::abs(fd), std::abs(an), 1e-3});
                    CHECK(std::abs(fd - an) / scale < 1e-5);
                }
            }
        }
    }
}

TEST_CASE("nms") {
    SUBCASE("duplicate boxes collapse to the most confident one") {
        std::vector<Detection> dets{make_det({0, 0, 10, 10}, 0.9),
                                    make_det({0, 0, 10, 10}, 0.8)};
        const auto kept = nms(dets);
        REQUIRE(kept.size() == 1);
        CHECK(kept[0].objectness == doctest::Approx(0.9));
    }
    SUBCASE("boxes below the IoU threshold survive together") {
        std::vector<Detection> dets{make_det({0, 0, 10, 10}, 0.9),
                                    make_det({6, 0, 16, 10}, 0.8)};  // IoU = 0.25
        CHECK(nms(dets).size() == 2);
    }
    SUBCASE("300 disjoint boxes truncate to the 200 most confident") {
        std::vector<Detection> dets;
        for (int i = 0; i < 300; ++i) {
            dets.push_back(make_det({i * 20.0, 0.0, i * 20.0 + 10.0, 10.0}, (i + 1) / 300.0));
        }
        const auto kept = nms(dets, 0.45, 200);
        REQUIRE(kept.size() == 200);
        for (const Detection& d : kept) {
            CHECK(d.objectness >= doctest::Approx(101.0 / 300.0));
        }
    }
    SUBCASE("suppression is class-wise") {
        std::vector<Detection> dets{make_det({0, 0, 10, 10}, 0.9, ObjectClass::vehicle),
                                    make_det({0, 0, 10, 10}, 0.8, ObjectClass::pedestrian)};
        CHECK(nms(dets).size() == 2);
    }
    SUBCASE("properties: pairwise IoU bound, cap, order, idempotence") {
        std::mt19937 rng(99);
        std::uniform_real_distribution<double> pos(0.0, 200.0);
        std::uniform_real_distribution<double> dim(5.0, 60.0);
        std::uniform_real_distribution<double> conf(0.0, 1.0);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<Detection> dets;
            const int n = 2 + trial % 40;
            for (int i = 0; i < n; ++i) {
                const double x = pos(rng), y = pos(rng);
                dets.push_back(make_det({x, y, x + dim(rng), y + dim(rng)}, conf(rng)));
            }
            const auto kept = nms(dets, 0.45, 10);
            CHECK(kept.size() <= 10);
            for (std::size_t i = 0; i < kept.size(); ++i) {
                if (i > 0) CHECK(kept[i - 1].objectness >= kept[i].objectness);
                for (std::size_t j = i + 1; j < kept.size(); ++j) {
                    CHECK(test::oracle_iou(kept[i].box, kept[j].box) <= 0.45 + 1e-12);
                }
            }
            const auto again = nms(kept, 0.45, 10);
            REQUIRE(again.size() == kept.size());
            for (std::size_t i = 0; i < kept.size(); ++i) {
                CHECK(again[i].objectness == kept[i].objectness);
                CHECK(again[i].box.x_min == kept[i].box.x_min);
            }
        }
    }
}
