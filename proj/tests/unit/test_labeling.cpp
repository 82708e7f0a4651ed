// Copyright 2026 The fusekit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include "fusekit/labeling.hpp"

using namespace fusekit;

namespace {

RigCalibration test_calibration() {
    RigCalibration c;
    c.camera_wide = {625.0, 625.0, 320.0, 128.0, 640, 256};
    c.camera_narrow = {2500.0, 2500.0, 640.0, 480.0, 1280, 960};
    c.rotation_wide_narrow = Rotation3::identity();
    c.separation_m = 0.032;
    c.radar_to_wide.rotation = canonical_radar_camera_rotation();
    return c;
}

Detection make_det(const BBox& box, double objectness,
                   DetectionSource source = DetectionSource::wide) {
    Detection d;
    d.box = box;
    d.objectness = objectness;
    d.class_probs = {1.0, 0.0};
    d.class_id = ObjectClass::vehicle;
    d.source = source;
    return d;
}

}  // namespace

TEST_CASE("compute_joint_region") {
    SUBCASE("identical cameras cover the full image") {
        const CameraIntrinsics k{625.0, 625.0, 320.0, 128.0, 640, 256};
        const JointRegion j = compute_joint_region(k, k, Rotation3::identity());
        CHECK(j.region.x_min == doctest::Approx(0.0));
        CHECK(j.region.y_min == doctest::Approx(0.0));
        CHECK(j.region.x_max == doctest::Approx(640.0));
        CHECK(j.region.y_max == doctest::Approx(256.0));
    }
    SUBCASE("focal ratio 4 with shared principal point gives a centred quarter-size region") {
        const CameraIntrinsics a{625.0, 625.0, 640.0, 480.0, 1280, 960};
        const CameraIntrinsics b{2500.0, 2500.0, 640.0, 480.0, 1280, 960};
        const JointRegion j = compute_joint_region(a, b, Rotation3::identity());
        CHECK(j.region.x_min == doctest::Approx(480.0).epsilon(1e-12));
        CHECK(j.region.y_min == doctest::Approx(360.0).epsilon(1e-12));
        CHECK(j.region.x_max == doctest::Approx(800.0).epsilon(1e-12));
        CHECK(j.region.y_max == doctest::Approx(600.0).epsilon(1e-12));
    }
    SUBCASE("default rig joint region sits inside the wide image") {
        const RigCalibration c = test_calibration();
        const JointRegion j =
            compute_joint_region(c.camera_wide, c.camera_narrow, c.rotation_wide_narrow);
        CHECK(j.region.x_min == doctest::Approx(160.0));
        CHECK(j.region.y_min == doctest::Approx(8.0));
        CHECK(j.region.x_max == doctest::Approx(480.0));
        CHECK(j.region.y_max == doctest::Approx(248.0));
    }
}

TEST_CASE("overlap_with_joint") {
    JointRegion joint;
    joint.region = {100.0, 50.0, 300.0, 200.0};

    SUBCASE("smaller box fully inside gives 1") {
        CHECK(overlap_with_joint({150.0, 80.0, 200.0, 120.0}, joint) == doctest::Approx(1.0));
    }
    SUBCASE("half-intersecting box against a much larger region gives 0.5") {
        // box area 100, intersection 50
        CHECK(overlap_with_joint({95.0, 60.0, 105.0, 70.0}, joint) == doctest::Approx(0.5));
    }
    SUBCASE("disjoint box gives 0") {
        CHECK(overlap_with_joint({400.0, 50.0, 450.0, 200.0}, joint) == 0.0);
    }
    SUBCASE("degenerate areas give 0 instead of dividing by zero") {
        CHECK(overlap_with_joint({150.0, 80.0, 150.0, 120.0}, joint) == 0.0);
        JointRegion empty;
        empty.region = {10.0, 10.0, 10.0, 10.0};
        CHECK(overlap_with_joint({0.0, 0.0, 50.0, 50.0}, empty) == 0.0);
    }
    SUBCASE("symmetric in box and region, always within [0,1]") {
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> u(0.0, 500.0);
        for (int i = 0; i < 200; ++i) {
            BBox a{u(rng), u(rng), 0.0, 0.0};
            a.x_max = a.x_min + u(rng) / 4.0;
            a.y_max = a.y_min + u(rng) / 4.0;
            BBox b{u(rng), u(rng), 0.0, 0.0};
            b.x_max = b.x_min + u(rng) / 4.0;
            b.y_max = b.y_min + u(rng) / 4.0;
            JointRegion ja;
            ja.region = a;
            JointRegion jb;
            jb.region = b;
            const double fwd = overlap_with_joint(a, jb);
            const double rev = overlap_with_joint(b, ja);
            CHECK(fwd == doctest::Approx(rev).epsilon(1e-12));
            CHECK(fwd >= 0.0);
            CHECK(fwd <= 1.0);
        }
    }
}

TEST_CASE("merge_detections") {
    const RigCalibration calib = test_calibration();
    const JointRegion joint =
        compute_joint_region(calib.camera_wide, calib.camera_narrow, calib.rotation_wide_narrow);

    SUBCASE("empty narrow set reduces to tau-filtered wide detections") {
        std::vector<Detection> wide{make_det({10.0, 10.0, 60.0, 50.0}, 0.9),
                                    make_det({260.0, 100.0, 380.0, 160.0}, 0.8)};
        const auto merged = merge_detections(wide, {}, calib, 0.5);
        REQUIRE(merged.size() == 1);
        CHECK(merged[0].box.x_min == doctest::Approx(10.0));
    }
    SUBCASE("a wide detection dead centre of the joint region is discarded") {
        std::vector<Detection> wide{make_det({300.0, 110.0, 340.0, 150.0}, 0.95)};
        const auto merged = merge_detections(wide, {}, calib, 0.5);
        CHECK(merged.empty());
    }
    SUBCASE("narrow detections come back transferred, clipped and tagged") {
        std::vector<Detection> narrow{
            make_det({600.0, 440.0, 680.0, 520.0}, 0.7, DetectionSource::narrow)};
        const auto merged = merge_detections({}, narrow, calib, 0.5);
        REQUIRE(merged.size() == 1);
        CHECK(merged[0].source == DetectionSource::transferred);
        CHECK(merged[0].box.x_min >= joint.region.x_min - 1e-9);
        CHECK(merged[0].box.x_max <= joint.region.x_max + 1e-9);
        CHECK(merged[0].box.width() == doctest::Approx(80.0 / 4.0));
    }
    SUBCASE("distant vehicle seen by both cameras: only the transferred box survives") {
        // A small wide-camera detection inside the joint region and its
        // narrow counterpart of the same object.
        std::vector<Detection> wide{make_det({310.0, 120.0, 330.0, 136.0}, 0.9)};
        std::vector<Detection> narrow{
            make_det({600.0, 448.0, 680.0, 512.0}, 0.85, DetectionSource::narrow)};
        const auto merged = merge_detections(wide, narrow, calib, 0.5);
        REQUIRE(merged.size() == 1);
        CHECK(merged[0].source == DetectionSource::transferred);
    }
    SUBCASE("tau bounds behave as documented") {
        std::vector<Detection> wide{make_det({300.0, 110.0, 340.0, 150.0}, 0.9),   // inside
                                    make_det({140.0, 100.0, 180.0, 140.0}, 0.8),   // straddles
                                    make_det({10.0, 10.0, 80.0, 60.0}, 0.7)};      // outside
        const auto all_kept = merge_detections(wide, {}, calib, 1.0);
        CHECK(all_kept.size() == 3);
        const auto strict = merge_detections(wide, {}, calib, 0.0);
        // tau = 0 discards anything that touches the joint region at all.
        REQUIRE(strict.size() == 1);
        CHECK(strict[0].box.x_min == doctest::Approx(10.0));
        CHECK_THROWS_AS(merge_detections(wide, {}, calib, 1.5), ConfigError);
    }
    SUBCASE("raising tau never drops a previously kept detection") {
        std::mt19937 rng(9);
        std::uniform_real_distribution<double> pos(0.0, 600.0);
        std::uniform_real_distribution<double> dim(5.0, 120.0);
        std::uniform_real_distribution<double> conf(0.1, 1.0);
        std::vector<Detection> wide;
        for (int i = 0; i < 40; ++i) {
            const double x = pos(rng), y = pos(rng) / 3.0;
            wide.push_back(make_det(BBox{x, y, x + dim(rng), y + dim(rng) / 2.0}.clip(640, 256),
                                    conf(rng)));
        }
        std::size_t prev = 0;
        for (double tau : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            const auto merged = merge_detections(wide, {}, calib, tau);
            CHECK(merged.size() >= prev);
            prev = merged.size();
        }
    }
    SUBCASE("output is sorted by objectness and stays inside the wide image") {
        std::vector<Detection> wide{make_det({10.0, 10.0, 40.0, 40.0}, 0.4)};
        std::vector<Detection> narrow{
            make_det({100.0, 200.0, 400.0, 500.0}, 0.9, DetectionSource::narrow),
            make_det({700.0, 500.0, 1200.0, 900.0}, 0.6, DetectionSource::narrow)};
        const auto merged = merge_detections(wide, narrow, calib, 0.5);
        REQUIRE(merged.size() == 3);
        CHECK(merged[0].objectness == doctest::Approx(0.9));
        CHECK(merged[1].objectness == doctest::Approx(0.6));
        CHECK(merged[2].objectness == doctest::Approx(0.4));
        for (const Detection& d : merged) {
            CHECK(d.box.valid());
            CHECK(d.box.x_min >= 0.0);
            CHECK(d.box.y_min >= 0.0);
            CHECK(d.box.x_max <= 640.0);
            CHECK(d.box.y_max <= 256.0);
        }
    }
}

TEST_CASE("flip_boxes") {
    SUBCASE("hand-checked flip") {
        const auto flipped = flip_boxes(std::vector<BBox>{{0.0, 0.0, 10.0, 10.0}}, 640.0);
        REQUIRE(flipped.size() == 1);
        CHECK(flipped[0].x_min == doctest::Approx(630.0));
        CHECK(flipped[0].x_max == doctest::Approx(640.0));
        CHECK(flipped[0].y_min == doctest::Approx(0.0));
    }
    SUBCASE("centred box is a fixed point") {
        const auto flipped = flip_boxes(std::vector<BBox>{{310.0, 40.0, 330.0, 90.0}}, 640.0);
        CHECK(flipped[0].x_min == doctest::Approx(310.0));
        CHECK(flipped[0].x_max == doctest::Approx(330.0));
    }
    SUBCASE("double flip is the identity") {
        std::mt19937 rng(31);
        std::uniform_real_distribution<double> u(0.0, 640.0);
        std::vector<BBox> boxes;
        for (int i = 0; i < 50; ++i) {
            double a = u(rng), b = u(rng);
            if (a > b) std::swap(a, b);
            boxes.push_back({a, 5.0, b, 100.0});
        }
        const auto twice = flip_boxes(flip_boxes(boxes, 640.0), 640.0);
        for (std::size_t i = 0; i < boxes.size(); ++i) {
            CHECK(twice[i].x_min == doctest::Approx(boxes[i].x_min).epsilon(1e-12));
            CHECK(twice[i].x_max == doctest::Approx(boxes[i].x_max).epsilon(1e-12));
        }
    }
}

TEST_CASE("crop_resize_boxes") {
    SUBCASE("full-image crop at scale 1 is the identity") {
        const std::vector<BBox> boxes{{100.0, 100.0, 200.0, 200.0}};
        const auto out =
            crop_resize_boxes(boxes, {0.0, 0.0, 640.0, 256.0}, 640.0, 256.0, 640.0, 256.0);
        REQUIRE(out.size() == 1);
        CHECK(out[0].x_min == doctest::Approx(100.0));
        CHECK(out[0].y_max == doctest::Approx(200.0));
    }
    SUBCASE("hand-evaluated crop translate") {
        const std::vector<BBox> boxes{{100.0, 100.0, 200.0, 200.0}};
        const auto out = crop_resize_boxes(boxes, {100.0, 100.0, 740.0, 356.0}, 1000.0, 420.0,
                                           640.0, 256.0);
        REQUIRE(out.size() == 1);
        CHECK(out[0].x_min == doctest::Approx(0.0));
        CHECK(out[0].y_min == doctest::Approx(0.0));
        CHECK(out[0].x_max == doctest::Approx(100.0));
        CHECK(out[0].y_max == doctest::Approx(100.0));
    }
    SUBCASE("a box entirely outside the crop is dropped") {
        const std::vector<BBox> boxes{{0.0, 0.0, 200.0, 200.0}};
        // right-side crop at the minimum legal fraction
        const auto out = crop_resize_boxes(boxes, {256.0, 0.0, 640.0, 256.0}, 640.0, 256.0,
                                           640.0, 256.0);
        CHECK(out.empty());
    }
    SUBCASE("crop fraction below 0.6 is rejected") {
        const std::vector<BBox> boxes{{0.0, 0.0, 10.0, 10.0}};
        CHECK_THROWS_AS(
            crop_resize_boxes(boxes, {0.0, 0.0, 320.0, 256.0}, 640.0, 256.0, 640.0, 256.0),
            ConfigError);
    }
    SUBCASE("crop outside the image is rejected") {
        const std::vector<BBox> boxes{{0.0, 0.0, 10.0, 10.0}};
        CHECK_THROWS_AS(
            crop_resize_boxes(boxes, {0.0, 0.0, 700.0, 256.0}, 640.0, 256.0, 640.0, 256.0),
            ConfigError);
    }
}
