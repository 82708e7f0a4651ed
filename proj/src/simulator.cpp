// Copyright 2026 The fusekit Authors
// SPDX-License-Identifier: Apache-2.0

#include "fusekit/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "fusekit/evaluation.hpp"

namespace fusekit {

namespace {

using nlohmann::ordered_json;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double uniform_pm(std::mt19937_64& rng, double half_width) {
    if (half_width <= 0.0) return 0.0;
    return std::uniform_real_distribution<double>(-half_width, half_width)(rng);
}

Eigen::Vector2d rotate2(const Eigen::Vector2d& v, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

}  // namespace

void VehicleSpec::validate() const {
    if (!(width_m > 0.0) || !(height_m > 0.0) || !(length_m > 0.0)) {
        throw ConfigError("vehicle dimensions must be positive");
    }
}

void SensorRig::validate() const {
    calibration.validate();
    for (const BeamSpec& b : beams) {
        if (!(b.half_angle_rad > 0.0) || !(b.max_range_m > 0.0) || b.max_targets <= 0) {
            throw ConfigError("beam spec values must be positive");
        }
    }
}

double SceneConfig::total_segment_duration_s() const {
    double total = 0.0;
    for (const EgoSegment& s : ego_segments) total += s.duration_s;
    return total;
}

void SceneConfig::validate() const {
    if (!(duration_s > 0.0)) {
        throw ConfigError("scene duration must be positive");
    }
    if (!(camera_rate_hz > 0.0) || !(radar_rate_hz > 0.0)) {
        throw ConfigError("sensor rates must be positive");
    }
    if (ego_segments.empty()) {
        throw ConfigError("scene needs at least one ego segment");
    }
    for (const EgoSegment& s : ego_segments) {
        if (!(s.duration_s > 0.0)) {
            throw ConfigError("ego segment durations must be positive");
        }
    }
    if (total_segment_duration_s() + 1e-9 < duration_s) {
        throw ConfigError("ego segments do not cover the scene duration");
    }
    const double min_period_us = 1e6 / std::max(camera_rate_hz, radar_rate_hz);
    if (timestamp_jitter_us < 0 ||
        static_cast<double>(timestamp_jitter_us) >= min_period_us / 2.0) {
        throw ConfigError("timestamp jitter must be in [0, half the fastest sensor period)");
    }
    for (const VehicleSpec& v : vehicles) v.validate();
}

void Scene::validate() const {
    config.validate();
    rig.validate();
}

SensorRig default_rig() {
    SensorRig rig;
    rig.calibration.camera_wide = {625.0, 625.0, 320.0, 128.0, 640, 256};
    rig.calibration.camera_narrow = {2500.0, 2500.0, 640.0, 480.0, 1280, 960};
    rig.calibration.rotation_wide_narrow = Rotation3::identity();
    rig.calibration.separation_m = 0.032;
    rig.calibration.radar_to_wide.rotation = canonical_radar_camera_rotation();
    rig.calibration.radar_to_wide.translation.setZero();
    rig.beams = {
        {RadarBeam::medium_wide, 50.0 * M_PI / 180.0, 60.0, 64},
        {RadarBeam::long_narrow, 12.0 * M_PI / 180.0, 150.0, 64},
    };
    return rig;
}

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
    const std::uint64_t mixed = splitmix64(splitmix64(seed ^ (tag * 0xa24baed4963ee407ULL)) ^
                                           (index * 0x9fb21c651e98df25ULL));
    return std::mt19937_64(mixed);
}

Eigen::Vector3d ego_position(const Scene& scene, double t_s) {
    if (t_s < 0.0 || t_s > scene.config.total_segment_duration_s() + 1e-9) {
        throw ConfigError("time outside the ego trajectory");
    }
    Eigen::Vector3d p = scene.config.ego_start;
    double remaining = t_s;
    for (const EgoSegment& s : scene.config.ego_segments) {
        const double dt = std::min(remaining, s.duration_s);
        p += s.velocity_mps * dt;
        remaining -= dt;
        if (remaining <= 0.0) break;
    }
    return p;
}

Eigen::Vector3d ego_velocity(const Scene& scene, double t_s) {
    if (t_s < 0.0 || t_s > scene.config.total_segment_duration_s() + 1e-9) {
        throw ConfigError("time outside the ego trajectory");
    }
    double start = 0.0;
    for (const EgoSegment& s : scene.config.ego_segments) {
        if (t_s < start + s.duration_s) return s.velocity_mps;
        start += s.duration_s;
    }
    return scene.config.ego_segments.back().velocity_mps;
}

CameraModel wide_camera_at(const Scene& scene, double t_s) {
    CameraModel cam;
    cam.intrinsics = scene.rig.calibration.camera_wide;
    cam.world_to_camera.rotation = canonical_radar_camera_rotation();
    cam.world_to_camera.translation =
        -(cam.world_to_camera.rotation * ego_position(scene, t_s));
    return cam;
}

CameraModel narrow_camera_at(const Scene& scene, double t_s) {
    const Rotation3 w_a = canonical_radar_camera_rotation();
    const Rotation3 w_b = scene.rig.calibration.rotation_wide_narrow.transpose() * w_a;
    const Eigen::Vector3d centre =
        ego_position(scene, t_s) + Eigen::Vector3d(0.0, scene.rig.calibration.separation_m, 0.0);
    CameraModel cam;
    cam.intrinsics = scene.rig.calibration.camera_narrow;
    cam.world_to_camera.rotation = w_b;
    cam.world_to_camera.translation = -(w_b * centre);
    return cam;
}

namespace {

std::array<Eigen::Vector3d, 8> vehicle_corners(const VehicleSpec& v, double t_s) {
    const Eigen::Vector2d centre = v.position_m + v.velocity_mps * t_s;
    std::array<Eigen::Vector3d, 8> corners;
    int idx = 0;
    for (double sx : {-0.5, 0.5}) {
        for (double sy : {-0.5, 0.5}) {
            const Eigen::Vector2d local(sx * v.length_m, sy * v.width_m);
            const Eigen::Vector2d ground = centre + rotate2(local, v.yaw_rad);
            for (double z : {0.0, -v.height_m}) {
                corners[idx++] = {ground.x(), ground.y(), z};
            }
        }
    }
    return corners;
}

}  // namespace

std::optional<GtBox> project_vehicle_box(const CameraModel& camera, const VehicleSpec& vehicle,
                                         double t_s, int vehicle_id) {
    const auto corners = vehicle_corners(vehicle, t_s);
    GtBox gt;
    gt.vehicle_id = vehicle_id;
    gt.depth_near_m = std::numeric_limits<double>::max();
    bool first = true;
    for (const Eigen::Vector3d& corner : corners) {
        const Eigen::Vector3d cam = camera.world_to_camera * corner;
        if (!(cam.z() > 0.0)) return std::nullopt;
        gt.depth_near_m = std::min(gt.depth_near_m, cam.z());
        const ImagePoint p = project_camera_frame(camera.intrinsics, cam);
        if (first) {
            gt.box = {p.u, p.v, p.u, p.v};
            first = false;
        } else {
            gt.box.x_min = std::min(gt.box.x_min, p.u);
            gt.box.y_min = std::min(gt.box.y_min, p.v);
            gt.box.x_max = std::max(gt.box.x_max, p.u);
            gt.box.y_max = std::max(gt.box.y_max, p.v);
        }
    }
    return gt;
}

std::vector<std::int64_t> camera_timestamps(const Scene& scene) {
    scene.config.validate();
    const double period_us = 1e6 / scene.config.camera_rate_hz;
    std::vector<std::int64_t> out;
    auto rng = substream(scene.config.seed, 0xCA0E5A, 0);
    for (std::int64_t i = 0;; ++i) {
        const double nominal = static_cast<double>(i) * period_us;
        if (nominal >= scene.config.duration_s * 1e6) break;
        const std::int64_t jitter =
            scene.config.timestamp_jitter_us > 0
                ? std::uniform_int_distribution<std::int64_t>(
                      -scene.config.timestamp_jitter_us, scene.config.timestamp_jitter_us)(rng)
                : 0;
        out.push_back(static_cast<std::int64_t>(std::llround(nominal)) + jitter);
    }
    return out;
}

std::vector<std::int64_t> radar_timestamps(const Scene& scene) {
    scene.config.validate();
    const double period_us = 1e6 / scene.config.radar_rate_hz;
    std::vector<std::int64_t> out;
    auto rng = substream(scene.config.seed, 0x2ADA2, 0);
    for (std::int64_t i = 0;; ++i) {
        const double nominal =
            static_cast<double>(scene.config.radar_phase_us) + static_cast<double>(i) * period_us;
        if (nominal >= scene.config.duration_s * 1e6) break;
        const std::int64_t jitter =
            scene.config.timestamp_jitter_us > 0
                ? std::uniform_int_distribution<std::int64_t>(
                      -scene.config.timestamp_jitter_us, scene.config.timestamp_jitter_us)(rng)
                : 0;
        out.push_back(static_cast<std::int64_t>(std::llround(nominal)) + jitter);
    }
    return out;
}

namespace {

struct RadarFrame {
    Eigen::Vector2d origin_xy;          // radar origin, world
    Eigen::Matrix3d world_to_radar;     // rotation only
    Eigen::Vector2d ego_velocity_r;     // horizontal ego velocity, radar frame
};

RadarFrame radar_frame_at(const Scene& scene, double t_s) {
    const Rotation3 p = canonical_radar_camera_rotation();  // world->wide camera
    const RigidTransform& t_ar = scene.rig.calibration.radar_to_wide;
    RadarFrame f;
    // Radar origin solves P*(X - ego) = t_ar.translation.
    const Eigen::Vector3d origin =
        ego_position(scene, t_s) + p.transpose() * t_ar.translation;
    f.origin_xy = origin.head<2>();
    f.world_to_radar = t_ar.rotation.matrix().transpose() * p.matrix();
    const Eigen::Vector3d v_r = f.world_to_radar * ego_velocity(scene, t_s);
    f.ego_velocity_r = v_r.head<2>();
    return f;
}

// Nearest point of the vehicle footprint rectangle to a 2D query point.
Eigen::Vector2d nearest_footprint_point(const VehicleSpec& v, double t_s,
                                        const Eigen::Vector2d& query) {
    const Eigen::Vector2d centre = v.position_m + v.velocity_mps * t_s;
    const Eigen::Vector2d local = rotate2(query - centre, -v.yaw_rad);
    const Eigen::Vector2d clamped(std::clamp(local.x(), -v.length_m / 2.0, v.length_m / 2.0),
                                  std::clamp(local.y(), -v.width_m / 2.0, v.width_m / 2.0));
    return centre + rotate2(clamped, v.yaw_rad);
}

struct PolarTarget {
    double range;
    double bearing;
    double range_rate;
};

PolarTarget measure_point(const RadarFrame& frame, const Eigen::Vector2d& point_xy,
                          const Eigen::Vector2d& velocity_xy) {
    const Eigen::Vector2d delta = point_xy - frame.origin_xy;
    const Eigen::Vector3d delta_r3 = frame.world_to_radar * Eigen::Vector3d(delta.x(), delta.y(), 0.0);
    const Eigen::Vector2d delta_r = delta_r3.head<2>();
    PolarTarget t;
    t.range = delta_r.norm();
    t.bearing = std::atan2(delta_r.y(), delta_r.x());
    if (t.range > 1e-12) {
        const Eigen::Vector3d v_r3 =
            frame.world_to_radar * Eigen::Vector3d(velocity_xy.x(), velocity_xy.y(), 0.0);
        const Eigen::Vector2d v_rel = v_r3.head<2>() - frame.ego_velocity_r;
        t.range_rate = delta_r.normalized().dot(v_rel);
    } else {
        t.range_rate = 0.0;
    }
    return t;
}

double synthetic_amplitude_db(double range_m, std::mt19937_64& rng) {
    return 30.0 - 25.0 * std::log10(std::max(range_m, 1.0)) + uniform_pm(rng, 2.0);
}

}  // namespace

FrameTruth render_frame(const Scene& scene, double t_s, std::uint64_t noise_stream) {
    FrameTruth frame;
    frame.timestamp_us = static_cast<std::int64_t>(std::llround(t_s * 1e6));

    const CameraModel wide = wide_camera_at(scene, t_s);
    const CameraModel narrow = narrow_camera_at(scene, t_s);
    const double ww = static_cast<double>(wide.intrinsics.width);
    const double wh = static_cast<double>(wide.intrinsics.height);
    const double nw = static_cast<double>(narrow.intrinsics.width);
    const double nh = static_cast<double>(narrow.intrinsics.height);

    for (std::size_t i = 0; i < scene.config.vehicles.size(); ++i) {
        const VehicleSpec& v = scene.config.vehicles[i];
        if (auto gt = project_vehicle_box(wide, v, t_s, static_cast<int>(i))) {
            gt->box = gt->box.clip(ww, wh);
            if (gt->box.area() > 0.0) frame.wide_boxes.push_back(*gt);
        }
        if (auto gt = project_vehicle_box(narrow, v, t_s, static_cast<int>(i))) {
            gt->box = gt->box.clip(nw, nh);
            if (gt->box.area() > 0.0) frame.narrow_boxes.push_back(*gt);
        }
    }

    // Ego motion in the radar frame so compensation cancels exactly.
    const RadarFrame radar = radar_frame_at(scene, t_s);
    frame.ego.timestamp_us = frame.timestamp_us;
    frame.ego.linear_mps = scene.rig.calibration.radar_to_wide.rotation.matrix().transpose() *
                           canonical_radar_camera_rotation().matrix() * ego_velocity(scene, t_s);
    frame.ego.yaw_rate_radps = 0.0;

    auto rng = substream(scene.config.seed, 0x5CA7, noise_stream);
    const RadarNoiseConfig& noise = scene.config.radar_noise;
    frame.scan.timestamp_us = frame.timestamp_us;

    for (const BeamSpec& beam : scene.rig.beams) {
        std::vector<RadarTarget> beam_targets;

        for (std::size_t i = 0; i < scene.config.vehicles.size(); ++i) {
            const VehicleSpec& v = scene.config.vehicles[i];
            const Eigen::Vector2d point = nearest_footprint_point(v, t_s, radar.origin_xy);
            const PolarTarget measured = measure_point(radar, point, v.velocity_mps);
            if (!beam.contains(measured.bearing, measured.range)) continue;
            if (noise.dropout_rate > 0.0 &&
                std::uniform_real_distribution<double>(0.0, 1.0)(rng) < noise.dropout_rate) {
                continue;
            }
            RadarTarget target;
            target.range_m = std::max(0.0, measured.range + uniform_pm(rng, noise.range_noise_m));
            target.bearing_rad =
                std::clamp(measured.bearing + uniform_pm(rng, noise.bearing_noise_rad),
                           -beam.half_angle_rad, beam.half_angle_rad);
            target.range_rate_mps =
                measured.range_rate + uniform_pm(rng, noise.range_rate_noise_mps);
            target.amplitude_db = synthetic_amplitude_db(target.range_m, rng);
            target.beam = beam.beam;
            target.timestamp_us = frame.timestamp_us;
            beam_targets.push_back(target);
        }

        for (int c = 0; c < noise.clutter_per_beam; ++c) {
            const double bearing =
                std::uniform_real_distribution<double>(-beam.half_angle_rad,
                                                       beam.half_angle_rad)(rng);
            const double range =
                std::uniform_real_distribution<double>(0.5, beam.max_range_m)(rng);
            // Static structure: true range rate comes from ego motion only.
            const Eigen::Vector2d ray(std::cos(bearing), std::sin(bearing));
            const double rr = -ray.dot(radar.ego_velocity_r);
            RadarTarget target;
            target.range_m = range;
            target.bearing_rad = bearing;
            target.range_rate_mps = rr + uniform_pm(rng, noise.range_rate_noise_mps);
            target.amplitude_db = synthetic_amplitude_db(range, rng) - 8.0;
            target.beam = beam.beam;
            target.timestamp_us = frame.timestamp_us;
            beam_targets.push_back(target);
        }

        if (noise.outlier_rate > 0.0 &&
            std::uniform_real_distribution<double>(0.0, 1.0)(rng) < noise.outlier_rate) {
            RadarTarget target;
            target.range_m = std::uniform_real_distribution<double>(0.5, beam.max_range_m)(rng);
            target.bearing_rad = std::uniform_real_distribution<double>(
                -beam.half_angle_rad, beam.half_angle_rad)(rng);
            target.range_rate_mps = std::uniform_real_distribution<double>(-40.0, 40.0)(rng);
            target.amplitude_db = synthetic_amplitude_db(target.range_m, rng);
            target.beam = beam.beam;
            target.timestamp_us = frame.timestamp_us;
            beam_targets.push_back(target);
        }

        // Nearest-first truncation to the per-beam target budget.
        std::stable_sort(beam_targets.begin(), beam_targets.end(),
                         [](const RadarTarget& a, const RadarTarget& b) {
                             return a.range_m < b.range_m;
                         });
        if (beam_targets.size() > static_cast<std::size_t>(beam.max_targets)) {
            beam_targets.resize(static_cast<std::size_t>(beam.max_targets));
        }
        frame.scan.targets.insert(frame.scan.targets.end(), beam_targets.begin(),
                                  beam_targets.end());
    }
    return frame;
}

std::vector<Detection> corrupt_detections(std::span<const GtBox> gt_boxes,
                                          const DetectorNoiseConfig& model, double image_width,
                                          double image_height, std::mt19937_64& rng) {
    std::vector<Detection> out;
    out.reserve(gt_boxes.size());
    for (const GtBox& gt : gt_boxes) {
        const SizeCategory size = classify_size(gt.box, image_width, image_height);
        double miss = model.miss_rate_small;
        if (size == SizeCategory::medium) miss = model.miss_rate_medium;
        if (size == SizeCategory::large) miss = model.miss_rate_large;
        if (miss > 0.0 && std::uniform_real_distribution<double>(0.0, 1.0)(rng) < miss) {
            continue;
        }
        Detection det;
        det.box = gt.box;
        if (model.jitter_px > 0.0) {
            std::normal_distribution<double> jitter(0.0, model.jitter_px);
            det.box.x_min += jitter(rng);
            det.box.y_min += jitter(rng);
            det.box.x_max += jitter(rng);
            det.box.y_max += jitter(rng);
            if (det.box.x_min > det.box.x_max) std::swap(det.box.x_min, det.box.x_max);
            if (det.box.y_min > det.box.y_max) std::swap(det.box.y_min, det.box.y_max);
            det.box = det.box.clip(image_width, image_height);
            if (det.box.area() <= 0.0) continue;
        }
        det.objectness = std::clamp(model.conf_mean + uniform_pm(rng, model.conf_spread), 0.01, 1.0);
        det.class_id = ObjectClass::vehicle;
        det.class_probs = {1.0, 0.0};
        det.source = DetectionSource::wide;
        out.push_back(det);
    }

    if (model.fp_per_frame > 0.0) {
        const int fps = std::poisson_distribution<int>(model.fp_per_frame)(rng);
        for (int i = 0; i < fps; ++i) {
            const double cx = std::uniform_real_distribution<double>(0.0, image_width)(rng);
            const double cy = std::uniform_real_distribution<double>(0.0, image_height)(rng);
            const double w =
                std::uniform_real_distribution<double>(0.01, 0.2)(rng) * image_width;
            const double h =
                std::uniform_real_distribution<double>(0.01, 0.2)(rng) * image_height;
            Detection det;
            det.box = BBox{cx - w / 2.0, cy - h / 2.0, cx + w / 2.0, cy + h / 2.0}.clip(
                image_width, image_height);
            if (det.box.area() <= 0.0) continue;
            det.objectness =
                std::clamp(model.fp_conf_mean + uniform_pm(rng, model.fp_conf_spread), 0.01, 1.0);
            det.class_id = ObjectClass::vehicle;
            det.class_probs = {1.0, 0.0};
            det.source = DetectionSource::wide;
            out.push_back(det);
        }
    }
    return out;
}

std::vector<Correspondence> generate_correspondences(const Scene& scene, double t_s,
                                                     std::size_t max_count,
                                                     double pixel_noise_sigma,
                                                     std::uint64_t noise_stream) {
    const CameraModel wide = wide_camera_at(scene, t_s);
    const CameraModel narrow = narrow_camera_at(scene, t_s);
    auto rng = substream(scene.config.seed, 0xC044, noise_stream);
    std::normal_distribution<double> noise(0.0, pixel_noise_sigma);

    std::vector<Correspondence> out;
    for (const VehicleSpec& v : scene.config.vehicles) {
        for (const Eigen::Vector3d& corner : vehicle_corners(v, t_s)) {
            if (out.size() >= max_count) return out;
            const Eigen::Vector3d in_a = wide.world_to_camera * corner;
            const Eigen::Vector3d in_b = narrow.world_to_camera * corner;
            if (!(in_a.z() > 0.0) || !(in_b.z() > 0.0)) continue;
            ImagePoint pa = project_camera_frame(wide.intrinsics, in_a);
            ImagePoint pb = project_camera_frame(narrow.intrinsics, in_b);
            const BBox bounds_a{0, 0, static_cast<double>(wide.intrinsics.width),
                                static_cast<double>(wide.intrinsics.height)};
            const BBox bounds_b{0, 0, static_cast<double>(narrow.intrinsics.width),
                                static_cast<double>(narrow.intrinsics.height)};
            if (!bounds_a.contains(pa) || !bounds_b.contains(pb)) continue;
            if (pixel_noise_sigma > 0.0) {
                pa.u += noise(rng);
                pa.v += noise(rng);
                pb.u += noise(rng);
                pb.v += noise(rng);
            }
            out.push_back({pa, pb});
        }
    }
    return out;
}

namespace {

ordered_json vec2_json(const Eigen::Vector2d& v) { return ordered_json::array({v.x(), v.y()}); }
ordered_json vec3_json(const Eigen::Vector3d& v) {
    return ordered_json::array({v.x(), v.y(), v.z()});
}

Eigen::Vector2d json_vec2(const ordered_json& j) {
    if (!j.is_array() || j.size() != 2) throw IoError("scene: expected [x, y] array");
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

Eigen::Vector3d json_vec3(const ordered_json& j) {
    if (!j.is_array() || j.size() != 3) throw IoError("scene: expected [x, y, z] array");
    return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

}  // namespace

Scene parse_scene(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError(std::string("scene: invalid JSON: ") + e.what());
    }
    try {
        Scene scene;
        SceneConfig& c = scene.config;
        c.seed = j.value("seed", std::uint64_t{1});
        c.duration_s = j.at("duration_s").get<double>();
        c.camera_rate_hz = j.value("camera_rate_hz", 30.0);
        c.radar_rate_hz = j.value("radar_rate_hz", 20.0);
        c.timestamp_jitter_us = j.value("timestamp_jitter_us", std::int64_t{0});
        c.radar_phase_us = j.value("radar_phase_us", std::int64_t{0});
        if (j.contains("ego_start")) c.ego_start = json_vec3(j.at("ego_start"));
        for (const auto& s : j.at("ego_segments")) {
            EgoSegment seg;
            seg.duration_s = s.at("duration_s").get<double>();
            seg.velocity_mps = json_vec3(s.at("velocity_mps"));
            c.ego_segments.push_back(seg);
        }
        for (const auto& vj : j.value("vehicles", ordered_json::array())) {
            VehicleSpec v;
            v.width_m = vj.value("width_m", 1.8);
            v.height_m = vj.value("height_m", 1.5);
            v.length_m = vj.value("length_m", 4.3);
            v.position_m = json_vec2(vj.at("position_m"));
            v.yaw_rad = vj.value("yaw_rad", 0.0);
            if (vj.contains("velocity_mps")) v.velocity_mps = json_vec2(vj.at("velocity_mps"));
            c.vehicles.push_back(v);
        }
        if (j.contains("radar_noise")) {
            const auto& n = j.at("radar_noise");
            c.radar_noise.range_noise_m = n.value("range_noise_m", 0.0);
            c.radar_noise.bearing_noise_rad = n.value("bearing_noise_rad", 0.0);
            c.radar_noise.range_rate_noise_mps = n.value("range_rate_noise_mps", 0.0);
            c.radar_noise.clutter_per_beam = n.value("clutter_per_beam", 0);
            c.radar_noise.dropout_rate = n.value("dropout_rate", 0.0);
            c.radar_noise.outlier_rate = n.value("outlier_rate", 0.0);
        }
        if (j.contains("detector_noise")) {
            const auto& n = j.at("detector_noise");
            c.detector_noise.miss_rate_small = n.value("miss_rate_small", 0.0);
            c.detector_noise.miss_rate_medium = n.value("miss_rate_medium", 0.0);
            c.detector_noise.miss_rate_large = n.value("miss_rate_large", 0.0);
            c.detector_noise.jitter_px = n.value("jitter_px", 0.0);
            c.detector_noise.fp_per_frame = n.value("fp_per_frame", 0.0);
            c.detector_noise.conf_mean = n.value("conf_mean", 1.0);
            c.detector_noise.conf_spread = n.value("conf_spread", 0.0);
            c.detector_noise.fp_conf_mean = n.value("fp_conf_mean", 0.3);
            c.detector_noise.fp_conf_spread = n.value("fp_conf_spread", 0.1);
        }
        if (j.contains("rig")) {
            const auto& r = j.at("rig");
            scene.rig.calibration = parse_calibration(r.at("calibration").dump());
            scene.rig.beams.clear();
            for (const auto& bj : r.at("beams")) {
                BeamSpec b;
                b.beam = radar_beam_from_string(bj.at("beam").get<std::string>());
                b.half_angle_rad = bj.at("half_angle_rad").get<double>();
                b.max_range_m = bj.at("max_range_m").get<double>();
                b.max_targets = bj.value("max_targets", 64);
                scene.rig.beams.push_back(b);
            }
        } else {
            scene.rig = default_rig();
        }
        scene.validate();
        return scene;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("scene: ") + e.what());
    }
}

std::string format_scene(const Scene& scene) {
    ordered_json j;
    const SceneConfig& c = scene.config;
    j["seed"] = c.seed;
    j["duration_s"] = c.duration_s;
    j["camera_rate_hz"] = c.camera_rate_hz;
    j["radar_rate_hz"] = c.radar_rate_hz;
    j["timestamp_jitter_us"] = c.timestamp_jitter_us;
    j["radar_phase_us"] = c.radar_phase_us;
    j["ego_start"] = vec3_json(c.ego_start);
    j["ego_segments"] = ordered_json::array();
    for (const EgoSegment& s : c.ego_segments) {
        ordered_json sj;
        sj["duration_s"] = s.duration_s;
        sj["velocity_mps"] = vec3_json(s.velocity_mps);
        j["ego_segments"].push_back(sj);
    }
    j["vehicles"] = ordered_json::array();
    for (const VehicleSpec& v : c.vehicles) {
        ordered_json vj;
        vj["width_m"] = v.width_m;
        vj["height_m"] = v.height_m;
        vj["length_m"] = v.length_m;
        vj["position_m"] = vec2_json(v.position_m);
        vj["yaw_rad"] = v.yaw_rad;
        vj["velocity_mps"] = vec2_json(v.velocity_mps);
        j["vehicles"].push_back(vj);
    }
    ordered_json rn;
    rn["range_noise_m"] = c.radar_noise.range_noise_m;
    rn["bearing_noise_rad"] = c.radar_noise.bearing_noise_rad;
    rn["range_rate_noise_mps"] = c.radar_noise.range_rate_noise_mps;
    rn["clutter_per_beam"] = c.radar_noise.clutter_per_beam;
    rn["dropout_rate"] = c.radar_noise.dropout_rate;
    rn["outlier_rate"] = c.radar_noise.outlier_rate;
    j["radar_noise"] = rn;
    ordered_json dn;
    dn["miss_rate_small"] = c.detector_noise.miss_rate_small;
    dn["miss_rate_medium"] = c.detector_noise.miss_rate_medium;
    dn["miss_rate_large"] = c.detector_noise.miss_rate_large;
    dn["jitter_px"] = c.detector_noise.jitter_px;
    dn["fp_per_frame"] = c.detector_noise.fp_per_frame;
    dn["conf_mean"] = c.detector_noise.conf_mean;
    dn["conf_spread"] = c.detector_noise.conf_spread;
    dn["fp_conf_mean"] = c.detector_noise.fp_conf_mean;
    dn["fp_conf_spread"] = c.detector_noise.fp_conf_spread;
    j["detector_noise"] = dn;
    ordered_json rig;
    rig["calibration"] = nlohmann::ordered_json::parse(format_calibration(scene.rig.calibration));
    rig["beams"] = ordered_json::array();
    for (const BeamSpec& b : scene.rig.beams) {
        ordered_json bj;
        bj["beam"] = to_string(b.beam);
        bj["half_angle_rad"] = b.half_angle_rad;
        bj["max_range_m"] = b.max_range_m;
        bj["max_targets"] = b.max_targets;
        rig["beams"].push_back(bj);
    }
    j["rig"] = rig;
    return j.dump(2) + "\n";
}

Scene load_scene(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open scene file: " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scene(ss.str());
}

Scene make_example_scene() {
    Scene scene;
    scene.rig = default_rig();
    SceneConfig& c = scene.config;
    c.seed = 7;
    c.duration_s = 30.0;
    c.timestamp_jitter_us = 1500;
    c.ego_segments = {{30.0, {10.0, 0.0, 0.0}}};

    // Traffic at a spread of depths: oncoming, retreating and parked.
    c.vehicles.push_back({1.8, 1.5, 4.3, {45.0, -3.0}, 0.0, {-12.0, 0.0}});
    c.vehicles.push_back({1.8, 1.4, 4.1, {28.0, 1.8}, 0.0, {14.0, 0.0}});
    c.vehicles.push_back({1.9, 1.6, 4.6, {70.0, -3.2}, 0.0, {-11.0, 0.0}});
    c.vehicles.push_back({1.8, 1.5, 4.3, {95.0, 1.6}, 0.0, {13.5, 0.0}});
    c.vehicles.push_back({2.0, 1.8, 5.1, {55.0, 5.5}, 0.0, {0.0, 0.0}});
    c.vehicles.push_back({1.7, 1.4, 4.0, {120.0, -2.8}, 0.0, {-14.0, 0.0}});

    c.radar_noise.range_noise_m = 0.15;
    c.radar_noise.bearing_noise_rad = 0.004;
    c.radar_noise.range_rate_noise_mps = 0.25;
    c.radar_noise.clutter_per_beam = 4;
    c.radar_noise.dropout_rate = 0.05;

    c.detector_noise.miss_rate_small = 0.85;
    c.detector_noise.miss_rate_medium = 0.30;
    c.detector_noise.miss_rate_large = 0.05;
    c.detector_noise.jitter_px = 1.0;
    c.detector_noise.fp_per_frame = 0.3;
    c.detector_noise.conf_mean = 0.85;
    c.detector_noise.conf_spread = 0.10;
    c.detector_noise.fp_conf_mean = 0.35;
    c.detector_noise.fp_conf_spread = 0.15;
    return scene;
}

}  // namespace fusekit
