// Copyright 2026 The fusekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "fusekit/calibration.hpp"
#include "fusekit/geometry.hpp"
#include "fusekit/labeling.hpp"
#include "fusekit/radar.hpp"

namespace fusekit {

/// World frame: x forward, y right, z down, ground plane at z = 0.
/// The ego platform keeps an identity heading and translates with
/// piecewise-constant velocity; the platform frame therefore stays
/// axis-aligned with the world frame.

/// A simulated vehicle: a 3D box on the ground plane moving with constant
/// velocity. `yaw_rad` rotates the footprint about the vertical axis;
/// length runs along the heading, width across it.
struct VehicleSpec {
    double width_m = 1.8;
    double height_m = 1.5;
    double length_m = 4.3;
    Eigen::Vector2d position_m = Eigen::Vector2d::Zero();  // footprint centre, world xy
    double yaw_rad = 0.0;
    Eigen::Vector2d velocity_mps = Eigen::Vector2d::Zero();  // world xy

    void validate() const;
};

struct EgoSegment {
    double duration_s = 0.0;
    Eigen::Vector3d velocity_mps = Eigen::Vector3d::Zero();  // world frame
};

/// Uniform half-width noise bounds for the radar model plus clutter and
/// outlier injection. Bounded noise keeps the static-structure oracle
/// sharp: a compensated static return can never exceed the configured
/// range-rate bound.
struct RadarNoiseConfig {
    double range_noise_m = 0.0;
    double bearing_noise_rad = 0.0;
    double range_rate_noise_mps = 0.0;
    int clutter_per_beam = 0;      // static-structure returns per scan
    double dropout_rate = 0.0;     // chance a vehicle return goes missing
    double outlier_rate = 0.0;     // chance of one wild return per beam per scan
};

/// Synthetic detector imperfection model: size-dependent misses, box
/// jitter, false positives and a confidence draw. Size categories follow
/// the evaluation thresholds in the image the detections are made in.
struct DetectorNoiseConfig {
    double miss_rate_small = 0.0;
    double miss_rate_medium = 0.0;
    double miss_rate_large = 0.0;
    double jitter_px = 0.0;        // gaussian sigma per box coordinate
    double fp_per_frame = 0.0;     // Poisson mean
    double conf_mean = 1.0;        // true-detection confidence, uniform spread
    double conf_spread = 0.0;
    double fp_conf_mean = 0.3;
    double fp_conf_spread = 0.1;
};

/// The physical sensor arrangement: calibration plus radar beam limits.
/// The wide camera sits at the platform origin looking along +x; the
/// narrow camera is offset `separation_m` to the right; the radar is
/// mounted rotationally aligned with the platform.
struct SensorRig {
    RigCalibration calibration;
    std::vector<BeamSpec> beams;

    void validate() const;
};

/// Rig matching the default pipeline geometry: 640x256 wide camera with
/// f = 625, 1280x960 narrow camera with f = 2500, 0.032 m separation,
/// canonical radar mount and the two stock beams.
SensorRig default_rig();

struct SceneConfig {
    std::uint64_t seed = 1;
    double duration_s = 0.0;
    double camera_rate_hz = 30.0;
    double radar_rate_hz = 20.0;
    std::int64_t timestamp_jitter_us = 0;
    std::int64_t radar_phase_us = 0;
    Eigen::Vector3d ego_start = {0.0, 0.0, -1.5};  // platform origin, world frame
    std::vector<EgoSegment> ego_segments;
    std::vector<VehicleSpec> vehicles;
    RadarNoiseConfig radar_noise;
    DetectorNoiseConfig detector_noise;

    void validate() const;
    double total_segment_duration_s() const;
};

struct Scene {
    SceneConfig config;
    SensorRig rig;

    void validate() const;
};

/// Ground-truth box of one vehicle in one camera.
struct GtBox {
    int vehicle_id = 0;
    BBox box;                 // clipped to image bounds
    double depth_near_m = 0;  // nearest 3D corner depth in the camera frame
};

/// Everything the sensors would see at one instant.
struct FrameTruth {
    std::int64_t timestamp_us = 0;
    std::vector<GtBox> wide_boxes;
    std::vector<GtBox> narrow_boxes;
    RadarScan scan;
    EgoMotion ego;
};

/// Deterministic per-frame random substream derived from (seed, tag, index).
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index);

/// Ego platform state at time t (seconds from scene start). Throws
/// ConfigError when t is outside the trajectory.
Eigen::Vector3d ego_position(const Scene& scene, double t_s);
Eigen::Vector3d ego_velocity(const Scene& scene, double t_s);

/// World-posed cameras at time t.
CameraModel wide_camera_at(const Scene& scene, double t_s);
CameraModel narrow_camera_at(const Scene& scene, double t_s);

/// Unclipped axis-aligned projection of the vehicle's 8 corners, or
/// nullopt when any corner is at non-positive depth.
std::optional<GtBox> project_vehicle_box(const CameraModel& camera, const VehicleSpec& vehicle,
                                         double t_s, int vehicle_id);

/// Jittered sensor clocks over [0, duration).
std::vector<std::int64_t> camera_timestamps(const Scene& scene);
std::vector<std::int64_t> radar_timestamps(const Scene& scene);

/// Renders ground truth for all sensors at time t. `noise_stream` selects
/// the radar noise substream; identical inputs give identical output, so
/// frames can be rendered in parallel in any order.
FrameTruth render_frame(const Scene& scene, double t_s, std::uint64_t noise_stream);

/// Applies the detector imperfection model to ground-truth boxes.
/// Deterministic for a given rng state.
std::vector<Detection> corrupt_detections(std::span<const GtBox> gt_boxes,
                                          const DetectorNoiseConfig& model, double image_width,
                                          double image_height, std::mt19937_64& rng);

/// Pixel correspondences of vehicle corners visible in both cameras at
/// time t, optionally perturbed by gaussian pixel noise. Used to exercise
/// rotation estimation against a known R_AB.
std::vector<Correspondence> generate_correspondences(const Scene& scene, double t_s,
                                                     std::size_t max_count,
                                                     double pixel_noise_sigma,
                                                     std::uint64_t noise_stream);

/// Scene-file schema (JSON): see docs in scene_config_from_json.
Scene load_scene(const std::filesystem::path& path);
Scene parse_scene(const std::string& json_text);
std::string format_scene(const Scene& scene);

/// A ready-to-run example: default rig, mixed near/far traffic, mild
/// radar noise and a detector model that misses small objects.
Scene make_example_scene();

}  // namespace fusekit
