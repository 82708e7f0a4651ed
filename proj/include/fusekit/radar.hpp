// Copyright 2026 The fusekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fusekit/calibration.hpp"
#include "fusekit/geometry.hpp"
#include "fusekit/image.hpp"

namespace fusekit {

enum class RadarBeam { medium_wide, long_narrow };

const char* to_string(RadarBeam b);
RadarBeam radar_beam_from_string(const std::string& s);

/// Field-of-view and reach limits of one radar beam.
struct BeamSpec {
    RadarBeam beam = RadarBeam::medium_wide;
    double half_angle_rad = 0.0;
    double max_range_m = 0.0;
    int max_targets = 64;

    bool contains(double bearing_rad, double range_m) const {
        return std::abs(bearing_rad) <= half_angle_rad && range_m >= 0.0 &&
               range_m <= max_range_m;
    }
};

/// One identified radar target. The sensor frame has x along the
/// boresight, y right, z down; bearing 0 is the boresight, positive
/// bearings to the right. Negative range rate means closing.
struct RadarTarget {
    double range_m = 0.0;
    double bearing_rad = 0.0;
    double range_rate_mps = 0.0;
    double amplitude_db = 0.0;
    RadarBeam beam = RadarBeam::medium_wide;
    std::int64_t timestamp_us = 0;
};

/// All targets identified in one scan, at most 64 per beam.
struct RadarScan {
    std::int64_t timestamp_us = 0;
    std::vector<RadarTarget> targets;

    /// Per-beam count cap and non-negative ranges; throws ConfigError.
    void validate() const;
};

/// Platform motion estimate nearest to a scan.
struct EgoMotion {
    Eigen::Vector3d linear_mps = Eigen::Vector3d::Zero();  // platform frame, x forward
    double yaw_rate_radps = 0.0;
    std::int64_t timestamp_us = 0;
};

/// The two radar-derived image channels aligned to the wide camera.
/// Background pixels hold 0 in both channels; a present target with zero
/// range rate encodes as 127 in the range-rate channel.
struct RadarChannels {
    Image8 range_image;
    Image8 range_rate_image;
};

/// Removes the platform's own velocity component along the target ray so
/// static structure reads a range rate of zero. Only range rate changes.
RadarTarget compensate_ego_motion(const RadarTarget& target, const EgoMotion& ego);

/// Projects a radar target into a camera: x = K * T_AR * X_R with
/// X_R = (range cos b, range sin b, 0, 1) in the planar sensor frame.
/// Returns nullopt when the target lands behind the camera.
std::optional<ImagePoint> project_target(const RadarTarget& target,
                                         const RigidTransform& radar_to_camera,
                                         const CameraIntrinsics& camera);

/// Range encoding: linear [0, 100 m] -> [1, 255], clamped above; pixel 0
/// is reserved for background. Throws std::domain_error for negative range.
std::uint8_t encode_range(double range_m);
/// Inverse of encode_range over its gamut (pixel 1..255 -> metres).
double decode_range(std::uint8_t pixel);

/// Range-rate encoding: clamp(round(127 + 5 * rr), 0, 255).
std::uint8_t encode_range_rate(double range_rate_mps);
/// Inverse of encode_range_rate over its unclamped span.
double decode_range_rate(std::uint8_t pixel);

struct RenderOptions {
    int circle_radius_px = 2;
    double range_scale_max_m = 100.0;  // documented for the inverse map
};

/// Ego-compensates every target, projects it through the calibration's
/// radar extrinsics into the wide camera and stamps a filled circle of the
/// encoded values into both channels. Targets projecting outside the image
/// are dropped silently; where circles overlap the nearer target wins.
/// Deterministic: identical inputs give bit-identical images.
RadarChannels render_channels(const RadarScan& scan, const EgoMotion& ego,
                              const RigCalibration& calib, int width, int height,
                              const RenderOptions& options = {});

struct ChannelStats {
    double mean = 0.0;
    double stddev = 0.0;  // population
};

/// Exact dataset mean and population standard deviation of one channel.
/// Integer accumulation keeps the result exact to double rounding.
/// Throws ConfigError on an empty dataset.
ChannelStats channel_stats(const std::vector<Image8>& images);

}  // namespace fusekit
