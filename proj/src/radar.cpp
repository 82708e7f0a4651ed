// Copyright 2026 The fusekit Authors
// SPDX-License-Identifier: Apache-2.0

#include "fusekit/radar.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace fusekit {

const char* to_string(RadarBeam b) {
    switch (b) {
        case RadarBeam::medium_wide: return "medium_wide";
        case RadarBeam::long_narrow: return "long_narrow";
    }
    return "medium_wide";
}

RadarBeam radar_beam_from_string(const std::string& s) {
    if (s == "medium_wide") return RadarBeam::medium_wide;
    if (s == "long_narrow") return RadarBeam::long_narrow;
    throw ConfigError("unknown radar beam: " + s);
}

void RadarScan::validate() const {
    std::map<RadarBeam, int> counts;
    for (const RadarTarget& t : targets) {
        if (t.range_m < 0.0) {
            throw ConfigError("radar target range must be >= 0");
        }
        ++counts[t.beam];
    }
    for (const auto& [beam, n] : counts) {
        if (n > 64) {
            throw ConfigError(std::string("radar scan holds more than 64 targets in beam ") +
                              to_string(beam));
        }
    }
}

RadarTarget compensate_ego_motion(const RadarTarget& target, const EgoMotion& ego) {
    const Eigen::Vector3d ray(std::cos(target.bearing_rad), std::sin(target.bearing_rad), 0.0);
    RadarTarget out = target;
    out.range_rate_mps = target.range_rate_mps + ego.linear_mps.dot(ray);
    return out;
}

std::optional<ImagePoint> project_target(const RadarTarget& target,
                                         const RigidTransform& radar_to_camera,
                                         const CameraIntrinsics& camera) {
    const Eigen::Vector3d point_radar(target.range_m * std::cos(target.bearing_rad),
                                      target.range_m * std::sin(target.bearing_rad), 0.0);
    const Eigen::Vector3d point_cam = radar_to_camera * point_radar;
    if (!(point_cam.z() > 0.0)) {
        return std::nullopt;
    }
    return project_camera_frame(camera, point_cam);
}

std::uint8_t encode_range(double range_m) {
    if (range_m < 0.0) {
        throw std::domain_error("encode_range: range must be >= 0");
    }
    const double v = 1.0 + range_m * (254.0 / 100.0);
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 1L, 255L));
}

double decode_range(std::uint8_t pixel) {
    return (static_cast<double>(pixel) - 1.0) * (100.0 / 254.0);
}

std::uint8_t encode_range_rate(double range_rate_mps) {
    const double v = 127.0 + 5.0 * range_rate_mps;
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

double decode_range_rate(std::uint8_t pixel) {
    return (static_cast<double>(pixel) - 127.0) / 5.0;
}

namespace {

void stamp_circle(Image8& img, int cx, int cy, int radius, std::uint8_t value) {
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            if (dx * dx + dy * dy > radius * radius) continue;
            const int x = cx + dx;
            const int y = cy + dy;
            if (img.in_bounds(x, y)) {
                img.set(x, y, value);
            }
        }
    }
}

}  // namespace

RadarChannels render_channels(const RadarScan& scan, const EgoMotion& ego,
                              const RigCalibration& calib, int width, int height,
                              const RenderOptions& options) {
    RadarChannels channels{Image8(width, height, 0), Image8(width, height, 0)};

    struct Drawable {
        double range_m;
        int px;
        int py;
        std::uint8_t range_value;
        std::uint8_t rate_value;
    };
    std::vector<Drawable> drawables;
    drawables.reserve(scan.targets.size());

    for (const RadarTarget& raw : scan.targets) {
        const RadarTarget target = compensate_ego_motion(raw, ego);
        const auto point = project_target(target, calib.radar_to_wide, calib.camera_wide);
        if (!point) continue;
        if (point->u < 0.0 || point->u >= width || point->v < 0.0 || point->v >= height) {
            continue;
        }
        drawables.push_back({target.range_m, static_cast<int>(std::lround(point->u)),
                             static_cast<int>(std::lround(point->v)),
                             encode_range(target.range_m),
                             encode_range_rate(target.range_rate_mps)});
    }

    // Far-to-near draw order so nearer targets overwrite on overlap.
    std::stable_sort(drawables.begin(), drawables.end(),
                     [](const Drawable& a, const Drawable& b) { return a.range_m > b.range_m; });

    for (const Drawable& d : drawables) {
        stamp_circle(channels.range_image, d.px, d.py, options.circle_radius_px, d.range_value);
        stamp_circle(channels.range_rate_image, d.px, d.py, options.circle_radius_px,
                     d.rate_value);
    }
    return channels;
}

ChannelStats channel_stats(const std::vector<Image8>& images) {
    if (images.empty()) {
        throw ConfigError("channel_stats: dataset is empty");
    }
    std::uint64_t sum = 0;
    std::uint64_t sum_sq = 0;
    std::uint64_t count = 0;
    for (const Image8& img : images) {
        for (std::uint8_t p : img.pixels()) {
            sum += p;
            sum_sq += static_cast<std::uint64_t>(p) * p;
        }
        count += img.pixels().size();
    }
    ChannelStats stats;
    const double n = static_cast<double>(count);
    stats.mean = static_cast<double>(sum) / n;
    const double var = static_cast<double>(sum_sq) / n - stats.mean * stats.mean;
    stats.stddev = std::sqrt(std::max(var, 0.0));
    return stats;
}

}  // namespace fusekit
