// Copyright 2026 The fusekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fusekit/evaluation.hpp"
#include "fusekit/image.hpp"
#include "fusekit/labeling.hpp"
#include "fusekit/radar.hpp"
#include "fusekit/sync.hpp"

namespace fusekit {

/// All text formats are newline-delimited CSV with a fixed field order.
/// Lines starting with '#' are comments; the writers emit a format tag and
/// a column header. Floats round-trip exactly (shortest representation).

// --- detections: frame_id,class,objectness,p_vehicle,p_pedestrian,
//                 x_min,y_min,x_max,y_max,source
void write_detections(const std::filesystem::path& path,
                      std::span<const FrameDetection> detections);
std::vector<FrameDetection> read_detections(const std::filesystem::path& path);

// --- radar scans: timestamp_us,beam,range_m,bearing_rad,range_rate_mps,
//                  amplitude_db
void write_radar_scan(const std::filesystem::path& path, const RadarScan& scan);
RadarScan read_radar_scan(const std::filesystem::path& path);

// --- timestamp index: timestamp_us,path
void write_index(const std::filesystem::path& path, const TimedIndex& index);
TimedIndex read_index(const std::filesystem::path& path, const std::string& stream_id);

// --- ego track: timestamp_us,vx_mps,vy_mps,vz_mps,yaw_rate_radps
void write_ego_track(const std::filesystem::path& path, std::span<const EgoMotion> track);
std::vector<EgoMotion> read_ego_track(const std::filesystem::path& path);

// --- binary PGM (P5, maxval 255)
void write_pgm(const std::filesystem::path& path, const Image8& image);
Image8 read_pgm(const std::filesystem::path& path);

// --- evaluation report (JSON) and PR curves (CSV: confidence,precision,recall)
void write_report(const std::filesystem::path& path, const EvaluationReport& report);
void write_pr_csv(const std::filesystem::path& path, const PRCurve& curve);

/// Writes through a temp file in the same directory and renames into
/// place, so interrupted runs never leave partial files.
void atomic_write(const std::filesystem::path& path, const std::string& contents);

/// Shortest round-trip decimal form of a double (to_chars).
std::string format_double(double v);

}  // namespace fusekit
