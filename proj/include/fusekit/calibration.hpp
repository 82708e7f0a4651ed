// Copyright 2026 The fusekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>

#include "fusekit/geometry.hpp"

namespace fusekit {

/// Full sensor-rig calibration: both cameras, the wide<-narrow rotation,
/// the physical camera separation and the radar-to-wide-camera extrinsics.
///
/// JSON schema (all keys required unless noted):
///   {
///     "camera_wide":   {"fx","fy","cx","cy","width","height"},
///     "camera_narrow": {"fx","fy","cx","cy","width","height"},
///     "rotation_wide_narrow": [r00,r01,...,r22],   // row-major 3x3
///     "separation_m": 0.032,
///     "radar_to_wide": {"rotation": [...], "translation": [x,y,z]}  // optional
///   }
///
/// When "radar_to_wide" is omitted the canonical alignment is used: radar
/// x (boresight) -> camera z, radar y (right) -> camera x, radar z (down)
/// -> camera y, zero translation.
struct RigCalibration {
    CameraIntrinsics camera_wide;
    CameraIntrinsics camera_narrow;
    Rotation3 rotation_wide_narrow;  // R_AB: narrow-frame rays to wide-frame rays
    double separation_m = 0.0;
    RigidTransform radar_to_wide;

    void validate() const;
};

/// Rotation part of the canonical radar->camera frame change (cyclic axis
/// permutation, see RigCalibration docs).
Rotation3 canonical_radar_camera_rotation();

RigCalibration load_calibration(const std::filesystem::path& path);
void save_calibration(const RigCalibration& calib, const std::filesystem::path& path);

/// Parse/serialize from a JSON string (the file functions wrap these).
RigCalibration parse_calibration(const std::string& json_text);
std::string format_calibration(const RigCalibration& calib);

}  // namespace fusekit
