// Copyright 2026 The fusekit Authors
// SPDX-License-Identifier: Apache-2.0

#include "fusekit/calibration.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fusekit/errors.hpp"

namespace fusekit {

namespace {

using nlohmann::ordered_json;

CameraIntrinsics intrinsics_from_json(const ordered_json& j, const std::string& key) {
    if (!j.contains(key)) {
        throw IoError("calibration: missing \"" + key + "\"");
    }
    const auto& c = j.at(key);
    CameraIntrinsics k;
    k.fx = c.at("fx").get<double>();
    k.fy = c.at("fy").get<double>();
    k.cx = c.at("cx").get<double>();
    k.cy = c.at("cy").get<double>();
    k.width = c.at("width").get<int>();
    k.height = c.at("height").get<int>();
    return k;
}

ordered_json intrinsics_to_json(const CameraIntrinsics& k) {
    ordered_json c;
    c["fx"] = k.fx;
    c["fy"] = k.fy;
    c["cx"] = k.cx;
    c["cy"] = k.cy;
    c["width"] = k.width;
    c["height"] = k.height;
    return c;
}

Eigen::Matrix3d matrix_from_json(const ordered_json& j) {
    if (!j.is_array() || j.size() != 9) {
        throw IoError("calibration: rotation must be a row-major array of 9 numbers");
    }
    Eigen::Matrix3d m;
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            m(r, c) = j.at(r * 3 + c).get<double>();
        }
    }
    return m;
}

ordered_json matrix_to_json(const Eigen::Matrix3d& m) {
    ordered_json j = ordered_json::array();
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            j.push_back(m(r, c));
        }
    }
    return j;
}

}  // namespace

void RigCalibration::validate() const {
    camera_wide.validate();
    camera_narrow.validate();
    if (separation_m < 0.0) {
        throw ConfigError("calibration: camera separation must be >= 0");
    }
}

Rotation3 canonical_radar_camera_rotation() {
    Eigen::Matrix3d m;
    m << 0, 1, 0, 0, 0, 1, 1, 0, 0;
    return Rotation3{m};
}

RigCalibration parse_calibration(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError(std::string("calibration: invalid JSON: ") + e.what());
    }
    try {
        RigCalibration calib;
        calib.camera_wide = intrinsics_from_json(j, "camera_wide");
        calib.camera_narrow = intrinsics_from_json(j, "camera_narrow");
        calib.rotation_wide_narrow = Rotation3{matrix_from_json(j.at("rotation_wide_narrow"))};
        calib.separation_m = j.at("separation_m").get<double>();
        if (j.contains("radar_to_wide")) {
            const auto& t = j.at("radar_to_wide");
            calib.radar_to_wide.rotation = Rotation3{matrix_from_json(t.at("rotation"))};
            const auto& tr = t.at("translation");
            if (!tr.is_array() || tr.size() != 3) {
                throw IoError("calibration: translation must be an array of 3 numbers");
            }
            calib.radar_to_wide.translation =
                Eigen::Vector3d(tr.at(0).get<double>(), tr.at(1).get<double>(),
                                tr.at(2).get<double>());
        } else {
            calib.radar_to_wide.rotation = canonical_radar_camera_rotation();
            calib.radar_to_wide.translation.setZero();
        }
        calib.validate();
        return calib;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("calibration: ") + e.what());
    }
}

std::string format_calibration(const RigCalibration& calib) {
    ordered_json j;
    j["camera_wide"] = intrinsics_to_json(calib.camera_wide);
    j["camera_narrow"] = intrinsics_to_json(calib.camera_narrow);
    j["rotation_wide_narrow"] = matrix_to_json(calib.rotation_wide_narrow.matrix());
    j["separation_m"] = calib.separation_m;
    ordered_json t;
    t["rotation"] = matrix_to_json(calib.radar_to_wide.rotation.matrix());
    t["translation"] = {calib.radar_to_wide.translation.x(), calib.radar_to_wide.translation.y(),
                        calib.radar_to_wide.translation.z()};
    j["radar_to_wide"] = t;
    return j.dump(2) + "\n";
}

RigCalibration load_calibration(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open calibration file: " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_calibration(ss.str());
}

void save_calibration(const RigCalibration& calib, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write calibration file: " + path.string());
    }
    out << format_calibration(calib);
}

}  // namespace fusekit
