// Copyright 2026 The fusekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace fusekit {

/// A 3D point or ray ended up at non-positive depth in front of a camera.
struct BehindCameraError : std::runtime_error {
    explicit BehindCameraError(const std::string& what) : std::runtime_error(what) {}
};

/// A point transfer produced a ray with non-positive z after rotation.
struct TransferDegenerateError : std::runtime_error {
    explicit TransferDegenerateError(const std::string& what) : std::runtime_error(what) {}
};

/// Not enough (or degenerate) data to solve an estimation problem.
struct UnderdeterminedError : std::runtime_error {
    explicit UnderdeterminedError(const std::string& what) : std::runtime_error(what) {}
};

/// A configuration value is outside its documented range.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A calibration is inconsistent or produces degenerate geometry.
struct CalibrationError : std::runtime_error {
    explicit CalibrationError(const std::string& what) : std::runtime_error(what) {}
};

/// File could not be read, written, or parsed. Carries file/line context.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fusekit
