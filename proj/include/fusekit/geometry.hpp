// Copyright 2026 The fusekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <span>
#include <utility>
#include <vector>

#include "fusekit/errors.hpp"

namespace fusekit {

/// Pinhole intrinsics with zero skew and zero distortion, plus image bounds.
/// Units are pixels throughout.
struct CameraIntrinsics {
    double fx = 0.0;
    double fy = 0.0;
    double cx = 0.0;
    double cy = 0.0;
    int width = 0;
    int height = 0;

    /// Throws ConfigError unless fx,fy > 0, width,height > 0 and the
    /// principal point lies inside the image.
    void validate() const;

    Eigen::Matrix3d matrix() const;
    Eigen::Matrix3d inverse_matrix() const;
};

/// 3x3 orthonormal matrix with det +1. Construction validates
/// orthonormality to 1e-9.
class Rotation3 {
  public:
    Rotation3() : m_(Eigen::Matrix3d::Identity()) {}
    explicit Rotation3(const Eigen::Matrix3d& m);

    static Rotation3 identity() { return Rotation3{}; }
    /// Rotation of `angle_rad` about a (not necessarily unit) axis.
    static Rotation3 axis_angle(const Eigen::Vector3d& axis, double angle_rad);

    const Eigen::Matrix3d& matrix() const { return m_; }
    Rotation3 transpose() const;
    Eigen::Vector3d operator*(const Eigen::Vector3d& v) const { return m_ * v; }
    Rotation3 operator*(const Rotation3& o) const;

    /// Rotation angle in radians separating this from `other`.
    double angle_to(const Rotation3& other) const;

  private:
    Eigen::Matrix3d m_;
};

/// Rigid map y = R*x + t, translation in metres.
struct RigidTransform {
    Rotation3 rotation;
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();

    Eigen::Vector3d operator*(const Eigen::Vector3d& p) const {
        return rotation * p + translation;
    }
    RigidTransform inverse() const;
    RigidTransform operator*(const RigidTransform& o) const;
};

/// Image point (u, v) in pixels. May lie outside image bounds; the
/// homogeneous scale is fixed to 1 on construction.
struct ImagePoint {
    double u = 0.0;
    double v = 0.0;

    Eigen::Vector3d homogeneous() const { return {u, v, 1.0}; }
};

/// Axis-aligned box in continuous pixel coordinates, x_min <= x_max and
/// y_min <= y_max.
struct BBox {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    double area() const { return width() * height(); }
    bool valid() const { return x_min <= x_max && y_min <= y_max; }

    /// Intersection; degenerate (zero-area) when disjoint.
    BBox intersect(const BBox& o) const;
    /// Smallest box containing both.
    BBox hull(const BBox& o) const;
    /// Clamped into [0,w]x[0,h]. Fully-outside boxes collapse to a
    /// zero-area sliver on the nearest border.
    BBox clip(double w, double h) const;
    bool contains(const ImagePoint& p) const {
        return p.u >= x_min && p.u <= x_max && p.v >= y_min && p.v <= y_max;
    }
};

/// Camera with pose: X_cam = world_to_camera * X_world.
struct CameraModel {
    CameraIntrinsics intrinsics;
    RigidTransform world_to_camera;
};

/// Pinhole projection of a world point. Throws BehindCameraError when the
/// point has non-positive depth in the camera frame.
ImagePoint project(const CameraModel& camera, const Eigen::Vector3d& point_world);

/// Projects a camera-frame point (z forward). Same depth rule as project().
ImagePoint project_camera_frame(const CameraIntrinsics& k, const Eigen::Vector3d& point_cam);

/// Redraws an image point of camera B in camera A assuming coincident
/// camera centres: dehomogenized K_A * R_AB * K_B^-1 * x_B. Throws
/// TransferDegenerateError when the rotated ray has non-positive z.
ImagePoint transfer_point(const ImagePoint& x_b, const CameraIntrinsics& k_a,
                          const CameraIntrinsics& k_b, const Rotation3& r_ab);

/// Transfers all four corners of box_b and returns their axis-aligned hull.
/// Any degenerate corner throws TransferDegenerateError.
BBox transfer_box(const BBox& box_b, const CameraIntrinsics& k_a,
                  const CameraIntrinsics& k_b, const Rotation3& r_ab);

/// Pixel offset bound f_A * d / Z induced by approximating two camera
/// centres separated by d metres as coincident, for a point at depth Z.
/// Throws std::domain_error for Z <= 0.
double transfer_error_bound(double focal_a_px, double separation_m, double depth_m);

/// One matched pixel pair: the same 3D direction seen in camera A and B.
struct Correspondence {
    ImagePoint in_a;
    ImagePoint in_b;
};

/// Closed-form estimate of R_AB from pixel correspondences: orthogonal
/// alignment of unit bearing vectors K_A^-1 x_A with K_B^-1 x_B.
/// Needs >= 2 correspondences with non-parallel rays, otherwise throws
/// UnderdeterminedError.
Rotation3 estimate_rotation(std::span<const Correspondence> correspondences,
                            const CameraIntrinsics& k_a, const CameraIntrinsics& k_b);

}  // namespace fusekit
