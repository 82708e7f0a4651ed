// Copyright 2026 The fusekit Authors
// SPDX-License-Identifier: Apache-2.0

#include "fusekit/geometry.hpp"

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>

namespace fusekit {

namespace {
constexpr double kOrthonormalTol = 1e-9;
}

void CameraIntrinsics::validate() const {
    if (!(fx > 0.0) || !(fy > 0.0)) {
        throw ConfigError("camera intrinsics: focal lengths must be positive");
    }
    if (width <= 0 || height <= 0) {
        throw ConfigError("camera intrinsics: image dimensions must be positive");
    }
    if (!(cx >= 0.0 && cx < width) || !(cy >= 0.0 && cy < height)) {
        throw ConfigError("camera intrinsics: principal point outside image bounds");
    }
}

Eigen::Matrix3d CameraIntrinsics::matrix() const {
    Eigen::Matrix3d k;
    k << fx, 0.0, cx, 0.0, fy, cy, 0.0, 0.0, 1.0;
    return k;
}

Eigen::Matrix3d CameraIntrinsics::inverse_matrix() const {
    Eigen::Matrix3d k;
    k << 1.0 / fx, 0.0, -cx / fx, 0.0, 1.0 / fy, -cy / fy, 0.0, 0.0, 1.0;
    return k;
}

Rotation3::Rotation3(const Eigen::Matrix3d& m) : m_(m) {
    const double ortho = (m.transpose() * m - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
    if (ortho > kOrthonormalTol) {
        throw ConfigError("rotation matrix is not orthonormal");
    }
    if (std::abs(m.determinant() - 1.0) > kOrthonormalTol) {
        throw ConfigError("rotation matrix determinant is not +1");
    }
}

Rotation3 Rotation3::axis_angle(const Eigen::Vector3d& axis, double angle_rad) {
    const double n = axis.norm();
    if (n == 0.0) {
        throw ConfigError("rotation axis must be non-zero");
    }
    Rotation3 r;
    r.m_ = Eigen::AngleAxisd(angle_rad, axis / n).toRotationMatrix();
    return r;
}

Rotation3 Rotation3::transpose() const {
    Rotation3 r;
    r.m_ = m_.transpose();
    return r;
}

Rotation3 Rotation3::operator*(const Rotation3& o) const {
    Rotation3 r;
    r.m_ = m_ * o.m_;
    return r;
}

double Rotation3::angle_to(const Rotation3& other) const {
    const double c = ((m_.transpose() * other.m_).trace() - 1.0) / 2.0;
    return std::acos(std::clamp(c, -1.0, 1.0));
}

RigidTransform RigidTransform::inverse() const {
    RigidTransform t;
    t.rotation = rotation.transpose();
    t.translation = -(t.rotation * translation);
    return t;
}

RigidTransform RigidTransform::operator*(const RigidTransform& o) const {
    RigidTransform t;
    t.rotation = rotation * o.rotation;
    t.translation = rotation * o.translation + translation;
    return t;
}

BBox BBox::intersect(const BBox& o) const {
    BBox r;
    r.x_min = std::max(x_min, o.x_min);
    r.y_min = std::max(y_min, o.y_min);
    r.x_max = std::min(x_max, o.x_max);
    r.y_max = std::min(y_max, o.y_max);
    if (r.x_min > r.x_max) r.x_max = r.x_min;
    if (r.y_min > r.y_max) r.y_max = r.y_min;
    return r;
}

BBox BBox::hull(const BBox& o) const {
    return {std::min(x_min, o.x_min), std::min(y_min, o.y_min), std::max(x_max, o.x_max),
            std::max(y_max, o.y_max)};
}

BBox BBox::clip(double w, double h) const {
    BBox r;
    r.x_min = std::clamp(x_min, 0.0, w);
    r.y_min = std::clamp(y_min, 0.0, h);
    r.x_max = std::clamp(x_max, 0.0, w);
    r.y_max = std::clamp(y_max, 0.0, h);
    return r;
}

ImagePoint project_camera_frame(const CameraIntrinsics& k, const Eigen::Vector3d& point_cam) {
    if (!(point_cam.z() > 0.0)) {
        throw BehindCameraError("point has non-positive depth in camera frame");
    }
    return {k.fx * point_cam.x() / point_cam.z() + k.cx,
            k.fy * point_cam.y() / point_cam.z() + k.cy};
}

ImagePoint project(const CameraModel& camera, const Eigen::Vector3d& point_world) {
    return project_camera_frame(camera.intrinsics, camera.world_to_camera * point_world);
}

ImagePoint transfer_point(const ImagePoint& x_b, const CameraIntrinsics& k_a,
                          const CameraIntrinsics& k_b, const Rotation3& r_ab) {
    const Eigen::Vector3d ray_b = k_b.inverse_matrix() * x_b.homogeneous();
    const Eigen::Vector3d ray_a = r_ab * ray_b;
    if (!(ray_a.z() > 0.0)) {
        throw TransferDegenerateError("transferred ray has non-positive z");
    }
    const Eigen::Vector3d x_a = k_a.matrix() * ray_a;
    return {x_a.x() / x_a.z(), x_a.y() / x_a.z()};
}

BBox transfer_box(const BBox& box_b, const CameraIntrinsics& k_a, const CameraIntrinsics& k_b,
                  const Rotation3& r_ab) {
    const ImagePoint corners[4] = {{box_b.x_min, box_b.y_min},
                                   {box_b.x_max, box_b.y_min},
                                   {box_b.x_min, box_b.y_max},
                                   {box_b.x_max, box_b.y_max}};
    BBox out;
    for (int i = 0; i < 4; ++i) {
        const ImagePoint p = transfer_point(corners[i], k_a, k_b, r_ab);
        if (i == 0) {
            out = {p.u, p.v, p.u, p.v};
        } else {
            out.x_min = std::min(out.x_min, p.u);
            out.y_min = std::min(out.y_min, p.v);
            out.x_max = std::max(out.x_max, p.u);
            out.y_max = std::max(out.y_max, p.v);
        }
    }
    return out;
}

double transfer_error_bound(double focal_a_px, double separation_m, double depth_m) {
    if (!(depth_m > 0.0)) {
        throw std::domain_error("transfer_error_bound: depth must be positive");
    }
    return focal_a_px * separation_m / depth_m;
}

Rotation3 estimate_rotation(std::span<const Correspondence> correspondences,
                            const CameraIntrinsics& k_a, const CameraIntrinsics& k_b) {
    if (correspondences.size() < 2) {
        throw UnderdeterminedError("rotation estimation needs at least 2 correspondences");
    }
    const Eigen::Matrix3d ka_inv = k_a.inverse_matrix();
    const Eigen::Matrix3d kb_inv = k_b.inverse_matrix();

    // Cross-covariance of unit bearing vectors; R maximizes tr(R * H).
    Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
    for (const Correspondence& c : correspondences) {
        const Eigen::Vector3d ba = (ka_inv * c.in_a.homogeneous()).normalized();
        const Eigen::Vector3d bb = (kb_inv * c.in_b.homogeneous()).normalized();
        h += bb * ba.transpose();
    }

    Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::Vector3d s = svd.singularValues();
    if (s(1) <= 1e-12 * s(0)) {
        throw UnderdeterminedError("rotation estimation: rays are (near-)parallel");
    }
    Eigen::Matrix3d r = svd.matrixV() * svd.matrixU().transpose();
    if (r.determinant() < 0.0) {
        Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
        flip(2, 2) = -1.0;
        r = svd.matrixV() * flip * svd.matrixU().transpose();
    }
    // Re-orthonormalize to keep the Rotation3 invariants sharp.
    Eigen::JacobiSVD<Eigen::Matrix3d> clean(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
    r = clean.matrixU() * clean.matrixV().transpose();
    return Rotation3{r};
}

}  // namespace fusekit
