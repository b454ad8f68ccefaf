#pragma once

#include <Eigen/Dense>
#include <vector>

#include "depthaudit/camera.hpp"

namespace depthaudit {

// Rigid transform mapping board coordinates to camera coordinates.
struct Pose {
    Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
    Eigen::Vector3d t = Eigen::Vector3d::Zero();

    Eigen::Vector3d apply(const Eigen::Vector3d &x) const { return R * x + t; }
    Eigen::Vector3d camera_center() const { return -R.transpose() * t; }
};

struct Correspondence {
    int id = 0;
    Eigen::Vector3d board_point = Eigen::Vector3d::Zero(); // z == 0 for planar targets
    Eigen::Vector2d pixel = Eigen::Vector2d::Zero();
};

// Axis-angle <-> rotation matrix (Rodrigues).
Eigen::Matrix3d rotation_from_axis_angle(const Eigen::Vector3d &omega);
Eigen::Vector3d axis_angle_from_rotation(const Eigen::Matrix3d &R);

// d(R(omega) x)/d(omega), 3x3, global axis-angle chart.
Eigen::Matrix3d rotation_point_jacobian(const Eigen::Vector3d &omega, const Eigen::Vector3d &x);

// Pixels mapped to calibrated coordinates ((u - cx) / f, (v - cy) / (f * a)).
std::vector<Correspondence> normalize_points(const std::vector<Correspondence> &corrs,
                                             const Intrinsics &k);

// DLT with Hartley normalization on calibrated planar correspondences.
// Result satisfies ||H||_F == 1.
Eigen::Matrix3d estimate_homography(const std::vector<Correspondence> &corrs);

// Decomposes a calibrated plane homography, re-orthonormalizing via SVD and
// picking the sign that puts the board in front of the camera.
Pose pose_from_homography(const Eigen::Matrix3d &H);

struct RefineResult {
    Pose pose;
    double rms = 0.0; // in normalized units, sqrt(mean squared 2D error)
    int iterations = 0;
};

// Levenberg-Marquardt over axis-angle + translation with analytic Jacobian.
// Correspondences must be in normalized coordinates.
RefineResult refine_pose_lm(const std::vector<Correspondence> &corrs, const Pose &init);

struct PnpResult {
    Pose pose;
    double rms_px = 0.0;
};

// normalize -> homography -> decomposition -> LM refinement.
PnpResult solve_pnp(const std::vector<Correspondence> &corrs, const Intrinsics &k);

} // namespace depthaudit
