#pragma once

#include <vector>

#include "depthaudit/pose.hpp"

namespace depthaudit {

struct CalibrationView {
    std::vector<Correspondence> correspondences;
    Eigen::Vector3d camera_center_estimate = Eigen::Vector3d::Zero(); // board frame
    bool accepted = false;
};

struct CalibrationOptions {
    double voxel_size = 0.03; // meters, board frame
    int min_corners = 10;
    int min_views = 3;
    double condition_warn = 1e12;
};

// Voxel-grid viewpoint selection: views with too few corners are rejected
// first, then the board-frame space is cut into axis-aligned cubes and the
// first view (input order) per occupied voxel survives.
std::vector<CalibrationView> select_views(const std::vector<CalibrationView> &views,
                                          double voxel_size, int min_corners = 10);

struct CalibrationResult {
    double f = 0.0;
    std::vector<Pose> per_view_poses;
    double rms_reproj_px = 0.0;
    int views_used = 0;
    int views_rejected_corners = 0;
    int views_rejected_voxel = 0;
    bool ill_conditioned = false;
    int iterations = 0;
};

// Focal-length-only bundle: joint LM over [f, pose_1..pose_N] minimizing pixel
// reprojection error with aspect 1, zero skew, and the principal point frozen
// at the initial guess. Poses are initialized by solve_pnp with k_init.
CalibrationResult calibrate_focal(const std::vector<CalibrationView> &views,
                                  const Intrinsics &k_init,
                                  const CalibrationOptions &options = {});

// Full protocol: per-view solve_pnp for camera centers, corner-count and voxel
// rejection, then calibrate_focal on the survivors.
CalibrationResult run_calibration(const std::vector<std::vector<Correspondence>> &views,
                                  const Intrinsics &k_init,
                                  const CalibrationOptions &options = {});

// 100 * |f_factory - f_calibrated| / f_factory.
double focal_discrepancy(double f_factory, double f_calibrated);

} // namespace depthaudit
