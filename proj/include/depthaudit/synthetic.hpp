#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "depthaudit/camera.hpp"
#include "depthaudit/io.hpp"
#include "depthaudit/metadata.hpp"
#include "depthaudit/pose.hpp"
#include "depthaudit/rng.hpp"

namespace depthaudit {

enum class InjectedBug { None, ZoomStretch, FocalLie };

// Ground-truth scene description. All randomness flows from rng_seed; per-view
// streams are derived from (seed, view index) so rendering order and
// parallelism never change the output.
struct SceneSpec {
    int board_cols = 8; // inner corners per row
    int board_rows = 6;
    double square_size = 0.02; // meters

    Intrinsics true_intrinsics; // at 640x480

    std::vector<Pose> poses; // board -> camera, one per view

    double corner_noise_sigma = 0.0; // pixels
    double depth_noise_sigma = 0.0;  // meters

    InjectedBug bug = InjectedBug::None;
    double bug_factor = 1.0;

    uint64_t rng_seed = 0;

    // Reference dimensions used for the emitted AV metadata record.
    double meta_ird_w = 2016.0;
    double meta_ird_h = 1512.0;

    BoardLayout board() const;
    void validate() const;
};

// Everything one view produces, kept in memory for tests.
struct RenderedView {
    std::vector<Correspondence> corners; // noisy pixels + board geometry
    DepthMap depth_clean;
    DepthMap depth; // equals depth_clean unless ZoomStretch is injected
    PpmImage rgb;
    CaptureMeta meta_av;
    CaptureMeta meta_ar;
};

RenderedView render_view(const SceneSpec &spec, int view_index);

// Writes corners.csv, depth.f32, rgb.ppm, meta.json and meta_arkit.json into
// the directory.
void write_view_bundle(const std::filesystem::path &dir, const RenderedView &view);

// Pose sampled on a hemisphere cap above the board center, looking at it.
Pose sample_hemisphere_pose(const SceneSpec &spec, SplitMix64 &rng, double min_range,
                            double max_range, double max_tilt_rad);

// Fills spec.poses with n seeded hemisphere poses (replacing any present).
void populate_hemisphere_poses(SceneSpec &spec, int n, double min_range = 0.15,
                               double max_range = 0.35, double max_tilt_rad = 0.6);

// N view subdirectories (view_000, ...) plus board.json and a top-level copy
// of the AV metadata.
void generate_calibration_dataset(const SceneSpec &spec, const std::filesystem::path &out_dir);

std::string scene_to_json(const SceneSpec &spec);
SceneSpec scene_from_json(const std::string &text);

} // namespace depthaudit
