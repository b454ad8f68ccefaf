#pragma once

#include <string>
#include <vector>

#include "depthaudit/camera.hpp"
#include "depthaudit/io.hpp"
#include "depthaudit/pose.hpp"

namespace depthaudit {

struct DepthErrorRecord {
    int id = 0;
    double z_depth_mm = 0.0; // bilinearly sampled raster depth
    double z_board_mm = 0.0; // pose-transformed board point
    double d_mm = 0.0;       // z_depth - z_board
};

struct DepthErrorReport {
    std::vector<DepthErrorRecord> records;
    double mean_d_mm = 0.0;
    double median_d_mm = 0.0;
    double std_d_mm = 0.0;
    std::vector<double> bin_edges_mm;
    std::vector<int> bin_counts;
    int invalid_corners = 0;
    std::string intrinsics_label;
};

// The board-vs-raster depth comparison: solves the board pose from the corner
// correspondences, then reports per-corner d = Z_depth - Z_board in
// millimeters. Corners with invalid depth samples are dropped and counted.
DepthErrorReport verify_depth(const DepthMap &d, const std::vector<Correspondence> &corrs,
                              const Intrinsics &k, double bin_width_mm = 0.25,
                              const std::string &label = "factory");

// Color-coded depth superimposed on the RGB frame: normalized inverse depth
// through a fixed 256-entry blue->green->red ramp, alpha-blended at 0.5.
// Invalid depth leaves the RGB pixel untouched.
PpmImage render_overlay(const PpmImage &rgb, const DepthMap &d, const Intrinsics &k_color);

// Lookup into the overlay ramp (index 0..255) as r, g, b.
void overlay_ramp(int index, uint8_t rgb_out[3]);

struct HistogramDocs {
    std::string svg;
    std::string csv; // bin_low,bin_high,count
};

HistogramDocs emit_histogram(const DepthErrorReport &report);
HistogramDocs emit_histogram(const std::vector<DepthErrorReport> &reports);

std::string depth_report_json(const DepthErrorReport &report);

} // namespace depthaudit
