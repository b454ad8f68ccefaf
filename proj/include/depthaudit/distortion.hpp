#pragma once

#include <Eigen/Dense>
#include <vector>

#include "depthaudit/errors.hpp"

namespace depthaudit {

// Generic float raster used for warping experiments (any resolution, unlike
// DepthMap which is pinned to 640x480). Out-of-source samples are zero.
struct ImageF {
    int width = 0;
    int height = 0;
    std::vector<float> values;

    ImageF() = default;
    ImageF(int w, int h, float fill = 0.0f)
        : width(w), height(h), values(static_cast<size_t>(w) * h, fill) {}

    float at(int i, int j) const { return values[static_cast<size_t>(j) * width + i]; }
    void set(int i, int j, float v) { values[static_cast<size_t>(j) * width + i] = v; }
};

// Radial distortion described by magnification samples uniformly spaced in
// radius from the distortion center out to the farthest image corner.
//
// Magnification semantics: a point p maps to center + (1 + m(r)) * (p - center)
// with m linearly interpolated over the table and clamped past the last entry.
// The inverse table is applied with the identical algorithm.
struct RadialLut {
    std::vector<double> magnifications;
    Eigen::Vector2d center = Eigen::Vector2d::Zero();
    double ref_w = 0.0;
    double ref_h = 0.0;

    void validate() const;

    // Distance from the center to the farthest image corner.
    double max_radius() const;

    // Interpolated magnification at radius r (in reference pixels).
    double magnification_at(double r) const;
};

Eigen::Vector2d warp_point(const RadialLut &lut, double u, double v);

// Inverse-mapping resample: the output pixel at q takes the input bilinearly
// sampled at warp_point(q). The LUT center and radius are rescaled when the
// raster dimensions are a proportional multiple of the reference dimensions.
ImageF warp_image(const ImageF &img, const RadialLut &lut);

// Audit statistic for residual distortion: total-least-squares line fit per
// group of nominally collinear pixels, returns the max RMS perpendicular
// residual over groups.
double detect_residual_distortion(const std::vector<std::vector<Eigen::Vector2d>> &groups);

} // namespace depthaudit
