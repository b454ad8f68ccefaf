#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "depthaudit/errors.hpp"

namespace depthaudit {

// Pinhole parameters together with the pixel dimensions they are expressed in.
// Factory metadata always comes with aspect == 1 and skew == 0; the fields are
// kept so that rescaled/derived instances stay self-describing.
struct Intrinsics {
    double f = 0.0;
    double aspect = 1.0;
    double skew = 0.0;
    double cx = 0.0;
    double cy = 0.0;
    double ref_w = 0.0;
    double ref_h = 0.0;

    Intrinsics() = default;
    Intrinsics(double f, double cx, double cy, double ref_w, double ref_h, double aspect = 1.0,
               double skew = 0.0);

    Eigen::Matrix3d K() const;

    void validate() const;
};

// 640x480 row-major raster of metric depth in meters. Invalid pixels are NaN.
class DepthMap {
  public:
    static constexpr int kWidth = 640;
    static constexpr int kHeight = 480;
    static constexpr float kInvalid = std::numeric_limits<float>::quiet_NaN();

    DepthMap();
    explicit DepthMap(std::vector<float> values);

    int width() const { return kWidth; }
    int height() const { return kHeight; }

    float at(int i, int j) const { return values_[static_cast<size_t>(j) * kWidth + i]; }
    void set(int i, int j, float v) { values_[static_cast<size_t>(j) * kWidth + i] = v; }

    bool valid(int i, int j) const { return std::isfinite(at(i, j)); }
    bool in_bounds(int i, int j) const { return i >= 0 && i < kWidth && j >= 0 && j < kHeight; }

    const std::vector<float> &values() const { return values_; }
    std::vector<float> &values() { return values_; }

  private:
    std::vector<float> values_;
};

// u = K * [x/z, y/z, 1]^T. Throws DegenerateProjection for z <= 0.
Eigen::Vector2d project(const Eigen::Vector3d &p, const Intrinsics &k);

// Lifts pixel (i, j) to a camera-frame point D(i,j) * K^-1 * [i, j, 1]^T.
// The z component of the result equals the stored depth exactly.
Eigen::Vector3d unproject(const DepthMap &d, const Intrinsics &k, int i, int j);

// One point per finite pixel, row-major order; invalid pixels are skipped.
std::vector<Eigen::Vector3d> unproject_all(const DepthMap &d, const Intrinsics &k);

// Aspect-preserving rescale to new reference dimensions.
Intrinsics rescale_intrinsics(const Intrinsics &k, double new_w, double new_h);

// Bilinear depth sample at (u, v) with pixel centers at integer coordinates.
// Any invalid contributing neighbor poisons the result; invalid is signaled by
// NaN so the sampler can be used inside resampling loops. Out-of-bounds
// coordinates throw IndexError.
double sample_bilinear(const DepthMap &d, double u, double v);

} // namespace depthaudit
