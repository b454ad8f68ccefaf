#include "depthaudit/camera.hpp"

#include <cmath>

namespace depthaudit {

Intrinsics::Intrinsics(double f, double cx, double cy, double ref_w, double ref_h, double aspect,
                       double skew)
    : f(f), aspect(aspect), skew(skew), cx(cx), cy(cy), ref_w(ref_w), ref_h(ref_h) {
    validate();
}

Eigen::Matrix3d Intrinsics::K() const {
    Eigen::Matrix3d k;
    k << f, skew, cx, 0.0, f * aspect, cy, 0.0, 0.0, 1.0;
    return k;
}

void Intrinsics::validate() const {
    if (!(f > 0.0))
        throw_error(ErrorCode::InvariantViolation, "focal length must be positive");
    if (!(ref_w > 0.0) || !(ref_h > 0.0))
        throw_error(ErrorCode::InvariantViolation, "reference dimensions must be positive");
    if (!(cx >= 0.0 && cx < ref_w) || !(cy >= 0.0 && cy < ref_h))
        throw_error(ErrorCode::InvariantViolation, "principal point outside reference dimensions");
}

DepthMap::DepthMap() : values_(static_cast<size_t>(kWidth) * kHeight, kInvalid) {}

DepthMap::DepthMap(std::vector<float> values) : values_(std::move(values)) {
    if (values_.size() != static_cast<size_t>(kWidth) * kHeight)
        throw_error(ErrorCode::DimensionError, "depth map must hold 640x480 values");
}

Eigen::Vector2d project(const Eigen::Vector3d &p, const Intrinsics &k) {
    if (!(p.z() > 0.0))
        throw_error(ErrorCode::DegenerateProjection, "point has non-positive depth");
    const double xn = p.x() / p.z();
    const double yn = p.y() / p.z();
    return {k.f * xn + k.skew * yn + k.cx, k.f * k.aspect * yn + k.cy};
}

Eigen::Vector3d unproject(const DepthMap &d, const Intrinsics &k, int i, int j) {
    if (!d.in_bounds(i, j))
        throw_error(ErrorCode::IndexError, "pixel index out of bounds");
    if (!d.valid(i, j))
        throw_error(ErrorCode::InvalidDepthSample, "depth invalid at requested pixel");
    const double depth = d.at(i, j);
    const double yn = (j - k.cy) / (k.f * k.aspect);
    const double xn = (i - k.cx - k.skew * yn) / k.f;
    return {xn * depth, yn * depth, depth};
}

std::vector<Eigen::Vector3d> unproject_all(const DepthMap &d, const Intrinsics &k) {
    std::vector<Eigen::Vector3d> points;
    points.reserve(d.values().size());
    for (int j = 0; j < d.height(); ++j) {
        for (int i = 0; i < d.width(); ++i) {
            if (d.valid(i, j))
                points.push_back(unproject(d, k, i, j));
        }
    }
    return points;
}

Intrinsics rescale_intrinsics(const Intrinsics &k, double new_w, double new_h) {
    const double rel = std::abs(new_w / new_h - k.ref_w / k.ref_h) / (k.ref_w / k.ref_h);
    if (!(rel < 1e-6))
        throw_error(ErrorCode::AspectMismatch, "rescale must preserve the aspect ratio");
    const double s = new_w / k.ref_w;
    Intrinsics out = k;
    out.f = k.f * s;
    out.cx = k.cx * s;
    out.cy = k.cy * s;
    out.ref_w = new_w;
    out.ref_h = new_h;
    return out;
}

double sample_bilinear(const DepthMap &d, double u, double v) {
    if (!(u >= 0.0 && u <= d.width() - 1 && v >= 0.0 && v <= d.height() - 1))
        throw_error(ErrorCode::IndexError, "sample coordinates out of bounds");
    const int x0 = static_cast<int>(std::floor(u));
    const int y0 = static_cast<int>(std::floor(v));
    const double fx = u - x0;
    const double fy = v - y0;

    // Exact lattice coordinates touch a single pixel; keeping this branch
    // separate makes identity resampling bit-exact.
    if (fx == 0.0 && fy == 0.0)
        return d.at(x0, y0);

    const int x1 = (fx == 0.0) ? x0 : x0 + 1;
    const int y1 = (fy == 0.0) ? y0 : y0 + 1;
    const float v00 = d.at(x0, y0);
    const float v10 = d.at(x1, y0);
    const float v01 = d.at(x0, y1);
    const float v11 = d.at(x1, y1);
    if (!std::isfinite(v00) || !std::isfinite(v10) || !std::isfinite(v01) || !std::isfinite(v11))
        return std::numeric_limits<double>::quiet_NaN();
    const double top = v00 * (1.0 - fx) + v10 * fx;
    const double bot = v01 * (1.0 - fx) + v11 * fx;
    return top * (1.0 - fy) + bot * fy;
}

} // namespace depthaudit
