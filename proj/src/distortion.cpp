#include "depthaudit/distortion.hpp"

#include <cmath>

namespace depthaudit {

void RadialLut::validate() const {
    if (magnifications.size() < 2)
        throw_error(ErrorCode::InvariantViolation, "radial LUT needs at least 2 entries");
    for (double m : magnifications) {
        if (!std::isfinite(m))
            throw_error(ErrorCode::InvariantViolation, "radial LUT entries must be finite");
    }
    if (!(ref_w > 0.0) || !(ref_h > 0.0))
        throw_error(ErrorCode::InvariantViolation, "radial LUT reference dimensions must be positive");
}

double RadialLut::max_radius() const {
    double r = 0.0;
    const double xs[2] = {0.0, ref_w - 1.0};
    const double ys[2] = {0.0, ref_h - 1.0};
    for (double x : xs)
        for (double y : ys)
            r = std::max(r, (Eigen::Vector2d(x, y) - center).norm());
    return r;
}

double RadialLut::magnification_at(double r) const {
    const double r_max = max_radius();
    const size_t n = magnifications.size();
    const double pos = (r / r_max) * static_cast<double>(n - 1);
    if (pos <= 0.0)
        return magnifications.front();
    if (pos >= static_cast<double>(n - 1))
        return magnifications.back();
    const size_t i0 = static_cast<size_t>(pos);
    const double frac = pos - static_cast<double>(i0);
    return magnifications[i0] * (1.0 - frac) + magnifications[i0 + 1] * frac;
}

Eigen::Vector2d warp_point(const RadialLut &lut, double u, double v) {
    const Eigen::Vector2d p(u, v);
    const Eigen::Vector2d delta = p - lut.center;
    const double r = delta.norm();
    const double m = lut.magnification_at(r);
    return lut.center + (1.0 + m) * delta;
}

namespace {

double sample_bilinear_or_zero(const ImageF &img, double u, double v) {
    if (u < 0.0 || v < 0.0 || u > img.width - 1 || v > img.height - 1)
        return 0.0;
    const int x0 = static_cast<int>(std::floor(u));
    const int y0 = static_cast<int>(std::floor(v));
    const double fx = u - x0;
    const double fy = v - y0;
    if (fx == 0.0 && fy == 0.0)
        return img.at(x0, y0);
    const int x1 = (fx == 0.0) ? x0 : x0 + 1;
    const int y1 = (fy == 0.0) ? y0 : y0 + 1;
    const double top = img.at(x0, y0) * (1.0 - fx) + img.at(x1, y0) * fx;
    const double bot = img.at(x0, y1) * (1.0 - fx) + img.at(x1, y1) * fx;
    return top * (1.0 - fy) + bot * fy;
}

} // namespace

ImageF warp_image(const ImageF &img, const RadialLut &lut) {
    lut.validate();
    const double sx = img.width / lut.ref_w;
    const double sy = img.height / lut.ref_h;
    if (std::abs(sx - sy) / sx > 1e-6)
        throw_error(ErrorCode::DimensionError,
                    "raster dimensions must be proportional to the LUT reference dimensions");
    RadialLut scaled = lut;
    scaled.center *= sx;
    scaled.ref_w = img.width;
    scaled.ref_h = img.height;

    ImageF out(img.width, img.height);
    for (int j = 0; j < img.height; ++j) {
        for (int i = 0; i < img.width; ++i) {
            const Eigen::Vector2d src = warp_point(scaled, i, j);
            out.set(i, j, static_cast<float>(sample_bilinear_or_zero(img, src.x(), src.y())));
        }
    }
    return out;
}

double detect_residual_distortion(const std::vector<std::vector<Eigen::Vector2d>> &groups) {
    if (groups.empty())
        throw_error(ErrorCode::InsufficientPoints, "need at least one point group");
    double worst = 0.0;
    for (const auto &group : groups) {
        if (group.size() < 3)
            throw_error(ErrorCode::InsufficientPoints, "line fit needs at least 3 points");
        Eigen::Vector2d mean = Eigen::Vector2d::Zero();
        for (const auto &p : group)
            mean += p;
        mean /= static_cast<double>(group.size());
        Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
        for (const auto &p : group) {
            const Eigen::Vector2d d = p - mean;
            cov += d * d.transpose();
        }
        // Smallest covariance eigenvalue is the sum of squared perpendicular
        // residuals about the TLS line.
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cov);
        const double sse = std::max(0.0, eig.eigenvalues()(0));
        worst = std::max(worst, std::sqrt(sse / static_cast<double>(group.size())));
    }
    return worst;
}

} // namespace depthaudit
