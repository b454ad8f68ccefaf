#include "depthaudit/correction.hpp"

#include <cmath>

namespace depthaudit {

ZoomFactors zoom_factors(const SessionPair &pair) {
    return {pair.av.ird_w / pair.ar.ird_w, pair.av.ird_h / pair.ar.ird_h};
}

DepthMap zoom_depth_map(const DepthMap &d, const Intrinsics &k, const ZoomFactors &z) {
    if (!(z.zx > 0.5 && z.zx < 2.0 && z.zy > 0.5 && z.zy < 2.0))
        throw_error(ErrorCode::DomainError, "zoom factors outside sanity bounds (0.5, 2)");
    DepthMap out;
    for (int j = 0; j < d.height(); ++j) {
        for (int i = 0; i < d.width(); ++i) {
            const double u = k.cx + (i - k.cx) / z.zx;
            const double v = k.cy + (j - k.cy) / z.zy;
            if (u < 0.0 || v < 0.0 || u > d.width() - 1 || v > d.height() - 1)
                continue; // stays invalid
            if (u == static_cast<double>(i) && v == static_cast<double>(j)) {
                out.set(i, j, d.at(i, j)); // identity zoom stays bit-exact
                continue;
            }
            out.set(i, j, static_cast<float>(sample_bilinear(d, u, v)));
        }
    }
    return out;
}

FocalCorrection correct_focal_av(double f_unscaled_av, double f_unscaled_ar, double ird_av_w) {
    if (!(f_unscaled_av > 0.0) || !(f_unscaled_ar > 0.0) || !(ird_av_w > 0.0))
        throw_error(ErrorCode::DomainError, "focal correction inputs must be positive");
    FocalCorrection c;
    c.f_corrected = f_unscaled_av * f_unscaled_av / f_unscaled_ar;
    c.f_vga = c.f_corrected * 640.0 / ird_av_w;
    return c;
}

FocalCorrection correct_focal_ar(double f_unscaled_ar, double f_unscaled_av, double ird_ar_w) {
    if (!(f_unscaled_ar > 0.0) || !(f_unscaled_av > 0.0) || !(ird_ar_w > 0.0))
        throw_error(ErrorCode::DomainError, "focal correction inputs must be positive");
    FocalCorrection c;
    c.f_corrected = f_unscaled_ar * (1.0 + 2.0 * (1.0 - f_unscaled_ar / f_unscaled_av));
    if (!(c.f_corrected > 0.0))
        throw_error(ErrorCode::DomainError, "corrected focal length is non-positive");
    c.f_vga = c.f_corrected * 640.0 / ird_ar_w;
    return c;
}

std::pair<DepthMap, Intrinsics> normalize_arkit_frame(const DepthMap &d, const Intrinsics &k) {
    DepthMap out;
    for (int j = 0; j < d.height(); ++j)
        for (int i = 0; i < d.width(); ++i)
            out.set(d.width() - 1 - i, j, d.at(i, j));
    Intrinsics flipped = k;
    flipped.cx = (d.width() - 1) - k.cx;
    return {out, flipped};
}

} // namespace depthaudit
