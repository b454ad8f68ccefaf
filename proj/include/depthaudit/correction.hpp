#pragma once

#include "depthaudit/camera.hpp"
#include "depthaudit/metadata.hpp"

namespace depthaudit {

struct ZoomFactors {
    double zx = 1.0;
    double zy = 1.0;
};

// zx = IRD_av_w / IRD_ar_w, zy likewise for the height.
ZoomFactors zoom_factors(const SessionPair &pair);

// Re-maps the depth raster about the principal point: the output pixel q takes
// the input bilinearly sampled at cpp + (q - cpp) / z. Depth values are moved,
// never rescaled. Samples falling outside the source become invalid.
DepthMap zoom_depth_map(const DepthMap &d, const Intrinsics &k, const ZoomFactors &z);

struct FocalCorrection {
    double f_corrected = 0.0; // at the session's reference dimensions
    double f_vga = 0.0;       // scaled by 640 / IRD_w
};

// f_corrected = f_av^2 / f_ar, then scaled to VGA.
FocalCorrection correct_focal_av(double f_unscaled_av, double f_unscaled_ar, double ird_av_w);

// ARKit-session correction: the error doubles, f_corrected =
// f_ar * (1 + 2 * (1 - f_ar / f_av)), then scaled to VGA. The 2x factor is
// empirical; it is applied exactly as stated.
FocalCorrection correct_focal_ar(double f_unscaled_ar, double f_unscaled_av, double ird_ar_w);

// ARKit rasters are mirrored around the up-axis. Flips every row and moves the
// principal point to (width - 1) - cx; applying it twice is the identity.
std::pair<DepthMap, Intrinsics> normalize_arkit_frame(const DepthMap &d, const Intrinsics &k);

} // namespace depthaudit
