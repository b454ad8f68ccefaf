#pragma once

#include <optional>
#include <string>
#include <vector>

#include "depthaudit/camera.hpp"
#include "depthaudit/distortion.hpp"

namespace depthaudit {

enum class Api { AV, ARKit };

const char *api_name(Api api);

// One API session's factory metadata record.
struct CaptureMeta {
    std::string device;
    Api api = Api::AV;
    std::string os_version;
    Eigen::Vector2d lens_distortion_center = Eigen::Vector2d::Zero();
    double ird_w = 0.0; // intrinsic reference dimensions
    double ird_h = 0.0;
    Intrinsics depth_intrinsics_unscaled; // expressed at (ird_w, ird_h)
    Intrinsics color_intrinsics;          // expressed at its own ref dims
    std::optional<RadialLut> forward_lut;
    std::optional<RadialLut> inverse_lut;

    void validate() const;
};

// AV + ARKit records for the same physical device and OS.
struct SessionPair {
    CaptureMeta av;
    CaptureMeta ar;
    // Canonical key used for fixture lookups ("iPad 12.9'' 5gen iOS14", ...).
    // The per-record device strings keep the exact wording of the source.
    std::string key;
};

CaptureMeta parse_meta(const std::string &text);
std::string serialize_meta(const CaptureMeta &meta);

// Bundled device records transcribed from the AVSession / ARKitSession
// parameter tables, one SessionPair per table row (OS variants included).
// DEPTHAUDIT_FIXTURES may point at a JSON file of {"av":..,"ar":..} pairs to
// replace the bundled set.
const std::vector<SessionPair> &fixture_database();

// Substring match on the pair key (and optional OS-version filter). Returns
// nullptr when nothing matches.
const SessionPair *find_fixture(const std::string &device_query, const std::string &os_query = "");

// Same lookup, resolved to the record of one API session.
const CaptureMeta *lookup_meta(const std::string &device_query, Api api,
                               const std::string &os_query = "");

struct MetaRatios {
    double depth_ratio = 0.0; // f_ar / f_av (unscaled depth focal lengths)
    double ird_ratio_w = 0.0; // IRD_ar / IRD_av
    double ird_ratio_h = 0.0;
};

MetaRatios meta_ratios(const SessionPair &pair);

// Table convention for difference columns: 100 * (ratio - 1), ARKit on top.
inline double ratio_to_percent(double ratio) { return 100.0 * (ratio - 1.0); }

} // namespace depthaudit
