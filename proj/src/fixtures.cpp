#include "depthaudit/metadata.hpp"

namespace depthaudit {

namespace {

struct Record {
    const char *device;
    double ldc_x, ldc_y;
    double ird_w, ird_h;
    double depth_fx, depth_cx, depth_cy;
    double color_fx, color_cx, color_cy;
    double color_ref_w, color_ref_h;
};

CaptureMeta make_meta(const Record &r, Api api, const char *os) {
    CaptureMeta m;
    m.device = r.device;
    m.api = api;
    m.os_version = os;
    m.lens_distortion_center = {r.ldc_x, r.ldc_y};
    m.ird_w = r.ird_w;
    m.ird_h = r.ird_h;
    m.depth_intrinsics_unscaled = Intrinsics(r.depth_fx, r.depth_cx, r.depth_cy, r.ird_w, r.ird_h);
    m.color_intrinsics = Intrinsics(r.color_fx, r.color_cx, r.color_cy, r.color_ref_w, r.color_ref_h);
    m.validate();
    return m;
}

SessionPair make_pair(const char *key, const char *os, const Record &av, const Record &ar) {
    SessionPair p;
    p.av = make_meta(av, Api::AV, os);
    p.ar = make_meta(ar, Api::ARKit, os);
    p.key = key;
    return p;
}

} // namespace

// Factory metadata for every tested device / OS combination, AVSession and
// ARKitSession side by side. The UWA-camera generations (11'' 3gen,
// 12.9'' 5gen) report different reference dimensions and focal lengths per
// API; on the other generations only the reference dimensions differ, or
// nothing at all (iPhones). AVSession color intrinsics are expressed at VGA,
// ARKitSession color intrinsics at 1440x1080.
std::vector<SessionPair> builtin_fixture_pairs() {
    std::vector<SessionPair> pairs;

    pairs.push_back(make_pair(
        "iPad 11'' 3gen V1", "iOS15",
        {"iPad 11'' 3gen V1", 1011.80, 754.60, 2016, 1512, 1791.13, 1012.10, 754.53,
         568.61, 321.23, 239.47, 640, 480},
        {"iPad 11'' Pro 3gen V1", 1428.30, 1080.89, 2880, 2160, 1925.71, 1426.63, 1080.95,
         962.86, 713.06, 539.72, 1440, 1080}));

    pairs.push_back(make_pair(
        "iPad 11'' 3gen V2", "iOS15",
        {"iPad 11'' 3gen V2", 1013.80, 757.30, 2016, 1512, 1784.44, 1014.24, 757.43,
         566.49, 321.91, 240.39, 640, 480},
        {"iPad 11'' Pro 3gen V2", 1428.80, 1078.69, 2880, 2160, 1917.50, 1427.21, 1078.42,
         958.75, 713.35, 538.46, 1440, 1080}));

    pairs.push_back(make_pair(
        "iPad 12.9'' 5gen iOS14", "iOS14",
        {"iPad 12.9'' 5gen", 1009.73, 759.42, 2016, 1512, 1781.78, 1009.89, 759.69,
         565.64, 320.53, 242.10, 640, 480},
        {"iPad 12.9'' Pro 5gen", 1426.73, 1077.07, 2880, 2160, 1916.17, 1424.82, 1076.56,
         958.08, 712.16, 537.53, 1440, 1080}));

    pairs.push_back(make_pair(
        "iPad 12.9'' 5gen iOS15", "iOS15",
        {"iPad 12.9'' 5gen", 1009.73, 759.42, 2016, 1512, 1780.13, 1009.89, 759.69,
         565.12, 320.53, 242.10, 640, 480},
        {"iPad 12.9'' Pro 5gen", 1426.73, 1077.07, 2880, 2160, 1914.39, 1424.82, 1076.56,
         957.19, 712.16, 537.53, 1440, 1080}));

    pairs.push_back(make_pair(
        "iPad 11'' 2gen V1", "iOS14",
        {"iPad 11'' 2gen V1", 1543.98, 1147.17, 3088, 2316, 2878.39, 1543.98, 1147.17,
         596.55, 319.60, 237.36, 640, 480},
        {"iPad 11'' 2gen V1", 1624.48, 1226.32, 3248, 2436, 2878.39, 1624.48, 1226.32,
         1276.13, 719.93, 542.96, 1440, 1080}));

    pairs.push_back(make_pair(
        "iPad 11'' 2gen V2", "iOS14",
        {"iPad 11'' 2gen V2", 1541.02, 1155.53, 3088, 2316, 2882.66, 1541.02, 1155.53,
         597.44, 318.98, 239.09, 640, 480},
        {"iPad 11'' 2gen V2", 1621.52, 1217.96, 3248, 2436, 2882.66, 1621.52, 1217.96,
         1278.02, 718.62, 539.26, 1440, 1080}));

    pairs.push_back(make_pair(
        "iPad 12.9'' 4gen V1", "iOS15",
        {"iPad 12.9'' 4gen V1", 1538.43, 1151.34, 3088, 2316, 2885.64, 1538.43, 1151.34,
         598.06, 318.45, 238.22, 640, 480},
        {"iPad 12.9'' 4gen V1", 1618.93, 1222.15, 3248, 2436, 2885.64, 1618.93, 1222.15,
         1279.35, 717.47, 541.12, 1440, 1080}));

    pairs.push_back(make_pair(
        "iPad 12.9'' 4gen V2", "iOS15",
        {"iPad 12.9'' 4gen V2", 1535.93, 1157.79, 3088, 2316, 2872.52, 1535.93, 1157.79,
         595.33, 317.93, 239.56, 640, 480},
        {"iPad 12.9'' 4gen V2", 1616.43, 1215.70, 3248, 2436, 2872.51, 1616.43, 1215.70,
         1273.52, 716.36, 538.26, 1440, 1080}));

    pairs.push_back(make_pair(
        "iPhone 11 Pro iOS14", "iOS14",
        {"iPhone 11 Pro", 2026.13, 1508.71, 4032, 3024, 2751.18, 2026.13, 1508.71,
         437.29, 321.18, 239.05, 640, 480},
        {"iPhone 11 Pro", 2026.63, 1514.78, 4032, 3024, 2751.18, 2026.63, 1514.78,
         982.56, 723.47, 540.31, 1440, 1080}));

    pairs.push_back(make_pair(
        "iPhone 11 Pro iOS15", "iOS15",
        {"iPhone 11 Pro", 2026.13, 1508.71, 4032, 3024, 2750.68, 2026.13, 1508.71,
         436.61, 321.18, 239.05, 640, 480},
        {"iPhone 11 Pro", 2026.63, 1514.78, 4032, 3024, 2750.68, 2026.63, 1514.78,
         982.38, 723.47, 540.31, 1440, 1080}));

    return pairs;
}

} // namespace depthaudit
