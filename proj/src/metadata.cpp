#include "depthaudit/metadata.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace depthaudit {

using json = nlohmann::ordered_json;

const char *api_name(Api api) { return api == Api::AV ? "av" : "arkit"; }

void CaptureMeta::validate() const {
    if (device.empty())
        throw_error(ErrorCode::InvariantViolation, "device: must not be empty");
    if (!(ird_w > 0.0) || !(ird_h > 0.0))
        throw_error(ErrorCode::InvariantViolation,
                    "intrinsic_reference_dimensions: must be positive");
    depth_intrinsics_unscaled.validate();
    color_intrinsics.validate();
    if (depth_intrinsics_unscaled.aspect != 1.0)
        throw_error(ErrorCode::InvariantViolation, "depth_intrinsics_unscaled: aspect must be 1");
    if (depth_intrinsics_unscaled.skew != 0.0)
        throw_error(ErrorCode::InvariantViolation, "depth_intrinsics_unscaled: skew must be 0");
    if (std::abs(depth_intrinsics_unscaled.ref_w - ird_w) > 1e-9 ||
        std::abs(depth_intrinsics_unscaled.ref_h - ird_h) > 1e-9)
        throw_error(ErrorCode::InvariantViolation,
                    "depth_intrinsics_unscaled: reference dimensions must equal "
                    "intrinsic_reference_dimensions");
}

namespace {

const json &require_field(const json &doc, const std::string &key) {
    auto it = doc.find(key);
    if (it == doc.end())
        throw_error(ErrorCode::MissingField, key);
    return *it;
}

double require_number(const json &doc, const std::string &key) {
    const json &v = require_field(doc, key);
    if (!v.is_number())
        throw_error(ErrorCode::BadType, key + ": expected a number");
    return v.get<double>();
}

Eigen::Vector2d require_vec2(const json &doc, const std::string &key) {
    const json &v = require_field(doc, key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw_error(ErrorCode::BadType, key + ": expected [x, y]");
    return {v[0].get<double>(), v[1].get<double>()};
}

RadialLut parse_lut(const json &arr, const std::string &key, const CaptureMeta &meta) {
    if (!arr.is_array())
        throw_error(ErrorCode::BadType, key + ": expected an array of numbers");
    RadialLut lut;
    for (const auto &v : arr) {
        if (!v.is_number())
            throw_error(ErrorCode::BadType, key + ": expected an array of numbers");
        lut.magnifications.push_back(v.get<double>());
    }
    lut.center = meta.lens_distortion_center;
    lut.ref_w = meta.ird_w;
    lut.ref_h = meta.ird_h;
    lut.validate();
    return lut;
}

} // namespace

CaptureMeta parse_meta(const std::string &text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded())
        throw_error(ErrorCode::BadType, "document is not valid JSON");
    if (!doc.is_object())
        throw_error(ErrorCode::BadType, "document root must be an object");

    CaptureMeta meta;
    const json &device = require_field(doc, "device");
    if (!device.is_string())
        throw_error(ErrorCode::BadType, "device: expected a string");
    meta.device = device.get<std::string>();

    const json &api = require_field(doc, "api");
    if (!api.is_string())
        throw_error(ErrorCode::BadType, "api: expected a string");
    const std::string api_str = api.get<std::string>();
    if (api_str == "av")
        meta.api = Api::AV;
    else if (api_str == "arkit")
        meta.api = Api::ARKit;
    else
        throw_error(ErrorCode::BadType, "api: expected \"av\" or \"arkit\"");

    const json &os = require_field(doc, "os_version");
    if (!os.is_string())
        throw_error(ErrorCode::BadType, "os_version: expected a string");
    meta.os_version = os.get<std::string>();

    meta.lens_distortion_center = require_vec2(doc, "lens_distortion_center");
    const Eigen::Vector2d ird = require_vec2(doc, "intrinsic_reference_dimensions");
    meta.ird_w = ird.x();
    meta.ird_h = ird.y();

    const json &depth = require_field(doc, "depth_intrinsics_unscaled");
    if (!depth.is_object())
        throw_error(ErrorCode::BadType, "depth_intrinsics_unscaled: expected an object");
    const double dfx = require_number(depth, "fx");
    const double dfy = require_number(depth, "fy");
    if (std::abs(dfy / dfx - 1.0) > 1e-9)
        throw_error(ErrorCode::InvariantViolation,
                    "depth_intrinsics_unscaled: fx and fy must agree (aspect 1)");
    meta.depth_intrinsics_unscaled =
        Intrinsics(dfx, require_number(depth, "cx"), require_number(depth, "cy"), meta.ird_w,
                   meta.ird_h);

    const json &color = require_field(doc, "color_intrinsics");
    if (!color.is_object())
        throw_error(ErrorCode::BadType, "color_intrinsics: expected an object");
    meta.color_intrinsics = Intrinsics(
        require_number(color, "fx"), require_number(color, "cx"), require_number(color, "cy"),
        require_number(color, "ref_w"), require_number(color, "ref_h"),
        require_number(color, "fy") / require_number(color, "fx"));

    if (doc.contains("distortion_lut"))
        meta.forward_lut = parse_lut(doc["distortion_lut"], "distortion_lut", meta);
    if (doc.contains("inverse_distortion_lut"))
        meta.inverse_lut = parse_lut(doc["inverse_distortion_lut"], "inverse_distortion_lut", meta);

    meta.validate();
    return meta;
}

std::string serialize_meta(const CaptureMeta &meta) {
    json doc;
    doc["device"] = meta.device;
    doc["api"] = api_name(meta.api);
    doc["os_version"] = meta.os_version;
    doc["lens_distortion_center"] = {meta.lens_distortion_center.x(),
                                     meta.lens_distortion_center.y()};
    doc["intrinsic_reference_dimensions"] = {meta.ird_w, meta.ird_h};
    doc["depth_intrinsics_unscaled"] = {{"fx", meta.depth_intrinsics_unscaled.f},
                                        {"fy", meta.depth_intrinsics_unscaled.f *
                                                   meta.depth_intrinsics_unscaled.aspect},
                                        {"cx", meta.depth_intrinsics_unscaled.cx},
                                        {"cy", meta.depth_intrinsics_unscaled.cy}};
    doc["color_intrinsics"] = {{"fx", meta.color_intrinsics.f},
                               {"fy", meta.color_intrinsics.f * meta.color_intrinsics.aspect},
                               {"cx", meta.color_intrinsics.cx},
                               {"cy", meta.color_intrinsics.cy},
                               {"ref_w", meta.color_intrinsics.ref_w},
                               {"ref_h", meta.color_intrinsics.ref_h}};
    if (meta.forward_lut)
        doc["distortion_lut"] = meta.forward_lut->magnifications;
    if (meta.inverse_lut)
        doc["inverse_distortion_lut"] = meta.inverse_lut->magnifications;
    return doc.dump(2) + "\n";
}

namespace {

std::vector<SessionPair> load_fixture_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw_error(ErrorCode::IoError, "cannot open fixture file " + path);
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_array())
        throw_error(ErrorCode::BadType, "fixture file must hold a JSON array of pairs");
    std::vector<SessionPair> pairs;
    for (const auto &entry : doc) {
        SessionPair pair;
        pair.av = parse_meta(entry.at("av").dump());
        pair.ar = parse_meta(entry.at("ar").dump());
        pair.key = entry.value("key", pair.av.device + " " + pair.av.os_version);
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

} // namespace

std::vector<SessionPair> builtin_fixture_pairs(); // fixtures.cpp

const std::vector<SessionPair> &fixture_database() {
    static const std::vector<SessionPair> pairs = [] {
        if (const char *path = std::getenv("DEPTHAUDIT_FIXTURES"))
            return load_fixture_file(path);
        return builtin_fixture_pairs();
    }();
    return pairs;
}

const SessionPair *find_fixture(const std::string &device_query, const std::string &os_query) {
    for (const auto &pair : fixture_database()) {
        if (pair.key.find(device_query) == std::string::npos)
            continue;
        if (!os_query.empty() && pair.key.find(os_query) == std::string::npos &&
            pair.av.os_version.find(os_query) == std::string::npos)
            continue;
        return &pair;
    }
    return nullptr;
}

const CaptureMeta *lookup_meta(const std::string &device_query, Api api,
                               const std::string &os_query) {
    const SessionPair *pair = find_fixture(device_query, os_query);
    if (!pair)
        return nullptr;
    return api == Api::AV ? &pair->av : &pair->ar;
}

MetaRatios meta_ratios(const SessionPair &pair) {
    if (!(pair.av.depth_intrinsics_unscaled.f > 0.0) || !(pair.av.ird_w > 0.0) ||
        !(pair.av.ird_h > 0.0))
        throw_error(ErrorCode::InvariantViolation, "AV session metadata has zero denominators");
    MetaRatios r;
    r.depth_ratio = pair.ar.depth_intrinsics_unscaled.f / pair.av.depth_intrinsics_unscaled.f;
    r.ird_ratio_w = pair.ar.ird_w / pair.av.ird_w;
    r.ird_ratio_h = pair.ar.ird_h / pair.av.ird_h;
    return r;
}

} // namespace depthaudit
