#include <doctest.h>

#include <json.hpp>

#include "depthaudit/io.hpp"
#include "depthaudit/metadata.hpp"

using namespace depthaudit;

TEST_CASE("literal metadata file parses to the expected record") {
    const std::string text =
        read_text_file(std::string(DEPTHAUDIT_DATA_DIR) + "/fixtures/ipad129_5gen_av_ios14.json");
    const CaptureMeta meta = parse_meta(text);
    CHECK(meta.device == "iPad 12.9'' 5gen");
    CHECK(meta.api == Api::AV);
    CHECK(meta.os_version == "iOS14");
    CHECK(meta.ird_w == 2016.0);
    CHECK(meta.ird_h == 1512.0);
    CHECK(meta.depth_intrinsics_unscaled.f == 1781.78);
    CHECK(meta.depth_intrinsics_unscaled.cx == 1009.89);
    CHECK(meta.color_intrinsics.f == 565.64);
    CHECK(meta.color_intrinsics.ref_w == 640.0);
    CHECK(!meta.forward_lut.has_value());
}

TEST_CASE("serialize then parse is the identity on every fixture record") {
    for (const auto &pair : fixture_database()) {
        for (const CaptureMeta *m : {&pair.av, &pair.ar}) {
            const CaptureMeta back = parse_meta(serialize_meta(*m));
            CHECK(back.device == m->device);
            CHECK(back.api == m->api);
            CHECK(back.os_version == m->os_version);
            CHECK(back.ird_w == m->ird_w);
            CHECK(back.ird_h == m->ird_h);
            CHECK(back.depth_intrinsics_unscaled.f == m->depth_intrinsics_unscaled.f);
            CHECK(back.depth_intrinsics_unscaled.cx == m->depth_intrinsics_unscaled.cx);
            CHECK(back.depth_intrinsics_unscaled.cy == m->depth_intrinsics_unscaled.cy);
            CHECK(back.color_intrinsics.f == m->color_intrinsics.f);
            CHECK(back.lens_distortion_center == m->lens_distortion_center);
        }
    }
}

TEST_CASE("parse_meta reports the offending field") {
    const std::string base = R"({
      "device": "d", "api": "av", "os_version": "iOS15",
      "lens_distortion_center": [1.0, 2.0],
      "intrinsic_reference_dimensions": [2016, 1512],
      "depth_intrinsics_unscaled": {"fx": 1800.0, "fy": 1800.0, "cx": 1000.0, "cy": 750.0},
      "color_intrinsics": {"fx": 500.0, "fy": 500.0, "cx": 320.0, "cy": 240.0,
                           "ref_w": 640, "ref_h": 480}
    })";
    CHECK_NOTHROW(parse_meta(base));

    const auto expect_code = [](const std::string &text, ErrorCode code,
                                const std::string &needle) {
        try {
            parse_meta(text);
            FAIL_CHECK("expected a parse failure mentioning " << needle);
        } catch (const AuditError &e) {
            CHECK(e.code() == code);
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };

    nlohmann::json doc = nlohmann::json::parse(base);
    doc.erase("os_version");
    expect_code(doc.dump(), ErrorCode::MissingField, "os_version");

    doc = nlohmann::json::parse(base);
    doc["device"] = 7;
    expect_code(doc.dump(), ErrorCode::BadType, "device");

    doc = nlohmann::json::parse(base);
    doc["api"] = "metal";
    expect_code(doc.dump(), ErrorCode::BadType, "api");

    doc = nlohmann::json::parse(base);
    doc["depth_intrinsics_unscaled"].erase("cy");
    expect_code(doc.dump(), ErrorCode::MissingField, "cy");

    doc = nlohmann::json::parse(base);
    doc["depth_intrinsics_unscaled"]["fy"] = 1700.0; // aspect must stay 1
    expect_code(doc.dump(), ErrorCode::InvariantViolation, "depth_intrinsics_unscaled");

    doc = nlohmann::json::parse(base);
    doc["lens_distortion_center"] = {1.0};
    expect_code(doc.dump(), ErrorCode::BadType, "lens_distortion_center");

    CHECK_THROWS_AS(parse_meta("not json"), AuditError);
    CHECK_THROWS_AS(parse_meta("[]"), AuditError);
}

TEST_CASE("fixture lookup by substring and os filter") {
    REQUIRE(fixture_database().size() == 10);
    const SessionPair *p = find_fixture("12.9'' 5gen", "iOS14");
    REQUIRE(p != nullptr);
    CHECK(p->av.depth_intrinsics_unscaled.f == 1781.78);
    CHECK(p->ar.depth_intrinsics_unscaled.f == 1916.17);
    const SessionPair *p15 = find_fixture("12.9'' 5gen", "iOS15");
    REQUIRE(p15 != nullptr);
    CHECK(p15->av.depth_intrinsics_unscaled.f == 1780.13);
    CHECK(find_fixture("Pixel 6") == nullptr);

    const CaptureMeta *ar = lookup_meta("iPhone 11", Api::ARKit, "iOS14");
    REQUIRE(ar != nullptr);
    CHECK(ar->ird_w == 4032.0);
    CHECK(ar->color_intrinsics.ref_w == 1440.0);
}

TEST_CASE("meta_ratios reproduces the table difference columns") {
    const auto pct = [](const char *device, const char *os) {
        const SessionPair *p = find_fixture(device, os);
        REQUIRE(p != nullptr);
        const MetaRatios r = meta_ratios(*p);
        return std::pair<double, double>(ratio_to_percent(r.depth_ratio),
                                         ratio_to_percent(r.ird_ratio_w));
    };

    // UWA generations: ~7.5% focal gap and the 2880/2016 reference blowup.
    auto [d5, i5] = pct("12.9'' 5gen", "iOS14");
    CHECK(d5 == doctest::Approx(7.5424).epsilon(1e-4));
    CHECK(i5 == doctest::Approx(100.0 * (2880.0 / 2016.0 - 1.0)).epsilon(1e-12));

    // 2gen/4gen: matching focals, 5.18% reference gap.
    auto [d2, i2] = pct("11'' 2gen V1", "");
    CHECK(d2 == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    CHECK(i2 == doctest::Approx(100.0 * (3248.0 / 3088.0 - 1.0)).epsilon(1e-12));
    CHECK(i2 == doctest::Approx(5.1813).epsilon(1e-4));

    auto [d4, i4] = pct("12.9'' 4gen V2", "");
    CHECK(std::abs(d4) < 0.001); // 2872.51 vs 2872.52
    CHECK(i4 == doctest::Approx(5.1813).epsilon(1e-4));

    // iPhones: identical sessions.
    auto [dp, ip] = pct("iPhone 11", "iOS15");
    CHECK(dp == 0.0);
    CHECK(ip == 0.0);
}

TEST_CASE("meta_ratios rejects degenerate denominators") {
    SessionPair pair = *find_fixture("iPhone 11", "iOS14");
    pair.av.ird_w = 0.0;
    CHECK_THROWS_AS(meta_ratios(pair), AuditError);
}
