#include <doctest.h>

#include <json.hpp>

#include "depthaudit/audit.hpp"

using namespace depthaudit;

TEST_CASE("classification sweep over the bundled fixtures") {
    for (const auto &pair : fixture_database()) {
        const AuditVerdict v = classify(pair);
        INFO("device ", pair.key);
        if (pair.key.find("iPhone") != std::string::npos) {
            CHECK(v.cls == IssueClass::Healthy);
        } else if (pair.key.find("2gen") != std::string::npos ||
                   pair.key.find("4gen") != std::string::npos) {
            CHECK(v.cls == IssueClass::ZoomMisalignment);
            REQUIRE(v.recommended_zoom.has_value());
            CHECK(v.recommended_zoom->zx == doctest::Approx(3088.0 / 3248.0).epsilon(1e-12));
        } else {
            CHECK(v.cls == IssueClass::WrongFocal); // 3gen / 5gen UWA devices
            CHECK(v.recommended_focal_av_vga.has_value());
            CHECK(v.recommended_focal_ar_vga.has_value());
        }
    }
}

TEST_CASE("wrong focal takes precedence when both anomalies fire") {
    SessionPair pair = *find_fixture("12.9'' 5gen", "iOS14");
    // The UWA pair already differs in both focal (7.5%) and IRD (42.9%).
    const AuditVerdict v = classify(pair);
    CHECK(v.cls == IssueClass::WrongFocal);
    CHECK(v.ird_diff_pct > 40.0);
    bool noted = false;
    for (const auto &note : v.notes)
        noted = noted || note.find("zoom") != std::string::npos ||
                note.find("IRD") != std::string::npos;
    CHECK(noted); // the simultaneous IRD anomaly is mentioned
}

TEST_CASE("thresholds are adjustable") {
    const SessionPair &pair = *find_fixture("11'' 2gen V1");
    AuditThresholds loose;
    loose.ird_pct = 10.0; // 5.18% gap now counts as healthy
    CHECK(classify(pair, loose).cls == IssueClass::Healthy);
    AuditThresholds strict;
    strict.depth_pct = 1e-9;
    strict.ird_pct = 1e-9;
    CHECK(classify(*find_fixture("12.9'' 4gen V2"), strict).cls == IssueClass::WrongFocal);
}

TEST_CASE("audit report json carries counts and verdicts in input order") {
    std::vector<AuditVerdict> verdicts;
    for (const auto &pair : fixture_database())
        verdicts.push_back(classify(pair));
    const auto doc = nlohmann::json::parse(audit_report_json(verdicts));
    CHECK(doc.at("schema_version") == 1);
    CHECK(doc.at("verdicts").size() == 10);
    CHECK(doc.at("counts").at("healthy") == 2);
    CHECK(doc.at("counts").at("zoom_misalignment") == 4);
    CHECK(doc.at("counts").at("wrong_focal") == 4);
    CHECK(doc.at("verdicts")[0].at("device").get<std::string>().find("3gen") !=
          std::string::npos);

    const std::string text = audit_report_text(verdicts);
    CHECK(text.find("WrongFocal") != std::string::npos);
    CHECK(text.find("ZoomMisalignment") != std::string::npos);
    CHECK(text.find("Healthy") != std::string::npos);
}

TEST_CASE("empty report is rejected") {
    CHECK_THROWS_AS(audit_report_json({}), AuditError);
    CHECK_THROWS_AS(audit_report_text({}), AuditError);
}
