#include "depthaudit/audit.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

namespace depthaudit {

using json = nlohmann::ordered_json;

const char *issue_class_name(IssueClass cls) {
    switch (cls) {
    case IssueClass::Healthy:
        return "Healthy";
    case IssueClass::ZoomMisalignment:
        return "ZoomMisalignment";
    case IssueClass::WrongFocal:
        return "WrongFocal";
    }
    return "?";
}

AuditVerdict classify(const SessionPair &pair, const AuditThresholds &thresholds) {
    const MetaRatios ratios = meta_ratios(pair);
    AuditVerdict v;
    v.device = pair.key.empty() ? pair.av.device : pair.key;
    v.depth_intrinsics_diff_pct = std::abs(ratio_to_percent(ratios.depth_ratio));
    v.ird_diff_pct = std::abs(ratio_to_percent(ratios.ird_ratio_w));

    const bool focal_bad = v.depth_intrinsics_diff_pct >= thresholds.depth_pct;
    const bool ird_bad = v.ird_diff_pct >= thresholds.ird_pct;

    if (focal_bad) {
        // Wrong focal length corrupts every metric use downstream, so it wins
        // over a simultaneous IRD anomaly.
        v.cls = IssueClass::WrongFocal;
        v.recommended_focal_av_vga =
            correct_focal_av(pair.av.depth_intrinsics_unscaled.f,
                             pair.ar.depth_intrinsics_unscaled.f, pair.av.ird_w)
                .f_vga;
        v.recommended_focal_ar_vga =
            correct_focal_ar(pair.ar.depth_intrinsics_unscaled.f,
                             pair.av.depth_intrinsics_unscaled.f, pair.ar.ird_w)
                .f_vga;
        if (ird_bad)
            v.notes.push_back("IRD mismatch also present; WrongFocal takes precedence");
    } else if (ird_bad) {
        v.cls = IssueClass::ZoomMisalignment;
        v.recommended_zoom = zoom_factors(pair);
    }
    return v;
}

namespace {

json verdict_to_json(const AuditVerdict &v) {
    json doc;
    doc["device"] = v.device;
    doc["class"] = issue_class_name(v.cls);
    doc["depth_intrinsics_diff_pct"] = v.depth_intrinsics_diff_pct;
    doc["ird_diff_pct"] = v.ird_diff_pct;
    if (v.recommended_zoom)
        doc["recommended_zoom"] = {v.recommended_zoom->zx, v.recommended_zoom->zy};
    if (v.recommended_focal_av_vga)
        doc["recommended_focal_av_vga"] = *v.recommended_focal_av_vga;
    if (v.recommended_focal_ar_vga)
        doc["recommended_focal_ar_vga"] = *v.recommended_focal_ar_vga;
    if (!v.notes.empty())
        doc["notes"] = v.notes;
    return doc;
}

} // namespace

std::string audit_report_json(const std::vector<AuditVerdict> &verdicts) {
    if (verdicts.empty())
        throw_error(ErrorCode::EmptyReport, "no verdicts to report");
    json doc;
    doc["schema_version"] = 1;
    int healthy = 0, zoom = 0, focal = 0;
    json entries = json::array();
    for (const auto &v : verdicts) {
        entries.push_back(verdict_to_json(v));
        switch (v.cls) {
        case IssueClass::Healthy:
            ++healthy;
            break;
        case IssueClass::ZoomMisalignment:
            ++zoom;
            break;
        case IssueClass::WrongFocal:
            ++focal;
            break;
        }
    }
    doc["counts"] = {{"healthy", healthy}, {"zoom_misalignment", zoom}, {"wrong_focal", focal}};
    doc["verdicts"] = entries;
    return doc.dump(2) + "\n";
}

std::string audit_report_text(const std::vector<AuditVerdict> &verdicts) {
    if (verdicts.empty())
        throw_error(ErrorCode::EmptyReport, "no verdicts to report");
    std::ostringstream out;
    for (const auto &v : verdicts) {
        out << v.device << ": " << issue_class_name(v.cls) << " (depth diff "
            << v.depth_intrinsics_diff_pct << "%, IRD diff " << v.ird_diff_pct << "%)";
        if (v.recommended_zoom)
            out << ", recommended zoom (" << v.recommended_zoom->zx << ", "
                << v.recommended_zoom->zy << ")";
        if (v.recommended_focal_av_vga)
            out << ", corrected AV focal (VGA) " << *v.recommended_focal_av_vga << " px";
        if (v.recommended_focal_ar_vga)
            out << ", corrected ARKit focal (VGA) " << *v.recommended_focal_ar_vga << " px";
        out << "\n";
    }
    return out.str();
}

} // namespace depthaudit
