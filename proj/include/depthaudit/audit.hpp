#pragma once

#include <optional>
#include <string>
#include <vector>

#include "depthaudit/correction.hpp"
#include "depthaudit/metadata.hpp"

namespace depthaudit {

enum class IssueClass { Healthy, ZoomMisalignment, WrongFocal };

const char *issue_class_name(IssueClass cls);

struct AuditVerdict {
    std::string device;
    IssueClass cls = IssueClass::Healthy;
    double depth_intrinsics_diff_pct = 0.0; // |100 * (f_ar / f_av - 1)|
    double ird_diff_pct = 0.0;              // |100 * (IRD_ar_w / IRD_av_w - 1)|
    std::optional<ZoomFactors> recommended_zoom;
    std::optional<double> recommended_focal_av_vga;
    std::optional<double> recommended_focal_ar_vga;
    std::vector<std::string> notes;
};

struct AuditThresholds {
    // Percent thresholds separating the observed clusters (0%, ~5.2%, ~7.5%).
    double depth_pct = 1.0;
    double ird_pct = 1.0;
};

// Decision rule: depth difference >= threshold -> WrongFocal (takes precedence
// over a simultaneous IRD anomaly); otherwise IRD difference >= threshold ->
// ZoomMisalignment; otherwise Healthy.
AuditVerdict classify(const SessionPair &pair, const AuditThresholds &thresholds = {});

std::string audit_report_json(const std::vector<AuditVerdict> &verdicts);
std::string audit_report_text(const std::vector<AuditVerdict> &verdicts);

} // namespace depthaudit
