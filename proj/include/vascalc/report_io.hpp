#pragma once

#include <string>

#include "vascalc/calcium.hpp"

namespace vascalc {

/// Provenance echoed into the score report beyond the report fields
/// themselves, so a report is comparable without knowing tool defaults.
struct ScoreReportContext {
    std::string window_mode = "explicit";  // "auto" or "explicit"
    std::string mask_source = "unspecified";
    int component_connectivity_2d = 8;
};

/// key=value lines, one per field, field names matching CalcificationReport.
std::string format_score_report(const CalcificationReport& report,
                                const ScoreReportContext& ctx);

/// Per-slice table with header `slice_index,count,volume_mm3`; slice
/// indices are absolute volume indices, not offsets into the range.
std::string format_slice_csv(const CalcificationReport& report);

}  // namespace vascalc
