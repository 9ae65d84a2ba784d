#include "vascalc/report_io.hpp"

#include <sstream>

#include "vascalc/text_io.hpp"

namespace vascalc {

namespace {

void append_list(std::ostringstream& out, const char* key,
                 const std::vector<std::uint64_t>& values) {
    out << key << "=[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out << ',';
        out << values[i];
    }
    out << "]\n";
}

void append_list(std::ostringstream& out, const char* key, const std::vector<double>& values) {
    out << key << "=[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out << ',';
        out << format_double_exact(values[i]);
    }
    out << "]\n";
}

}  // namespace

std::string format_score_report(const CalcificationReport& report,
                                const ScoreReportContext& ctx) {
    std::ostringstream out;
    out << "report=calcification_score\n";
    out << "threshold_used=" << report.threshold_used << "\n";
    out << "threshold_comparison=strictly_greater\n";
    out << "window_level=" << format_double_exact(report.window_level) << "\n";
    out << "window_width=" << format_double_exact(report.window_width) << "\n";
    out << "window_mode=" << ctx.window_mode << "\n";
    out << "mask_source=" << ctx.mask_source << "\n";
    out << "slice_range=[" << report.slice_range.start_slice << ','
        << report.slice_range.end_slice << "]\n";
    out << "voxel_volume_mm3=" << format_double_exact(report.voxel_volume_mm3) << "\n";
    if (report.min_area_filter_mm2)
        out << "min_area_filter_mm2=" << format_double_exact(*report.min_area_filter_mm2) << "\n";
    else
        out << "min_area_filter_mm2=none\n";
    out << "component_connectivity_2d=" << ctx.component_connectivity_2d << "\n";
    out << "total_count=" << report.total_count << "\n";
    out << "total_volume_mm3=" << format_double_exact(report.total_volume_mm3) << "\n";
    append_list(out, "per_slice_counts", report.per_slice_counts);
    append_list(out, "per_slice_volumes_mm3", report.per_slice_volumes_mm3);
    return out.str();
}

std::string format_slice_csv(const CalcificationReport& report) {
    std::ostringstream out;
    out << "slice_index,count,volume_mm3\n";
    for (std::size_t i = 0; i < report.per_slice_counts.size(); ++i) {
        out << (report.slice_range.start_slice + static_cast<int>(i)) << ','
            << report.per_slice_counts[i] << ','
            << format_double_exact(report.per_slice_volumes_mm3[i]) << "\n";
    }
    return out.str();
}

}  // namespace vascalc
