#include "depthaudit/verification.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace depthaudit {

DepthErrorReport verify_depth(const DepthMap &d, const std::vector<Correspondence> &corrs,
                              const Intrinsics &k, double bin_width_mm, const std::string &label) {
    const PnpResult pnp = solve_pnp(corrs, k);

    DepthErrorReport report;
    report.intrinsics_label = label;
    for (const auto &c : corrs) {
        const double z_board = pnp.pose.apply(c.board_point).z();
        double z_depth;
        if (c.pixel.x() < 0.0 || c.pixel.y() < 0.0 || c.pixel.x() > d.width() - 1 ||
            c.pixel.y() > d.height() - 1) {
            ++report.invalid_corners;
            continue;
        }
        z_depth = sample_bilinear(d, c.pixel.x(), c.pixel.y());
        if (!std::isfinite(z_depth)) {
            ++report.invalid_corners;
            continue;
        }
        DepthErrorRecord rec;
        rec.id = c.id;
        rec.z_depth_mm = z_depth * 1000.0;
        rec.z_board_mm = z_board * 1000.0;
        rec.d_mm = rec.z_depth_mm - rec.z_board_mm;
        report.records.push_back(rec);
    }
    if (report.records.empty())
        throw_error(ErrorCode::NoValidSamples, "no corner had a valid depth sample");

    std::vector<double> ds;
    ds.reserve(report.records.size());
    double sum = 0.0;
    for (const auto &r : report.records) {
        ds.push_back(r.d_mm);
        sum += r.d_mm;
    }
    const double n = static_cast<double>(ds.size());
    report.mean_d_mm = sum / n;
    double var = 0.0;
    for (double v : ds)
        var += (v - report.mean_d_mm) * (v - report.mean_d_mm);
    report.std_d_mm = (ds.size() > 1) ? std::sqrt(var / (n - 1.0)) : 0.0;
    std::sort(ds.begin(), ds.end());
    report.median_d_mm = (ds.size() % 2 == 1)
                             ? ds[ds.size() / 2]
                             : 0.5 * (ds[ds.size() / 2 - 1] + ds[ds.size() / 2]);

    // Histogram over the observed range, bins aligned to multiples of the
    // bin width.
    const double lo = std::floor(ds.front() / bin_width_mm) * bin_width_mm;
    const double hi = ds.back();
    const int bins = std::max(1, static_cast<int>(std::floor((hi - lo) / bin_width_mm)) + 1);
    report.bin_counts.assign(bins, 0);
    for (int b = 0; b <= bins; ++b)
        report.bin_edges_mm.push_back(lo + b * bin_width_mm);
    for (double v : ds) {
        int b = static_cast<int>(std::floor((v - lo) / bin_width_mm));
        b = std::clamp(b, 0, bins - 1);
        ++report.bin_counts[b];
    }
    return report;
}

void overlay_ramp(int index, uint8_t rgb_out[3]) {
    index = std::clamp(index, 0, 255);
    if (index < 128) {
        rgb_out[0] = 0;
        rgb_out[1] = static_cast<uint8_t>(2 * index);
        rgb_out[2] = static_cast<uint8_t>(255 - 2 * index);
    } else {
        rgb_out[0] = static_cast<uint8_t>(2 * (index - 128));
        rgb_out[1] = static_cast<uint8_t>(std::max(0, 255 - 2 * (index - 128)));
        rgb_out[2] = 0;
    }
}

PpmImage render_overlay(const PpmImage &rgb, const DepthMap &d, const Intrinsics & /*k_color*/) {
    const double rgb_aspect = static_cast<double>(rgb.width) / rgb.height;
    const double depth_aspect = static_cast<double>(d.width()) / d.height();
    if (std::abs(rgb_aspect - depth_aspect) > 1e-9)
        throw_error(ErrorCode::DimensionError, "RGB frame must share the depth 4:3 aspect");

    // Normalization range of the inverse depth over the valid pixels.
    double inv_min = std::numeric_limits<double>::infinity();
    double inv_max = -std::numeric_limits<double>::infinity();
    for (float v : d.values()) {
        if (std::isfinite(v) && v > 0.0f) {
            inv_min = std::min(inv_min, 1.0 / v);
            inv_max = std::max(inv_max, 1.0 / v);
        }
    }

    PpmImage out = rgb;
    if (!std::isfinite(inv_min))
        return out; // all invalid: untouched RGB
    const double span = (inv_max > inv_min) ? inv_max - inv_min : 1.0;

    const double su = static_cast<double>(d.width() - 1) / (rgb.width - 1);
    const double sv = static_cast<double>(d.height() - 1) / (rgb.height - 1);
    for (int j = 0; j < rgb.height; ++j) {
        for (int i = 0; i < rgb.width; ++i) {
            const double depth = sample_bilinear(d, i * su, j * sv);
            if (!std::isfinite(depth) || depth <= 0.0)
                continue;
            const int index =
                static_cast<int>(std::lround(255.0 * ((1.0 / depth) - inv_min) / span));
            uint8_t tint[3];
            overlay_ramp(index, tint);
            uint8_t *px = out.pixel(i, j);
            for (int c = 0; c < 3; ++c)
                px[c] = static_cast<uint8_t>((px[c] + tint[c] + 1) / 2);
        }
    }
    return out;
}

namespace {

std::string format_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

} // namespace

HistogramDocs emit_histogram(const std::vector<DepthErrorReport> &reports) {
    if (reports.empty())
        throw_error(ErrorCode::NoValidSamples, "no reports to plot");
    for (const auto &r : reports)
        if (r.records.empty())
            throw_error(ErrorCode::NoValidSamples, "empty report");

    HistogramDocs docs;
    docs.csv = "label,bin_low,bin_high,count\n";
    for (const auto &r : reports)
        for (size_t b = 0; b < r.bin_counts.size(); ++b)
            docs.csv += r.intrinsics_label + "," + format_num(r.bin_edges_mm[b]) + "," +
                        format_num(r.bin_edges_mm[b + 1]) + "," + std::to_string(r.bin_counts[b]) +
                        "\n";

    // Shared axes over all series.
    double lo = reports[0].bin_edges_mm.front(), hi = reports[0].bin_edges_mm.back();
    int max_count = 1;
    for (const auto &r : reports) {
        lo = std::min(lo, r.bin_edges_mm.front());
        hi = std::max(hi, r.bin_edges_mm.back());
        for (int c : r.bin_counts)
            max_count = std::max(max_count, c);
    }

    const int width = 800, height = 600;
    const int ml = 70, mr = 20, mt = 40, mb = 60; // margins
    const double plot_w = width - ml - mr, plot_h = height - mt - mb;
    const char *series_colors[] = {"#3366cc", "#cc3333", "#33a033", "#cc8800"};

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
        << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << height - mb << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << ml + plot_w / 2 << "\" y=\"" << height - 15
        << "\" text-anchor=\"middle\" font-size=\"16\">d = Z_depth - Z_board [mm]</text>\n";
    svg << "<text x=\"20\" y=\"" << mt + plot_h / 2
        << "\" text-anchor=\"middle\" font-size=\"16\" transform=\"rotate(-90 20 "
        << mt + plot_h / 2 << ")\">count</text>\n";
    svg << "<text x=\"" << ml << "\" y=\"" << height - mb + 20 << "\" font-size=\"12\">"
        << format_num(lo) << "</text>\n";
    svg << "<text x=\"" << width - mr - 40 << "\" y=\"" << height - mb + 20
        << "\" font-size=\"12\">" << format_num(hi) << "</text>\n";
    svg << "<text x=\"" << ml - 10 << "\" y=\"" << mt + 5
        << "\" text-anchor=\"end\" font-size=\"12\">" << max_count << "</text>\n";

    for (size_t s = 0; s < reports.size(); ++s) {
        const auto &r = reports[s];
        const char *color = series_colors[s % 4];
        for (size_t b = 0; b < r.bin_counts.size(); ++b) {
            if (r.bin_counts[b] == 0)
                continue;
            const double x0 = ml + (r.bin_edges_mm[b] - lo) / (hi - lo) * plot_w;
            const double x1 = ml + (r.bin_edges_mm[b + 1] - lo) / (hi - lo) * plot_w;
            const double bar_h = plot_h * r.bin_counts[b] / max_count;
            svg << "<rect x=\"" << format_num(x0) << "\" y=\""
                << format_num(height - mb - bar_h) << "\" width=\"" << format_num(x1 - x0)
                << "\" height=\"" << format_num(bar_h) << "\" fill=\"" << color
                << "\" fill-opacity=\"0.6\"/>\n";
        }
        svg << "<rect x=\"" << width - mr - 160 << "\" y=\"" << mt + 20 * s
            << "\" width=\"12\" height=\"12\" fill=\"" << color << "\" fill-opacity=\"0.6\"/>\n";
        svg << "<text x=\"" << width - mr - 142 << "\" y=\"" << mt + 20 * s + 11
            << "\" font-size=\"13\">" << r.intrinsics_label << "</text>\n";
    }
    svg << "</svg>\n";
    docs.svg = svg.str();
    return docs;
}

HistogramDocs emit_histogram(const DepthErrorReport &report) {
    return emit_histogram(std::vector<DepthErrorReport>{report});
}

std::string depth_report_json(const DepthErrorReport &report) {
    nlohmann::ordered_json doc;
    doc["schema_version"] = 1;
    doc["intrinsics_label"] = report.intrinsics_label;
    doc["mean_d_mm"] = report.mean_d_mm;
    doc["median_d_mm"] = report.median_d_mm;
    doc["std_d_mm"] = report.std_d_mm;
    doc["valid_corners"] = report.records.size();
    doc["invalid_corners"] = report.invalid_corners;
    auto &records = doc["records"];
    records = nlohmann::ordered_json::array();
    for (const auto &r : report.records)
        records.push_back({{"id", r.id},
                           {"z_depth_mm", r.z_depth_mm},
                           {"z_board_mm", r.z_board_mm},
                           {"d_mm", r.d_mm}});
    doc["histogram"] = {{"bin_edges_mm", report.bin_edges_mm}, {"counts", report.bin_counts}};
    return doc.dump(2) + "\n";
}

} // namespace depthaudit
