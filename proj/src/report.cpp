#include "edpmc/csv.hpp"
#include "edpmc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace edpmc {

namespace {

const char* kSeriesColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

struct ChartSeries {
    MaskMethod method;
    std::vector<double> cr;
    std::vector<double> mean;
    std::vector<double> std_dev;
};

std::vector<ChartSeries> collect_series(const ErrorReport& report, EdpKind edp) {
    std::vector<ChartSeries> series;
    for (const auto& row : report.summary) {
        if (row.edp != edp) continue;
        auto it = std::find_if(series.begin(), series.end(),
                               [&](const ChartSeries& s) { return s.method == row.method; });
        if (it == series.end()) {
            series.push_back({row.method, {}, {}, {}});
            it = series.end() - 1;
        }
        it->cr.push_back(row.cr);
        it->mean.push_back(row.mean);
        it->std_dev.push_back(row.std_dev);
    }
    return series;
}

}  // namespace

std::string render_error_chart(const ErrorReport& report, EdpKind edp) {
    const auto series = collect_series(report, edp);
    if (series.empty()) throw DataError("render_error_chart: no summary rows for this EDP");

    const double width = 640, height = 440;
    const double left = 70, right = 600, top = 40, bottom = 380;

    double cr_min = 1e300, cr_max = -1e300, y_min = 1e300, y_max = -1e300;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.cr.size(); ++i) {
            cr_min = std::min(cr_min, s.cr[i]);
            cr_max = std::max(cr_max, s.cr[i]);
            const double lo = std::max(s.mean[i] - s.std_dev[i], 1e-12);
            y_min = std::min(y_min, lo);
            y_max = std::max(y_max, s.mean[i] + s.std_dev[i]);
        }
    if (cr_max == cr_min) cr_max = cr_min + 1e-6;
    const double log_lo = std::floor(std::log10(std::max(y_min, 1e-12)));
    const double log_hi = std::ceil(std::log10(std::max(y_max, 1e-12)));

    auto x_of = [&](double cr) {
        return left + (right - left) * (cr - cr_min) / (cr_max - cr_min);
    };
    auto y_of = [&](double error) {
        const double l = std::log10(std::max(error, 1e-12));
        return bottom - (bottom - top) * (l - log_lo) / std::max(log_hi - log_lo, 1e-9);
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << (width / 2) << "\" y=\"22\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">mean normalized error vs CR ("
        << to_string(edp) << ")</text>\n";

    // Axes.
    svg << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right
        << "\" y2=\"" << bottom << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << bottom << "\" stroke=\"black\"/>\n";
    for (const auto& s : series.front().cr) {
        svg << "<line x1=\"" << x_of(s) << "\" y1=\"" << bottom << "\" x2=\"" << x_of(s)
            << "\" y2=\"" << (bottom + 5) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << x_of(s) << "\" y=\"" << (bottom + 20)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << s
            << "</text>\n";
    }
    for (double l = log_lo; l <= log_hi + 1e-9; l += 1.0) {
        const double y = bottom - (bottom - top) * (l - log_lo) / std::max(log_hi - log_lo, 1e-9);
        svg << "<line x1=\"" << (left - 5) << "\" y1=\"" << y << "\" x2=\"" << left
            << "\" y2=\"" << y << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << (left - 10) << "\" y=\"" << (y + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">1e"
            << static_cast<int>(l) << "</text>\n";
    }
    svg << "<text x=\"" << ((left + right) / 2) << "\" y=\"" << (bottom + 42)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << "compression ratio</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kSeriesColors[k % 5];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < s.cr.size(); ++i)
            svg << x_of(s.cr[i]) << ',' << y_of(s.mean[i]) << ' ';
        svg << "\"/>\n";
        for (std::size_t i = 0; i < s.cr.size(); ++i) {
            const double x = x_of(s.cr[i]);
            const double y_hi = y_of(s.mean[i] + s.std_dev[i]);
            const double y_lo = y_of(std::max(s.mean[i] - s.std_dev[i], 1e-12));
            svg << "<line x1=\"" << x << "\" y1=\"" << y_lo << "\" x2=\"" << x << "\" y2=\""
                << y_hi << "\" stroke=\"" << color << "\"/>\n";
            svg << "<circle cx=\"" << x << "\" cy=\"" << y_of(s.mean[i]) << "\" r=\"3\" fill=\""
                << color << "\"/>\n";
        }
        svg << "<text x=\"" << (left + 12) << "\" y=\"" << (top + 18 + 18 * k)
            << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color << "\">"
            << to_string(s.method) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void emit_report(const ErrorReport& report, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (!std::filesystem::is_directory(out_dir))
        throw DataError("emit_report: cannot create directory '" + out_dir.string() + "'");

    {
        std::ofstream tidy(out_dir / "errors_tidy.csv");
        if (!tidy) throw DataError("emit_report: cannot write errors_tidy.csv");
        tidy << "edp,method,cr,trial,error\n";
        for (const auto& r : report.raw)
            tidy << to_string(r.edp) << ',' << to_string(r.method) << ','
                 << format_full_precision(r.cr) << ',' << r.trial << ','
                 << format_full_precision(r.error) << '\n';
    }
    {
        std::ofstream summary(out_dir / "errors_summary.csv");
        if (!summary) throw DataError("emit_report: cannot write errors_summary.csv");
        summary << "edp,method,cr,trials,mean,std,min,max\n";
        for (const auto& s : report.summary)
            summary << to_string(s.edp) << ',' << to_string(s.method) << ','
                    << format_full_precision(s.cr) << ',' << s.trials << ','
                    << format_full_precision(s.mean) << ',' << format_full_precision(s.std_dev)
                    << ',' << format_full_precision(s.min) << ','
                    << format_full_precision(s.max) << '\n';
    }
    if (!report.clusters.labels.empty()) {
        std::ofstream audit(out_dir / "cluster_audit.csv");
        audit << "cluster,size";
        for (std::size_t c = 0; c < report.quotas_per_cr.size(); ++c)
            audit << ",quota_cr" << (c + 1);
        audit << '\n';
        const auto sizes = report.clusters.cluster_sizes();
        for (std::size_t c = 0; c < sizes.size(); ++c) {
            audit << c << ',' << sizes[c];
            for (const auto& quotas : report.quotas_per_cr) audit << ',' << quotas[c];
            audit << '\n';
        }
    }
    {
        std::ofstream info(out_dir / "run_info.txt");
        info << "fingerprint: " << report.fingerprint << '\n';
        info << "clusters: " << report.clusters.k() << '\n';
        info << "trials per combination: "
             << (report.summary.empty() ? 0 : report.summary.front().trials) << '\n';
    }
    for (EdpKind edp : {EdpKind::TopDisplacement, EdpKind::BaseShear}) {
        const bool present = std::any_of(report.summary.begin(), report.summary.end(),
                                         [&](const SummaryRow& s) { return s.edp == edp; });
        if (!present) continue;
        std::ofstream svg(out_dir / ("error_vs_cr_" + to_string(edp) + ".svg"));
        svg << render_error_chart(report, edp);
    }
}

}  // namespace edpmc
