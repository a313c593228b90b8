#include "eval/plots.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace pulsekit::eval {

namespace {

constexpr int kSize = 480;
constexpr int kMargin = 48;

struct Range {
    double lo, hi;
    double map(double v) const {
        return kMargin + (v - lo) / (hi - lo) * (kSize - 2 * kMargin);
    }
    double map_y(double v) const { return kSize - map(v); }
};

Range padded_range(double lo, double hi) {
    if (!(hi > lo)) {
        lo -= 1.0;
        hi += 1.0;
    }
    double pad = 0.06 * (hi - lo);
    return {lo - pad, hi + pad};
}

void write_svg(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write plot: " + path.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\""
        << kSize << "\" viewBox=\"0 0 " << kSize << " " << kSize << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << body << "</svg>\n";
    if (!out) throw DataError("plot write failed: " + path.string());
}

} // namespace

BlandAltmanStats bland_altman_stats(const EvalReport& report) {
    if (report.per_window.empty())
        throw UsageError("bland_altman: empty report");
    double mean = 0.0;
    for (const auto& p : report.per_window) mean += p.error;
    mean /= static_cast<double>(report.per_window.size());
    double var = 0.0;
    for (const auto& p : report.per_window) var += (p.error - mean) * (p.error - mean);
    var /= static_cast<double>(report.per_window.size());
    double sd = std::sqrt(var);
    return {mean, mean - 1.96 * sd, mean + 1.96 * sd};
}

void export_scatter(const EvalReport& report, const std::filesystem::path& stem) {
    if (report.per_window.empty()) throw UsageError("export_scatter: empty report");

    auto csv_path = stem;
    csv_path += ".csv";
    {
        std::ofstream csv(csv_path);
        if (!csv) throw DataError("cannot write: " + csv_path.string());
        csv << "ref,pred\n";
        csv.precision(17);
        for (const auto& p : report.per_window) csv << p.ref << ',' << p.pred << '\n';
    }

    double lo = report.per_window[0].ref, hi = lo;
    for (const auto& p : report.per_window) {
        lo = std::min({lo, p.ref, p.pred});
        hi = std::max({hi, p.ref, p.pred});
    }
    Range rg = padded_range(lo, hi);

    std::ostringstream body;
    body << "<line x1=\"" << rg.map(rg.lo) << "\" y1=\"" << rg.map_y(rg.lo) << "\" x2=\""
         << rg.map(rg.hi) << "\" y2=\"" << rg.map_y(rg.hi)
         << "\" stroke=\"red\" stroke-dasharray=\"6,4\"/>\n";
    for (const auto& p : report.per_window)
        body << "<circle cx=\"" << rg.map(p.ref) << "\" cy=\"" << rg.map_y(p.pred)
             << "\" r=\"3\" fill=\"steelblue\" fill-opacity=\"0.7\"/>\n";
    body << "<text x=\"" << kSize / 2 << "\" y=\"" << kSize - 10
         << "\" text-anchor=\"middle\" font-size=\"13\">reference</text>\n"
         << "<text x=\"14\" y=\"" << kSize / 2
         << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 14 "
         << kSize / 2 << ")\">predicted</text>\n";
    auto svg_path = stem;
    svg_path += ".svg";
    write_svg(svg_path, body.str());
}

void export_bland_altman(const EvalReport& report, const std::filesystem::path& stem) {
    BlandAltmanStats stats = bland_altman_stats(report);

    auto csv_path = stem;
    csv_path += ".csv";
    {
        std::ofstream csv(csv_path);
        if (!csv) throw DataError("cannot write: " + csv_path.string());
        csv << "mean,diff\n";
        csv.precision(17);
        for (const auto& p : report.per_window)
            csv << 0.5 * (p.ref + p.pred) << ',' << p.error << '\n';
    }

    double xlo = 1e300, xhi = -1e300, ylo = stats.loa_low, yhi = stats.loa_high;
    for (const auto& p : report.per_window) {
        xlo = std::min(xlo, 0.5 * (p.ref + p.pred));
        xhi = std::max(xhi, 0.5 * (p.ref + p.pred));
        ylo = std::min(ylo, p.error);
        yhi = std::max(yhi, p.error);
    }
    Range rx = padded_range(xlo, xhi);
    Range ry = padded_range(ylo, yhi);

    std::ostringstream body;
    auto hline = [&](double y, const char* color, const char* dash) {
        body << "<line x1=\"" << rx.map(rx.lo) << "\" y1=\"" << ry.map_y(y) << "\" x2=\""
             << rx.map(rx.hi) << "\" y2=\"" << ry.map_y(y) << "\" stroke=\"" << color
             << "\" stroke-dasharray=\"" << dash << "\"/>\n";
    };
    hline(stats.bias, "red", "none");
    hline(stats.loa_low, "gray", "6,4");
    hline(stats.loa_high, "gray", "6,4");
    for (const auto& p : report.per_window)
        body << "<circle cx=\"" << rx.map(0.5 * (p.ref + p.pred)) << "\" cy=\""
             << ry.map_y(p.error) << "\" r=\"3\" fill=\"steelblue\" fill-opacity=\"0.7\"/>\n";
    auto svg_path = stem;
    svg_path += ".svg";
    write_svg(svg_path, body.str());
}

} // namespace pulsekit::eval
