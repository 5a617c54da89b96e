#include "aoi/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace aoi {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string::size_type start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_real(const std::string& field, const char* column) {
    double value = 0.0;
    const char* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw Error(std::string("bad value '") + field + "' in column " + column);
    }
    return value;
}

std::optional<double> parse_optional_real(const std::string& field, const char* column) {
    if (field.empty()) return std::nullopt;
    return parse_real(field, column);
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string short_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

}  // namespace

std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12f", value);
    return buf;
}

void emit_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    if (rows.empty()) throw Error("empty sweep");
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
        out << policy_name(r.policy) << ',' << format_number(r.rho1) << ',' << format_number(r.rho2)
            << ',' << format_number(r.mu) << ',';
        if (r.ok()) {
            out << format_number(r.delta1) << ',' << format_number(r.delta2) << ','
                << format_number(r.sum_aoi) << ',' << format_number(r.jain);
        } else {
            out << ",,,";
        }
        out << ',' << method_name(r.method) << ',';
        if (r.ci_low) out << format_number(*r.ci_low);
        out << ',';
        if (r.ci_high) out << format_number(*r.ci_high);
        out << ',';
        if (r.seed) out << *r.seed;
        out << '\n';
    }
}

void write_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error("cannot open " + path.string() + " for writing");
    emit_csv(rows, file);
    file.flush();
    if (!file) throw Error("failed writing " + path.string());
}

std::vector<SweepRow> parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw Error("missing or unexpected CSV header");
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 12) throw Error("expected 12 fields in CSV line: " + line);
        SweepRow r;
        const auto policy = parse_policy(f[0]);
        if (!policy) throw Error("unknown policy '" + f[0] + "'");
        r.policy = *policy;
        r.rho1 = parse_real(f[1], "rho1");
        r.rho2 = parse_real(f[2], "rho2");
        r.mu = parse_real(f[3], "mu");
        if (f[4].empty()) {
            r.error = "failed";
        } else {
            r.delta1 = parse_real(f[4], "delta1");
            r.delta2 = parse_real(f[5], "delta2");
            r.sum_aoi = parse_real(f[6], "sum_aoi");
            r.jain = parse_real(f[7], "jain");
        }
        const auto method = parse_method(f[8]);
        if (!method) throw Error("unknown method '" + f[8] + "'");
        r.method = *method;
        r.ci_low = parse_optional_real(f[9], "ci_low");
        r.ci_high = parse_optional_real(f[10], "ci_high");
        if (!f[11].empty()) {
            std::uint64_t seed = 0;
            const char* end = f[11].data() + f[11].size();
            auto [ptr, ec] = std::from_chars(f[11].data(), end, seed);
            if (ec != std::errc() || ptr != end) throw Error("bad seed '" + f[11] + "'");
            r.seed = seed;
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_svg(const std::vector<PlotSeries>& series, const PlotLabels& labels, std::ostream& out) {
    constexpr double width = 640, height = 440;
    constexpr double left = 70, right = 150, top = 40, bottom = 60;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (!(xmin <= xmax)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * plot_w; };
    auto py = [&](double y) { return top + plot_h - (y - ymin) / (ymax - ymin) * plot_h; };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
        << escape_xml(labels.title) << "</text>\n";
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\""
        << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = xmin + (xmax - xmin) * i / 4.0;
        const double fy = ymin + (ymax - ymin) * i / 4.0;
        out << "<text x=\"" << px(fx) << "\" y=\"" << top + plot_h + 18
            << "\" text-anchor=\"middle\" font-size=\"11\">" << short_number(fx) << "</text>\n";
        out << "<text x=\"" << left - 6 << "\" y=\"" << py(fy) + 4
            << "\" text-anchor=\"end\" font-size=\"11\">" << short_number(fy) << "</text>\n";
    }
    out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 16
        << "\" text-anchor=\"middle\" font-size=\"13\">" << escape_xml(labels.x) << "</text>\n";
    out << "<text x=\"18\" y=\"" << top + plot_h / 2 << "\" text-anchor=\"middle\" font-size=\"13\""
        << " transform=\"rotate(-90 18 " << top + plot_h / 2 << ")\">" << escape_xml(labels.y)
        << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const char* color = palette[k % std::size(palette)];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
        bool first = true;
        for (const auto& [x, y] : series[k].points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            if (!first) out << ' ';
            out << px(x) << ',' << py(y);
            first = false;
        }
        out << "\"/>\n";
        const double ly = top + 16 + 18.0 * static_cast<double>(k);
        out << "<line x1=\"" << left + plot_w + 12 << "\" y1=\"" << ly - 4 << "\" x2=\""
            << left + plot_w + 32 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << left + plot_w + 38 << "\" y=\"" << ly << "\" font-size=\"12\">"
            << escape_xml(series[k].label) << "</text>\n";
    }
    out << "</svg>\n";
}

void write_svg(const std::vector<PlotSeries>& series, const PlotLabels& labels,
               const std::filesystem::path& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error("cannot open " + path.string() + " for writing");
    write_svg(series, labels, file);
    if (!file) throw Error("failed writing " + path.string());
}

}  // namespace aoi
