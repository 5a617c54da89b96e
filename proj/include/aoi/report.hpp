#pragma once

// CSV and SVG artifacts for sweep results.
//
// CSV header:
//   policy,rho1,rho2,mu,delta1,delta2,sum_aoi,jain,method,ci_low,ci_high,seed
// Reals are written in fixed notation with 12 digits after the decimal
// point, lines end in '\n', and absent optional fields are left empty.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "aoi/metrics.hpp"

namespace aoi {

inline constexpr const char* kCsvHeader =
    "policy,rho1,rho2,mu,delta1,delta2,sum_aoi,jain,method,ci_low,ci_high,seed";

/// Fixed-point, 12 decimals, locale independent.
std::string format_number(double value);

/// Throws Error("empty sweep") when rows is empty.
void emit_csv(const std::vector<SweepRow>& rows, std::ostream& out);

/// Writes to a file; IO failures are reported with the path.
void write_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

/// Inverse of emit_csv. Rows whose numeric result fields are empty come back
/// marked as failed. Throws Error on a malformed header or field.
std::vector<SweepRow> parse_csv(std::istream& in);

struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

struct PlotLabels {
    std::string title;
    std::string x;
    std::string y;
};

/// Minimal line plot: one polyline per series, linear axes, legend.
void write_svg(const std::vector<PlotSeries>& series, const PlotLabels& labels, std::ostream& out);
void write_svg(const std::vector<PlotSeries>& series, const PlotLabels& labels,
               const std::filesystem::path& path);

}  // namespace aoi
