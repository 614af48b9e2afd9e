#pragma once

// CSV and SVG output for sweeps and PSD illustrations.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "biorx/scenario.hpp"
#include "biorx/sweep.hpp"

namespace biorx {

/// One CSV field with RFC 4180 quoting: fields holding a comma, quote, CR or
/// LF are wrapped in quotes with inner quotes doubled.
std::string csv_field(std::string_view s);

/// %.12g
std::string format_number(double x);

void write_results(const std::vector<ResultRow>& rows, std::ostream& out);
void write_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path);

struct PsdMarker {
  std::string label;  // e.g. "f_ch_m|1"
  double f = 0.0;
};

struct PsdFigure {
  std::vector<double> f;
  std::vector<double> S0, S1;  // total PSD for bit 0 and bit 1 at c_i = mu_ci
  std::vector<PsdMarker> markers;
};

/// Total PSD of both bits on a log grid, by default from 1/(N dt) to
/// 1/(2 dt), with the characteristic frequencies of each bit as markers.
/// A non-positive f_low or f_high keeps the default edge.
PsdFigure emit_psd_figure(const Scenario& scn, int points = 200, double f_low = 0.0, double f_high = 0.0);

/// Columns kind,label,f,S_bit0,S_bit1; curve rows then marker rows.
void write_psd_csv(const PsdFigure& fig, std::ostream& out);

struct SvgSeries {
  std::string label;
  std::string colour;
  std::vector<double> x, y;
};

struct SvgPlot {
  std::string title, x_label, y_label;
  bool log_x = true, log_y = true;
  std::vector<SvgSeries> series;
  std::vector<PsdMarker> vlines;
};

/// Polylines on a framed log or linear axis with decade ticks.
void write_svg(const SvgPlot& plot, std::ostream& out);

SvgPlot psd_plot(const PsdFigure& fig);
SvgPlot bep_plot(const std::vector<ResultRow>& rows);

}  // namespace biorx
