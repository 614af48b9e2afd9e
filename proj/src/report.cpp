#include "biorx/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace biorx {

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

namespace {

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv_field(fields[i]);
  }
  out << "\r\n";
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

void write_results(const std::vector<ResultRow>& rows, std::ostream& out) {
  write_row(out, {"variable", "value", "tdd_bep", "fdd_bep", "tdd_mc_trials", "tdd_mc_errors", "tdd_mc_bep",
                  "tdd_mc_ci_low", "tdd_mc_ci_high", "fdd_mc_trials", "fdd_mc_errors", "fdd_mc_bep", "fdd_mc_ci_low",
                  "fdd_mc_ci_high", "fdd_nonconverged", "c_m0 [1/m^3]", "c_m1 [1/m^3]", "mu_ci [1/m^3]",
                  "gamma_td [A]", "gamma_fd [1/m^3]", "var_hat_0 [1/m^6]", "var_hat_1 [1/m^6]", "f_ch_m0 [Hz]",
                  "f_ch_i0 [Hz]", "f_ch_m1 [Hz]", "f_ch_i1 [Hz]", "error"});
  for (const ResultRow& r : rows) {
    std::vector<std::string> f{std::string(to_string(r.variable)), format_number(r.value)};
    auto num = [&](double x) { f.push_back(r.ok ? format_number(x) : std::string()); };
    num(r.tdd_bep);
    num(r.fdd_bep);
    for (const auto* mc : {&r.tdd_mc, &r.fdd_mc}) {
      if (*mc) {
        f.push_back(std::to_string((*mc)->trials));
        f.push_back(std::to_string((*mc)->errors));
        f.push_back(format_number((*mc)->bep));
        f.push_back(format_number((*mc)->ci.low));
        f.push_back(format_number((*mc)->ci.high));
      } else {
        f.insert(f.end(), 5, std::string());
      }
    }
    f.push_back(r.fdd_mc ? std::to_string(r.fdd_nonconverged) : std::string());
    for (double x : {r.c_m0, r.c_m1, r.mu_ci, r.gamma_td, r.gamma_fd, r.var_hat_0, r.var_hat_1, r.f_ch_m0,
                     r.f_ch_i0, r.f_ch_m1, r.f_ch_i1})
      num(x);
    f.push_back(r.error);
    write_row(out, f);
  }
}

void write_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_results(rows, out);
}

PsdFigure emit_psd_figure(const Scenario& scn, int points, double f_low, double f_high) {
  scn.validate();
  if (points < 2) throw std::invalid_argument("emit_psd_figure: need at least 2 points");
  const OperatingPoint& op = scn.point;
  const SpectralModel model = op.model();
  const double c0 = op.c_m0(), c1 = op.c_m1(), ci = op.mu_ci();
  const double f_lo = f_low > 0.0 ? f_low : 1.0 / (op.N * op.dt);
  const double f_hi = f_high > 0.0 ? f_high : 1.0 / (2.0 * op.dt);
  if (!(f_hi > f_lo)) throw std::invalid_argument("emit_psd_figure: empty frequency range");

  PsdFigure fig;
  for (int k = 0; k < points; ++k) {
    const double f = f_lo * std::pow(f_hi / f_lo, static_cast<double>(k) / (points - 1));
    fig.f.push_back(f);
    fig.S0.push_back(model.total(f, {c0, ci}));
    fig.S1.push_back(model.total(f, {c1, ci}));
  }
  const auto fch0 = characteristic_frequencies({c0, ci}, op.m, op.i);
  const auto fch1 = characteristic_frequencies({c1, ci}, op.m, op.i);
  fig.markers = {{"f_ch_m|0", fch0.f_ch_m}, {"f_ch_i|0", fch0.f_ch_i},
                 {"f_ch_m|1", fch1.f_ch_m}, {"f_ch_i|1", fch1.f_ch_i}};
  return fig;
}

void write_psd_csv(const PsdFigure& fig, std::ostream& out) {
  write_row(out, {"kind", "label", "f [Hz]", "S_bit0 [A^2/Hz]", "S_bit1 [A^2/Hz]"});
  for (std::size_t k = 0; k < fig.f.size(); ++k)
    write_row(out, {"curve", "", format_number(fig.f[k]), format_number(fig.S0[k]), format_number(fig.S1[k])});
  for (const auto& m : fig.markers) write_row(out, {"marker", m.label, format_number(m.f), "", ""});
}

namespace {

constexpr double kWidth = 640, kHeight = 420, kLeft = 80, kRight = 20, kTop = 40, kBottom = 60;

std::string xml_escape(std::string_view s) {
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

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct Axis {
  double lo, hi;
  bool log;
  double map(double v, double a, double b) const {
    const double t = log ? (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo)) : (v - lo) / (hi - lo);
    return a + t * (b - a);
  }
};

Axis make_axis(const std::vector<double>& values, bool log) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : values) {
    if (!std::isfinite(v) || (log && v <= 0.0)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!std::isfinite(lo)) lo = log ? 1e-3 : 0.0, hi = 1.0;
  if (log) {
    lo = std::pow(10.0, std::floor(std::log10(lo)));
    hi = std::pow(10.0, std::ceil(std::log10(hi)));
    if (hi <= lo) hi = lo * 10.0;
  } else if (hi <= lo) {
    hi = lo + 1.0;
  }
  return {lo, hi, log};
}

}  // namespace

void write_svg(const SvgPlot& plot, std::ostream& out) {
  std::vector<double> xs, ys;
  for (const auto& s : plot.series) {
    xs.insert(xs.end(), s.x.begin(), s.x.end());
    ys.insert(ys.end(), s.y.begin(), s.y.end());
  }
  const Axis ax = make_axis(xs, plot.log_x), ay = make_axis(ys, plot.log_y);
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << px(kWidth / 2) << "\" y=\"20\" text-anchor=\"middle\">" << xml_escape(plot.title) << "</text>\n";
  out << "<rect x=\"" << px(x0) << "\" y=\"" << px(y1) << "\" width=\"" << px(x1 - x0) << "\" height=\""
      << px(y0 - y1) << "\" fill=\"none\" stroke=\"black\"/>\n";

  auto ticks = [](const Axis& a) {
    std::vector<double> t;
    if (a.log) {
      for (double v = a.lo; v <= a.hi * 1.0001; v *= 10.0) t.push_back(v);
    } else {
      for (int k = 0; k <= 5; ++k) t.push_back(a.lo + k * (a.hi - a.lo) / 5.0);
    }
    return t;
  };
  for (double v : ticks(ax)) {
    const double x = ax.map(v, x0, x1);
    out << "<line x1=\"" << px(x) << "\" y1=\"" << px(y0) << "\" x2=\"" << px(x) << "\" y2=\"" << px(y0 + 5)
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << px(x) << "\" y=\"" << px(y0 + 18) << "\" text-anchor=\"middle\">" << format_number(v)
        << "</text>\n";
  }
  for (double v : ticks(ay)) {
    const double y = ay.map(v, y0, y1);
    out << "<line x1=\"" << px(x0 - 5) << "\" y1=\"" << px(y) << "\" x2=\"" << px(x0) << "\" y2=\"" << px(y)
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << px(x0 - 8) << "\" y=\"" << px(y + 4) << "\" text-anchor=\"end\">" << format_number(v)
        << "</text>\n";
  }
  out << "<text x=\"" << px((x0 + x1) / 2) << "\" y=\"" << px(kHeight - 15) << "\" text-anchor=\"middle\">"
      << xml_escape(plot.x_label) << "</text>\n";
  out << "<text x=\"15\" y=\"" << px((y0 + y1) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
      << px((y0 + y1) / 2) << ")\">" << xml_escape(plot.y_label) << "</text>\n";

  for (const auto& m : plot.vlines) {
    if (!(m.f > 0.0) && ax.log) continue;
    const double x = ax.map(m.f, x0, x1);
    if (x < x0 || x > x1) continue;
    out << "<line x1=\"" << px(x) << "\" y1=\"" << px(y0) << "\" x2=\"" << px(x) << "\" y2=\"" << px(y1)
        << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
    out << "<text x=\"" << px(x + 3) << "\" y=\"" << px(y1 + 12) << "\" fill=\"gray\">" << xml_escape(m.label)
        << "</text>\n";
  }

  double legend_y = y1 + 14;
  for (const auto& s : plot.series) {
    out << "<polyline fill=\"none\" stroke=\"" << xml_escape(s.colour) << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t k = 0; k < s.x.size() && k < s.y.size(); ++k) {
      if (!std::isfinite(s.y[k]) || (ay.log && s.y[k] <= 0.0) || (ax.log && s.x[k] <= 0.0)) continue;
      if (!first) out << ' ';
      out << px(ax.map(s.x[k], x0, x1)) << ',' << px(ay.map(s.y[k], y0, y1));
      first = false;
    }
    out << "\"/>\n";
    out << "<text x=\"" << px(x1 - 10) << "\" y=\"" << px(legend_y) << "\" text-anchor=\"end\" fill=\""
        << xml_escape(s.colour) << "\">" << xml_escape(s.label) << "</text>\n";
    legend_y += 14;
  }
  out << "</svg>\n";
}

SvgPlot psd_plot(const PsdFigure& fig) {
  SvgPlot p;
  p.title = "Model PSD";
  p.x_label = "f [Hz]";
  p.y_label = "S(f) [A^2/Hz]";
  p.series = {{"bit 0", "#1f77b4", fig.f, fig.S0}, {"bit 1", "#d62728", fig.f, fig.S1}};
  p.vlines = fig.markers;
  return p;
}

SvgPlot bep_plot(const std::vector<ResultRow>& rows) {
  SvgPlot p;
  const std::string var = rows.empty() ? "value" : std::string(to_string(rows.front().variable));
  p.title = "Bit error probability";
  p.x_label = var;
  p.y_label = "BEP";
  p.log_x = false;
  SvgSeries tdd{"TDD analytic", "#1f77b4", {}, {}}, fdd{"FDD analytic", "#d62728", {}, {}};
  SvgSeries tdd_mc{"TDD Monte Carlo", "#6baed6", {}, {}}, fdd_mc{"FDD Monte Carlo", "#fc9272", {}, {}};
  for (const auto& r : rows) {
    if (!r.ok) continue;
    tdd.x.push_back(r.value), tdd.y.push_back(r.tdd_bep);
    fdd.x.push_back(r.value), fdd.y.push_back(r.fdd_bep);
    if (r.tdd_mc) tdd_mc.x.push_back(r.value), tdd_mc.y.push_back(r.tdd_mc->bep);
    if (r.fdd_mc) fdd_mc.x.push_back(r.value), fdd_mc.y.push_back(r.fdd_mc->bep);
  }
  p.series = {tdd, fdd};
  if (!tdd_mc.x.empty()) p.series.push_back(tdd_mc);
  if (!fdd_mc.x.empty()) p.series.push_back(fdd_mc);
  return p;
}

}  // namespace biorx
