#include "infmod/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "infmod/error.hpp"

namespace infmod {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

class Csv {
 public:
  explicit Csv(const std::string& header) { text_ = header + "\n"; }

  Csv& num(double v) { return field(format_double(v)); }
  Csv& integer(std::size_t v) { return field(std::to_string(v)); }
  Csv& str(const std::string& s) { return field(quote(s)); }
  Csv& flag(bool b) { return field(b ? "true" : "false"); }
  void end() {
    text_ += '\n';
    first_ = true;
  }
  std::string take() { return std::move(text_); }

 private:
  Csv& field(const std::string& s) {
    if (!first_) text_ += ',';
    text_ += s;
    first_ = false;
    return *this;
  }

  std::string text_;
  bool first_ = true;
};

double moment_or_nan(const MomentVector& mv, int k) {
  return k <= mv.max_order() ? mv.c(k) : kNaN;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trajectory_csv(const Trajectory& traj) {
  Csv csv("t,rho,M1,M2c,M4c,M2k0c,W1_to_ansatz,mass_drift,min_value");
  const int k0 = traj.config.k0;
  for (const auto& s : traj.samples) {
    csv.num(s.t).num(s.rho).num(s.moments.mean).num(moment_or_nan(s.moments, 2));
    csv.num(moment_or_nan(s.moments, 4)).num(moment_or_nan(s.moments, 2 * k0));
    csv.num(s.w1_to_ansatz).num(s.mass_drift).num(s.min_value);
    csv.end();
  }
  return csv.take();
}

std::string sweep_csv(const std::vector<SweepRecord>& records) {
  Csv csv(
      "epsilon,sup_W1,sup_mean_err,sup_var_err,sup_high_moment_ratio,rho_err,max_mass_drift,"
      "invariants_ok,status,error");
  for (const auto& r : records) {
    csv.num(r.epsilon).num(r.sup_W1).num(r.sup_mean_err).num(r.sup_var_err);
    csv.num(r.sup_high_moment_ratio).num(r.rho_err).num(r.max_mass_drift);
    csv.flag(r.invariants_ok).str(r.ok ? "ok" : "failed").str(r.error);
    csv.end();
  }
  return csv.take();
}

std::string fits_csv(const std::vector<NamedFit>& fits) {
  Csv csv("field,window,slope,intercept,r_squared,points,status");
  for (const auto& f : fits) {
    csv.str(f.field).str(f.window);
    if (f.ok) {
      csv.num(f.fit.slope).num(f.fit.intercept).num(f.fit.r_squared).integer(f.fit.points);
      csv.str("ok");
    } else {
      csv.num(kNaN).num(kNaN).num(kNaN).integer(0).str(f.error);
    }
    csv.end();
  }
  return csv.take();
}

std::string timings_csv(const std::vector<SweepRecord>& records) {
  Csv csv("epsilon,runtime_seconds");
  for (const auto& r : records) {
    csv.num(r.epsilon).num(r.runtime_seconds);
    csv.end();
  }
  return csv.take();
}

std::string suite_csv(const std::vector<CheckResult>& checks) {
  Csv csv("check_name,pass,value,threshold");
  for (const auto& c : checks) {
    csv.str(c.name).flag(c.pass).num(c.value).num(c.threshold);
    csv.end();
  }
  return csv.take();
}

std::string residuals_csv(const ResidualReport& report) {
  Csv csv("t,R1,R2,F1_exact,F1_bound,F2_exact,F2_bound");
  for (const auto& r : report.rows) {
    csv.num(r.t).num(r.r1).num(r.r2).num(r.f1_exact).num(r.f1_bound).num(r.f2_exact);
    csv.num(r.f2_bound);
    csv.end();
  }
  return csv.take();
}

std::string mean_path_csv(const MeanPath& path) {
  Csv csv("t,z");
  for (std::size_t i = 0; i < path.times().size(); ++i) {
    csv.num(path.times()[i]).num(path.values()[i]);
    csv.end();
  }
  return csv.take();
}

std::string contrast_csv(const ContrastReport& report) {
  Csv csv("model,selection,t,M1,M2c");
  for (const auto& run : report.runs) {
    for (const Trajectory* traj : {&run.asexual, &run.sexual}) {
      const std::string model = to_string(traj->config.model);
      for (const auto& s : traj->samples) {
        csv.str(model).num(run.selection).num(s.t).num(s.moments.mean).num(s.moments.c(2));
        csv.end();
      }
    }
  }
  return csv.take();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::config_invalid, "cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorKind::config_invalid, "failed writing '" + path + "'");
}

// --- SVG --------------------------------------------------------------------

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string pixel(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

}  // namespace

std::string svg_line_plot(const std::vector<PlotSeries>& series, const PlotOptions& opt) {
  auto tx = [&](double v) { return opt.log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return opt.log_y ? std::log10(v) : v; };
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!opt.log_x || x > 0) && (!opt.log_y || y > 0);
  };

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  }
  if (!(x0 <= x1)) x0 = 0, x1 = 1;
  if (!(y0 <= y1)) y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-300) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-12 * std::max(1.0, std::abs(y0))) {
    const double pad = std::max(std::abs(y0) * 0.05, 1e-12);
    y0 -= pad;
    y1 += pad;
  }

  const double left = 84, right = 150, top = 40, bottom = 50;
  const double pw = opt.width - left - right, ph = opt.height - top - bottom;
  auto px = [&](double v) { return left + (tx(v) - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return top + ph - (ty(v) - y0) / (y1 - y0) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\""
      << opt.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << opt.width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << xml_escape(opt.title) << "</text>\n";
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  // Five ticks per axis, labelled in data units.
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0, fy = y0 + (y1 - y0) * i / 4.0;
    const double gx = left + pw * i / 4.0, gy = top + ph - ph * i / 4.0;
    svg << "<line x1=\"" << gx << "\" y1=\"" << top + ph << "\" x2=\"" << gx << "\" y2=\""
        << top + ph + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << gx << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
        << short_num(opt.log_x ? std::pow(10.0, fx) : fx) << "</text>\n";
    svg << "<line x1=\"" << left - 5 << "\" y1=\"" << gy << "\" x2=\"" << left << "\" y2=\"" << gy
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << left - 8 << "\" y=\"" << gy + 4 << "\" text-anchor=\"end\">"
        << short_num(opt.log_y ? std::pow(10.0, fy) : fy) << "</text>\n";
  }
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << opt.height - 10
      << "\" text-anchor=\"middle\">" << xml_escape(opt.x_label) << "</text>\n";
  svg << "<text transform=\"translate(16," << top + ph / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << xml_escape(opt.y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = kPalette[k % std::size(kPalette)];
    svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      svg << pixel(px(s.x[i])) << ',' << pixel(py(s.y[i])) << ' ';
    }
    svg << "\"/>\n";
    const double ly = top + 14 + 18.0 * static_cast<double>(k);
    svg << "<line x1=\"" << left + pw + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + pw + 30
        << "\" y2=\"" << ly - 4 << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << left + pw + 35 << "\" y=\"" << ly << "\">" << xml_escape(s.label)
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace infmod
