#include "rawls/cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "rawls/cli/config.hpp"

namespace rawls::cli {

namespace {

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(line);
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::uint64_t parse_u64(const std::string& s, std::size_t line) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0') {
    throw ConfigError("csv line " + std::to_string(line) + ": bad integer '" + s + "'");
  }
  return v;
}

double parse_f64(const std::string& s, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') {
    throw ConfigError("csv line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

}  // namespace

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_curve_csv(std::ostream& out, const experiments::SuccessCurve& curve) {
  out << kCurveHeader << '\n';
  for (const auto& p : curve.points) {
    out << curve.sweep_name << ',' << p.sweep_value << ',' << p.method << ',' << p.trials << ','
        << p.successes << ',' << format_real(p.rate) << ',' << format_real(p.ci_low) << ','
        << format_real(p.ci_high) << ',' << curve.master_seed << '\n';
  }
}

experiments::SuccessCurve parse_curve_csv(const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line) || line != kCurveHeader) {
    throw ConfigError("curve csv: missing or unexpected header");
  }
  experiments::SuccessCurve curve;
  std::size_t lineno = 1;
  while (std::getline(ss, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 9) {
      throw ConfigError("curve csv line " + std::to_string(lineno) + ": expected 9 fields");
    }
    experiments::CurvePoint p;
    p.sweep_value = parse_u64(f[1], lineno);
    p.method = f[2];
    p.trials = parse_u64(f[3], lineno);
    p.successes = parse_u64(f[4], lineno);
    p.rate = parse_f64(f[5], lineno);
    p.ci_low = parse_f64(f[6], lineno);
    p.ci_high = parse_f64(f[7], lineno);
    curve.sweep_name = f[0];
    curve.master_seed = parse_u64(f[8], lineno);
    curve.points.push_back(std::move(p));
  }
  return curve;
}

void write_bound_csv(std::ostream& out, const std::vector<experiments::BoundRow>& rows) {
  out << kBoundHeader << '\n';
  for (const auto& r : rows) {
    out << r.n << ',' << r.N << ',' << r.D << ',' << r.m << ',' << r.trials << ','
        << format_real(r.empirical_error_mean) << ',' << format_real(r.theorem1_bound) << '\n';
  }
}

void write_recovery_json(std::ostream& out, const SupportEstimate& support,
                         const Vector& aggregate) {
  out << "{\"indices\": [";
  for (std::size_t i = 0; i < support.entries.size(); ++i) {
    out << (i ? ", " : "") << support.entries[i].index;
  }
  out << "], \"signs\": [";
  for (std::size_t i = 0; i < support.entries.size(); ++i) {
    out << (i ? ", " : "") << support.entries[i].sign;
  }
  out << "], \"aggregate\": [";
  for (Eigen::Index i = 0; i < aggregate.size(); ++i) {
    out << (i ? ", " : "") << format_real(aggregate(i));
  }
  out << "]}\n";
}

Instance parse_instance(const std::string& text) {
  std::stringstream ss(text);
  long long rows = 0;
  long long cols = 0;
  if (!(ss >> rows >> cols) || rows < 1 || cols < 1) {
    throw ConfigError("instance: first line must be 'N D' with N, D >= 1");
  }
  Instance inst{Matrix(rows, cols), Vector(rows)};
  for (long long i = 0; i < rows; ++i) {
    for (long long j = 0; j < cols; ++j) {
      if (!(ss >> inst.design(i, j))) {
        throw ConfigError("instance: design row " + std::to_string(i + 1) + " has fewer than " +
                          std::to_string(cols) + " values");
      }
    }
  }
  for (long long i = 0; i < rows; ++i) {
    if (!(ss >> inst.measurements(i))) {
      throw ConfigError("instance: measurement line has fewer than " + std::to_string(rows) +
                        " values");
    }
  }
  std::string extra;
  if (ss >> extra) throw ConfigError("instance: trailing data '" + extra + "'");
  return inst;
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open instance file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

void write_svg_plot(std::ostream& out, const PlotSpec& plot, const std::vector<Series>& series) {
  constexpr double width = 760.0, height = 460.0;
  constexpr double left = 80.0, right = 170.0, top = 50.0, bottom = 70.0;
  const double pw = width - left - right;
  const double ph = height - top - bottom;

  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double y = plot.log_y ? std::log10(std::max(s.y[i], 1e-300)) : s.y[i];
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!std::isfinite(xmin)) xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  if (plot.log_y) {
    ymin = std::floor(ymin);
    ymax = std::ceil(ymax);
  } else {
    ymin = std::min(ymin, 0.0);
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;
  auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return top + ph - (y - ymin) / (ymax - ymin) * ph; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << fixed2(left + pw / 2) << "\" y=\"28\" text-anchor=\"middle\" "
      << "font-size=\"16\">" << plot.title << "</text>\n";
  out << "<g stroke=\"black\" stroke-width=\"1\">\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\""
      << top + ph << "\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
      << top + ph << "\"/>\n";
  out << "</g>\n";

  constexpr int ticks = 5;
  for (int t = 0; t <= ticks; ++t) {
    const double xv = xmin + (xmax - xmin) * t / ticks;
    const double yv = ymin + (ymax - ymin) * t / ticks;
    out << "<text x=\"" << fixed2(sx(xv)) << "\" y=\"" << fixed2(top + ph + 18)
        << "\" text-anchor=\"middle\" font-size=\"11\">" << tick_label(xv) << "</text>\n";
    out << "<text x=\"" << fixed2(left - 6) << "\" y=\"" << fixed2(sy(yv) + 4)
        << "\" text-anchor=\"end\" font-size=\"11\">"
        << tick_label(plot.log_y ? std::pow(10.0, yv) : yv) << "</text>\n";
  }
  out << "<text class=\"x-label\" x=\"" << fixed2(left + pw / 2) << "\" y=\""
      << fixed2(height - 20) << "\" text-anchor=\"middle\" font-size=\"13\">" << plot.x_label
      << "</text>\n";
  out << "<text class=\"y-label\" x=\"20\" y=\"" << fixed2(top + ph / 2)
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 20 "
      << fixed2(top + ph / 2) << ")\">" << plot.y_label << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double y = plot.log_y ? std::log10(std::max(s.y[i], 1e-300)) : s.y[i];
      out << (i ? " " : "") << fixed2(sx(s.x[i])) << ',' << fixed2(sy(y));
    }
    out << "\"/>\n";
    const double ly = top + 10 + 20.0 * static_cast<double>(k);
    out << "<line x1=\"" << fixed2(left + pw + 15) << "\" y1=\"" << fixed2(ly) << "\" x2=\""
        << fixed2(left + pw + 40) << "\" y2=\"" << fixed2(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << fixed2(left + pw + 46) << "\" y=\"" << fixed2(ly + 4)
        << "\" font-size=\"12\">" << s.label << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace rawls::cli
