#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rawls/estimator.hpp"
#include "rawls/experiments.hpp"
#include "rawls/linalg.hpp"

namespace rawls::cli {

/// 17 significant digits, so the value round-trips through strtod.
std::string format_real(double value);

inline constexpr const char* kCurveHeader =
    "sweep_name,sweep_value,method,trials,successes,rate,ci_low,ci_high,master_seed";
inline constexpr const char* kBoundHeader = "n,N,D,m,trials,empirical_error_mean,theorem1_bound";

void write_curve_csv(std::ostream& out, const experiments::SuccessCurve& curve);
/// Inverse of write_curve_csv. Throws ConfigError on malformed input.
experiments::SuccessCurve parse_curve_csv(const std::string& text);

void write_bound_csv(std::ostream& out, const std::vector<experiments::BoundRow>& rows);

/// {"indices": [...], "signs": [...], "aggregate": [...]}
void write_recovery_json(std::ostream& out, const SupportEstimate& support, const Vector& aggregate);

/// Plain-text instance: first line "N D", then N rows of D reals, then one
/// line of N reals for y.
struct Instance {
  Matrix design;
  Vector measurements;
};
Instance parse_instance(const std::string& text);
Instance read_instance_file(const std::string& path);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
};

/// Static SVG: axes with labels, one polyline per series, and a legend.
void write_svg_plot(std::ostream& out, const PlotSpec& plot, const std::vector<Series>& series);

}  // namespace rawls::cli
