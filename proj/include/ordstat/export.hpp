#pragma once

#include <string>
#include <vector>

#include "ordstat/alpha.hpp"
#include "ordstat/risk.hpp"

namespace ordstat {

/// Number formatting for all text artifacts: shortest round-trip
/// representation, locale-independent, so reruns are byte-identical.
std::string format_double(double v);

/// Columns: lambda, estimator_id, risk, std_err, n, seed.
std::string risk_curves_to_csv(const std::vector<RiskCurve>& curves);

/// Columns: lambda, alpha, method. Quadrature rows first, then optional
/// oracle rows.
std::string alpha_curve_to_csv(const AlphaCurve& curve,
                               const std::vector<double>& oracle_lambdas = {},
                               const std::vector<double>& oracle_values = {});

std::string interval_to_json(const AdmissibleInterval& interval);

/// Static SVG line chart: linear axes, fixed legend order, one polyline
/// per series.
struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

std::string svg_line_chart(const std::vector<SvgSeries>& series, const std::string& title,
                           const std::string& x_label, const std::string& y_label);

void write_text_file(const std::string& path, const std::string& content);

/// Writes fig{1|2}_{p1}_{p2}.csv and .svg into out_dir; returns the two
/// file paths.
std::pair<std::string, std::string> emit_figure_files(const FigureResult& result,
                                                      const std::string& out_dir);

} // namespace ordstat
