#include "ordstat/export.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ordstat {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    // %.17g round-trips; trim to the shortest representation that still
    // parses back to the same bits.
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string risk_curves_to_csv(const std::vector<RiskCurve>& curves) {
    std::ostringstream os;
    os << "lambda,estimator_id,risk,std_err,n,seed\n";
    for (const RiskCurve& c : curves) {
        for (std::size_t i = 0; i < c.lambda_grid.size(); ++i) {
            os << format_double(c.lambda_grid[i]) << ',' << c.estimator_id << ','
               << format_double(c.risk[i]) << ',' << format_double(c.std_err[i]) << ',' << c.n
               << ',' << c.seed << '\n';
        }
    }
    return os.str();
}

std::string alpha_curve_to_csv(const AlphaCurve& curve, const std::vector<double>& oracle_lambdas,
                               const std::vector<double>& oracle_values) {
    std::ostringstream os;
    os << "lambda,alpha,method\n";
    for (std::size_t i = 0; i < curve.lambda_grid.size(); ++i) {
        os << format_double(curve.lambda_grid[i]) << ',' << format_double(curve.values[i])
           << ",quadrature\n";
    }
    for (std::size_t i = 0; i < oracle_lambdas.size(); ++i) {
        os << format_double(oracle_lambdas[i]) << ',' << format_double(oracle_values[i])
           << ",oracle\n";
    }
    return os.str();
}

std::string interval_to_json(const AdmissibleInterval& interval) {
    nlohmann::json j;
    auto extended = [](double v) -> nlohmann::json {
        if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
        return v;
    };
    j["low"] = extended(interval.low);
    j["high"] = extended(interval.high);
    j["direction"] = direction_name(interval.direction);
    j["theorem"] = theorem_name(interval.theorem);
    j["trusted"] = interval.trusted;
    j["boundary_value"] = interval.boundary_value;
    j["infinity_limit"] = {{"class", limit_class_name(interval.limit.cls)},
                           {"value", extended(interval.limit.value)}};
    j["dominance_rule"] = interval.dominance_rule;
    return j.dump(2);
}

// ---------------------------------------------------------------------
// SVG
// ---------------------------------------------------------------------

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf"};

struct Scale {
    double lo, hi, px_lo, px_hi;
    double operator()(double v) const {
        if (hi == lo) return 0.5 * (px_lo + px_hi);
        return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo);
    }
};

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

} // namespace

std::string svg_line_chart(const std::vector<SvgSeries>& series, const std::string& title,
                           const std::string& x_label, const std::string& y_label) {
    const int width = 640, height = 420;
    const int ml = 64, mr = 160, mt = 36, mb = 48;
    double xlo = 0, xhi = 1, ylo = 0, yhi = 1;
    bool first = true;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (first) {
                xlo = xhi = s.x[i];
                ylo = yhi = s.y[i];
                first = false;
            }
            xlo = std::min(xlo, s.x[i]);
            xhi = std::max(xhi, s.x[i]);
            ylo = std::min(ylo, s.y[i]);
            yhi = std::max(yhi, s.y[i]);
        }
    }
    if (yhi == ylo) yhi = ylo + 1.0;
    const double pad = 0.05 * (yhi - ylo);
    ylo -= pad;
    yhi += pad;
    const Scale sx{xlo, xhi, double(ml), double(width - mr)};
    const Scale sy{ylo, yhi, double(height - mb), double(mt)};

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    os << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << (ml + (width - mr - ml) / 2) << "\" y=\"20\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"14\">"
       << title << "</text>\n";

    // axes
    os << "<line x1=\"" << ml << "\" y1=\"" << (height - mb) << "\" x2=\"" << (width - mr)
       << "\" y2=\"" << (height - mb) << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
       << (height - mb) << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = xlo + (xhi - xlo) * i / 5.0;
        const double yv = ylo + (yhi - ylo) * i / 5.0;
        os << "<line x1=\"" << sx(xv) << "\" y1=\"" << (height - mb) << "\" x2=\"" << sx(xv)
           << "\" y2=\"" << (height - mb + 4) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << sx(xv) << "\" y=\"" << (height - mb + 18)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
           << tick_label(xv) << "</text>\n";
        os << "<line x1=\"" << (ml - 4) << "\" y1=\"" << sy(yv) << "\" x2=\"" << ml << "\" y2=\""
           << sy(yv) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << (ml - 8) << "\" y=\"" << (sy(yv) + 4)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
           << tick_label(yv) << "</text>\n";
    }
    os << "<text x=\"" << (ml + (width - mr - ml) / 2) << "\" y=\"" << (height - 12)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << x_label
       << "</text>\n";
    os << "<text x=\"16\" y=\"" << (mt + (height - mb - mt) / 2)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
          "transform=\"rotate(-90 16 "
       << (mt + (height - mb - mt) / 2) << ")\">" << y_label << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kPalette[k % (sizeof kPalette / sizeof kPalette[0])];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (i) os << ' ';
            os << sx(s.x[i]) << ',' << sy(s.y[i]);
        }
        os << "\"/>\n";
        const int ly = mt + 16 + int(k) * 18;
        os << "<line x1=\"" << (width - mr + 10) << "\" y1=\"" << ly << "\" x2=\""
           << (width - mr + 34) << "\" y2=\"" << ly << "\" stroke=\"" << color
           << "\" stroke-width=\"1.5\"/>\n";
        os << "<text x=\"" << (width - mr + 40) << "\" y=\"" << (ly + 4)
           << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(ErrorCode::IoError, "cannot open " + path + " for writing");
    out << content;
    if (!out) raise(ErrorCode::IoError, "failed writing " + path);
}

std::pair<std::string, std::string> emit_figure_files(const FigureResult& result,
                                                      const std::string& out_dir) {
    std::ostringstream stem;
    stem << out_dir << "/fig" << (result.figure == FigureId::Fig1 ? 1 : 2) << '_'
         << format_double(result.panel.p1) << '_' << format_double(result.panel.p2);
    const std::string csv_path = stem.str() + ".csv";
    const std::string svg_path = stem.str() + ".svg";
    write_text_file(csv_path, risk_curves_to_csv(result.curves));

    std::vector<SvgSeries> series;
    for (const RiskCurve& c : result.curves) {
        series.push_back({c.estimator_id, c.lambda_grid, c.risk});
    }
    std::ostringstream title;
    title << "fig" << (result.figure == FigureId::Fig1 ? 1 : 2) << " ("
          << format_double(result.panel.p1) << ", " << format_double(result.panel.p2) << ")";
    const char* xlab = result.figure == FigureId::Fig1 ? "lambda = theta2 - theta1"
                                                       : "lambda = theta2 / theta1";
    write_text_file(svg_path, svg_line_chart(series, title.str(), xlab, "simulated risk"));
    return {csv_path, svg_path};
}

} // namespace ordstat
