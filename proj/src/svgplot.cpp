#include "btm/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "btm/errors.hpp"

namespace btm {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

std::vector<double> axis_ticks(double lo, double hi) {
    if (!(hi > lo)) return {lo};
    double span = hi - lo;
    double step = std::pow(10.0, std::floor(std::log10(span / 4.0)));
    if (span / step > 8.0) step *= 2.0;
    if (span / step > 8.0) step *= 2.5;
    std::vector<double> ticks;
    double first = std::ceil(lo / step) * step;
    for (double v = first; v <= hi + 1e-12 * span; v += step) ticks.push_back(v);
    return ticks;
}

}  // namespace

std::string render_svg_plot(const ResultTable& table, const PlotSpec& spec) {
    std::vector<double> xs = table.column(spec.x_column);
    std::vector<double> ys = table.column(spec.y_column);
    if (xs.empty()) throw parameter_error("render_svg_plot: table has no rows");

    auto transform = [](std::vector<double>& v, bool log_axis, const std::string& name) {
        if (!log_axis) return;
        for (double& x : v) {
            if (!(x > 0.0))
                throw parameter_error("render_svg_plot: log axis needs positive '" + name + "'");
            x = std::log10(x);
        }
    };
    transform(xs, spec.log_x, spec.x_column);
    transform(ys, spec.log_y, spec.y_column);

    double x_lo = *std::min_element(xs.begin(), xs.end());
    double x_hi = *std::max_element(xs.begin(), xs.end());
    double y_lo = *std::min_element(ys.begin(), ys.end());
    double y_hi = *std::max_element(ys.begin(), ys.end());
    if (x_hi == x_lo) { x_lo -= 0.5; x_hi += 0.5; }
    if (y_hi == y_lo) { y_lo -= 0.5; y_hi += 0.5; }

    const double ml = 70, mr = 20, mt = 40, mb = 50;
    const double pw = spec.width - ml - mr, ph = spec.height - mt - mb;
    auto px = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * pw; };
    auto py = [&](double y) { return mt + ph - (y - y_lo) / (y_hi - y_lo) * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
        << spec.height << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!spec.title.empty())
        svg << "<text x=\"" << spec.width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"15\">" << escape_xml(spec.title)
            << "</text>\n";

    svg << "<rect x=\"" << fmt(ml) << "\" y=\"" << fmt(mt) << "\" width=\"" << fmt(pw)
        << "\" height=\"" << fmt(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double tx : axis_ticks(x_lo, x_hi)) {
        double p = px(tx);
        svg << "<line x1=\"" << fmt(p) << "\" y1=\"" << fmt(mt + ph) << "\" x2=\"" << fmt(p)
            << "\" y2=\"" << fmt(mt + ph + 5) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << fmt(p) << "\" y=\"" << fmt(mt + ph + 18)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << (spec.log_x ? "1e" + fmt(tx) : fmt(tx)) << "</text>\n";
    }
    for (double ty : axis_ticks(y_lo, y_hi)) {
        double p = py(ty);
        svg << "<line x1=\"" << fmt(ml - 5) << "\" y1=\"" << fmt(p) << "\" x2=\"" << fmt(ml)
            << "\" y2=\"" << fmt(p) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << fmt(ml - 8) << "\" y=\"" << fmt(p + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << (spec.log_y ? "1e" + fmt(ty) : fmt(ty)) << "</text>\n";
    }
    svg << "<text x=\"" << spec.width / 2 << "\" y=\"" << spec.height - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << escape_xml(spec.x_column) << (spec.log_x ? " (log10)" : "") << "</text>\n";
    svg << "<text x=\"16\" y=\"" << mt - 10
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape_xml(spec.y_column)
        << (spec.log_y ? " (log10)" : "") << "</text>\n";

    svg << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i)
        svg << fmt(px(xs[i])) << ',' << fmt(py(ys[i])) << ' ';
    svg << "\"/>\n";
    for (std::size_t i = 0; i < xs.size(); ++i)
        svg << "<circle cx=\"" << fmt(px(xs[i])) << "\" cy=\"" << fmt(py(ys[i]))
            << "\" r=\"2.5\" fill=\"#1f77b4\"/>\n";
    svg << "</svg>\n";
    return svg.str();
}

void write_svg_plot_file(const ResultTable& table, const PlotSpec& spec, const std::string& path) {
    std::string body = render_svg_plot(table, spec);  // render before touching the file
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    out << body;
    if (!out) throw io_error("write failed for '" + path + "'");
}

}  // namespace btm
