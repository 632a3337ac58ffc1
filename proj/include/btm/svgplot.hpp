#pragma once
// Minimal static SVG line/scatter plots of ResultTable columns. Output is a
// pure function of the input bytes and the plot spec (no timestamps, no
// external assets).

#include <string>

#include "btm/table.hpp"

namespace btm {

struct PlotSpec {
    std::string x_column;
    std::string y_column;
    bool log_x = false;
    bool log_y = false;
    std::string title;
    int width = 640;
    int height = 440;
};

// Throws parameter_error for a missing column or an empty table body.
std::string render_svg_plot(const ResultTable& table, const PlotSpec& spec);
void write_svg_plot_file(const ResultTable& table, const PlotSpec& spec, const std::string& path);

}  // namespace btm
