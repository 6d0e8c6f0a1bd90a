#pragma once

#include <string>
#include <vector>

namespace torus_lqg::cli {

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    int column(const std::string& name) const;  // -1 if absent
};

// '#' lines are skipped; the first remaining line is the header
CsvTable read_csv(const std::string& path);

enum class PlotKind { Heatmap, Line };

// heatmap: columns re_tau, im_tau, density; line: first column is x, the rest are series
std::string render_svg(const CsvTable& t, PlotKind kind, const std::string& title);
// throws SchemaMismatch / InvalidArgument before touching out_svg
void emit_plot(const std::string& data_path, PlotKind kind, const std::string& out_svg);

}  // namespace torus_lqg::cli
