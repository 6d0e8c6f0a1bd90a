#include "plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "torus_lqg/error.hpp"

namespace torus_lqg::cli {

int CsvTable::column(const std::string& name) const
{
    auto it = std::find(columns.begin(), columns.end(), name);
    return it == columns.end() ? -1 : int(it - columns.begin());
}

CsvTable read_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
    CsvTable t;
    std::string line;
    bool header = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) cells.push_back(c);
        if (!header) {
            t.columns = cells;
            header = true;
            continue;
        }
        if (cells.size() != t.columns.size())
            throw Error(ErrorKind::SchemaMismatch, path + ":" + std::to_string(lineno) + ": expected " +
                                                       std::to_string(t.columns.size()) + " columns");
        std::vector<double> row;
        for (auto& v : cells) {
            try {
                size_t pos = 0;
                row.push_back(std::stod(v, &pos));
                if (pos != v.size()) throw std::invalid_argument(v);
            } catch (const std::exception&) {
                throw Error(ErrorKind::SchemaMismatch, path + ":" + std::to_string(lineno) + ": non-numeric '" + v + "'");
            }
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

namespace {

std::string fmt(double v, const char* f = "%.2f")
{
    char b[64];
    std::snprintf(b, sizeof b, f, v);
    return b;
}

// five-stop perceptual ramp
std::string ramp(double s)
{
    static const double stops[5][3] = {
        {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
    s = std::clamp(s, 0.0, 1.0) * 4.0;
    int i = std::min(3, int(s));
    double f = s - i;
    char b[8];
    std::snprintf(b, sizeof b, "#%02x%02x%02x", int(std::lround(stops[i][0] + f * (stops[i + 1][0] - stops[i][0]))),
                  int(std::lround(stops[i][1] + f * (stops[i + 1][1] - stops[i][1]))),
                  int(std::lround(stops[i][2] + f * (stops[i + 1][2] - stops[i][2]))));
    return b;
}

const double W = 640, H = 560, L = 70, R = 540, T = 40, B = 500;

std::string heatmap(const CsvTable& t, const std::string& title)
{
    int cr = t.column("re_tau"), ci = t.column("im_tau"), cd = t.column("density");
    if (cr < 0 || ci < 0 || cd < 0)
        throw Error(ErrorKind::SchemaMismatch, "heatmap needs columns re_tau, im_tau, density");
    std::map<double, std::vector<std::pair<double, double>>> cols;
    for (auto& r : t.rows) cols[r[cr]].push_back({r[ci], r[cd]});
    const size_t nv = cols.begin()->second.size();
    if (cols.size() < 2 || nv < 2) throw Error(ErrorKind::SchemaMismatch, "heatmap needs at least a 2 x 2 grid");
    for (auto& [u, v] : cols) {
        if (v.size() != nv) throw Error(ErrorKind::SchemaMismatch, "heatmap rows do not form a grid");
        std::sort(v.begin(), v.end());
    }
    std::vector<double> us;
    std::vector<std::vector<std::pair<double, double>>> g;
    for (auto& [u, v] : cols) {
        us.push_back(u);
        g.push_back(v);
    }
    double ymin = 1e300, ymax = -1e300, dmin = 1e300, dmax = -1e300;
    for (auto& c : g)
        for (auto& [y, d] : c) {
            ymin = std::min(ymin, std::log(y));
            ymax = std::max(ymax, std::log(y));
            if (d > 0) {
                dmin = std::min(dmin, std::log(d));
                dmax = std::max(dmax, std::log(d));
            }
        }
    if (dmax < dmin) dmin = dmax = 0.0;
    const double umin = us.front(), umax = us.back();
    auto X = [&](double u) { return L + (R - L) * (u - umin) / (umax - umin); };
    auto Y = [&](double y) { return B - (B - T) * (std::log(y) - ymin) / std::max(1e-12, ymax - ymin); };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
      << " " << H << "\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
      << title << "</text>\n";
    o << "<g stroke=\"none\">\n";
    for (size_t i = 0; i + 1 < g.size(); ++i)
        for (size_t k = 0; k + 1 < nv; ++k) {
            double s = 0.0;
            int cnt = 0;
            for (auto p : {g[i][k], g[i][k + 1], g[i + 1][k], g[i + 1][k + 1]})
                if (p.second > 0) {
                    s += std::log(p.second);
                    ++cnt;
                }
            double lv = cnt ? s / cnt : dmin;
            double frac = dmax > dmin ? (lv - dmin) / (dmax - dmin) : 0.5;
            o << "<path class=\"cell\" d=\"M" << fmt(X(us[i])) << "," << fmt(Y(g[i][k].first)) << " L" << fmt(X(us[i + 1])) << ","
              << fmt(Y(g[i + 1][k].first)) << " L" << fmt(X(us[i + 1])) << "," << fmt(Y(g[i + 1][k + 1].first))
              << " L" << fmt(X(us[i])) << "," << fmt(Y(g[i][k + 1].first)) << " Z\" fill=\"" << ramp(frac)
              << "\"/>\n";
        }
    o << "</g>\n";
    o << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    o << "<text x=\"" << fmt(X(umin)) << "\" y=\"" << B + 18 << "\" text-anchor=\"middle\">" << fmt(umin, "%.3g")
      << "</text>\n";
    o << "<text x=\"" << fmt(X(umax)) << "\" y=\"" << B + 18 << "\" text-anchor=\"middle\">" << fmt(umax, "%.3g")
      << "</text>\n";
    o << "<text x=\"" << (L + R) / 2 << "\" y=\"" << B + 36 << "\" text-anchor=\"middle\">Re tau</text>\n";
    o << "<text x=\"" << L - 8 << "\" y=\"" << fmt(B) << "\" text-anchor=\"end\">" << fmt(std::exp(ymin), "%.3g")
      << "</text>\n";
    o << "<text x=\"" << L - 8 << "\" y=\"" << fmt(T + 4) << "\" text-anchor=\"end\">" << fmt(std::exp(ymax), "%.3g")
      << "</text>\n";
    o << "<text x=\"20\" y=\"" << (T + B) / 2 << "\" transform=\"rotate(-90 20 " << (T + B) / 2
      << ")\" text-anchor=\"middle\">Im tau (log)</text>\n";
    // colour bar
    for (int q = 0; q < 20; ++q)
        o << "<rect x=\"" << R + 30 << "\" y=\"" << fmt(B - (q + 1) * (B - T) / 20.0) << "\" width=\"18\" height=\""
          << fmt((B - T) / 20.0 + 0.5) << "\" fill=\"" << ramp((q + 0.5) / 20.0) << "\"/>\n";
    o << "<text x=\"" << R + 52 << "\" y=\"" << fmt(B) << "\">" << fmt(std::exp(dmin), "%.3g") << "</text>\n";
    o << "<text x=\"" << R + 52 << "\" y=\"" << fmt(T + 8) << "\">" << fmt(std::exp(dmax), "%.3g") << "</text>\n";
    o << "</g>\n</svg>\n";
    return o.str();
}

std::string line(const CsvTable& t, const std::string& title)
{
    if (t.columns.size() < 2) throw Error(ErrorKind::SchemaMismatch, "line plot needs an x column and at least one series");
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (auto& r : t.rows) {
        xmin = std::min(xmin, r[0]);
        xmax = std::max(xmax, r[0]);
        for (size_t c = 1; c < r.size(); ++c) {
            ymin = std::min(ymin, r[c]);
            ymax = std::max(ymax, r[c]);
        }
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    auto X = [&](double x) { return L + (R - L) * (x - xmin) / (xmax - xmin); };
    auto Y = [&](double y) { return B - (B - T) * (y - ymin) / (ymax - ymin); };
    static const char* pal[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
      << " " << H << "\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
      << title << "</text>\n";
    o << "<path d=\"M" << L << "," << T << " L" << L << "," << B << " L" << R << "," << B
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (size_t c = 1; c < t.columns.size(); ++c) {
        o << "<path fill=\"none\" stroke=\"" << pal[(c - 1) % 6] << "\" d=\"";
        for (size_t i = 0; i < t.rows.size(); ++i)
            o << (i ? " L" : "M") << fmt(X(t.rows[i][0])) << "," << fmt(Y(t.rows[i][c]));
        o << "\"/>\n";
        o << "<text x=\"" << R + 8 << "\" y=\"" << T + 16 * c << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\""
          << pal[(c - 1) % 6] << "\">" << t.columns[c] << "</text>\n";
    }
    o << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    o << "<text x=\"" << L << "\" y=\"" << B + 18 << "\" text-anchor=\"middle\">" << fmt(xmin, "%.4g") << "</text>\n";
    o << "<text x=\"" << R << "\" y=\"" << B + 18 << "\" text-anchor=\"middle\">" << fmt(xmax, "%.4g") << "</text>\n";
    o << "<text x=\"" << (L + R) / 2 << "\" y=\"" << B + 36 << "\" text-anchor=\"middle\">" << t.columns[0]
      << "</text>\n";
    o << "<text x=\"" << L - 6 << "\" y=\"" << B << "\" text-anchor=\"end\">" << fmt(ymin, "%.4g") << "</text>\n";
    o << "<text x=\"" << L - 6 << "\" y=\"" << T + 4 << "\" text-anchor=\"end\">" << fmt(ymax, "%.4g") << "</text>\n";
    o << "</g>\n</svg>\n";
    return o.str();
}

}  // namespace

std::string render_svg(const CsvTable& t, PlotKind kind, const std::string& title)
{
    if (t.rows.empty()) throw Error(ErrorKind::SchemaMismatch, "no data rows to plot");
    return kind == PlotKind::Heatmap ? heatmap(t, title) : line(t, title);
}

void emit_plot(const std::string& data_path, PlotKind kind, const std::string& out_svg)
{
    CsvTable t = read_csv(data_path);
    std::string title = data_path.substr(data_path.find_last_of('/') == std::string::npos ? 0 : data_path.find_last_of('/') + 1);
    std::string svg = render_svg(t, kind, title);
    std::ofstream out(out_svg, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + out_svg);
    out << svg;
}

}  // namespace torus_lqg::cli
