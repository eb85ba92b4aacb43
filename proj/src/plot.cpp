#include "mdsmod/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mdsmod {

namespace {

struct CurvePoint {
    double snr_db = 0.0;
    double ber = 0.0;
};

struct Curve {
    std::string label;
    std::vector<CurvePoint> points;
};

const char* kPalette[] = {"#1f6fb2", "#d1495b", "#3a7d44", "#8e6c2f",
                          "#6b4fa0", "#1d8a99", "#b35a1f", "#54585a"};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(line);
    while (std::getline(in, item, ',')) out.push_back(trim(item));
    return out;
}

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(6) << v;
    return s.str();
}

std::string escape_xml(const std::string& s) {
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

/// Reads the sweep rows of one CSV, grouped into labeled curves.
void load_curves(const std::string& path, std::vector<Curve>& curves, std::ostream* warnings) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::string line;
    std::vector<std::string> header;
    std::map<std::string, std::size_t> by_label;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const std::vector<std::string> cells = split_csv(line);
        if (header.empty()) {
            header = cells;
            continue;
        }
        auto col = [&](const std::string& name) -> const std::string& {
            for (std::size_t i = 0; i < header.size(); ++i)
                if (header[i] == name && i < cells.size()) return cells[i];
            throw std::runtime_error("'" + path + "' lacks column '" + name + "'");
        };
        const double snr = std::stod(col("snr_db"));
        const double ber = std::stod(col("ber"));
        const std::string label = col("pipeline") + " N=" + col("n") + " Q=" + col("q") +
                                  " M1=" + col("m1") + " " + col("mapping");
        if (!(ber > 0.0)) {
            if (warnings)
                *warnings << "skipping " << path << " snr_db=" << fmt(snr)
                          << ": ber=0 cannot sit on a log axis\n";
            continue;
        }
        auto [it, fresh] = by_label.try_emplace(label, curves.size());
        if (fresh) curves.push_back({label, {}});
        curves[it->second].points.push_back({snr, ber});
    }
    if (header.empty()) throw std::runtime_error("'" + path + "' has no column header");
}

}  // namespace

int plot_ber_csv(const std::vector<std::string>& csv_paths, const std::string& out_svg,
                 const PlotOptions& options, std::ostream* warnings) {
    std::vector<Curve> curves;
    for (const auto& path : csv_paths) load_curves(path, curves, warnings);
    for (auto& c : curves)
        std::sort(c.points.begin(), c.points.end(),
                  [](const CurvePoint& a, const CurvePoint& b) { return a.snr_db < b.snr_db; });
    curves.erase(std::remove_if(curves.begin(), curves.end(),
                                [](const Curve& c) { return c.points.empty(); }),
                 curves.end());

    double x_min = 0.0, x_max = 10.0, y_lo = -4.0, y_hi = 0.0;
    if (!curves.empty()) {
        x_min = 1e300;
        x_max = -1e300;
        double b_min = 1.0, b_max = 0.0;
        for (const auto& c : curves) {
            for (const auto& p : c.points) {
                x_min = std::min(x_min, p.snr_db);
                x_max = std::max(x_max, p.snr_db);
                b_min = std::min(b_min, p.ber);
                b_max = std::max(b_max, p.ber);
            }
        }
        if (x_max - x_min < 1.0) {
            x_min -= 0.5;
            x_max += 0.5;
        }
        y_lo = std::floor(std::log10(b_min));
        y_hi = std::ceil(std::log10(b_max));
        if (y_hi - y_lo < 1.0) y_lo = y_hi - 1.0;
    }

    const double ml = 64, mr = 16, mt = 40, mb = 48;
    const double pw = options.width - ml - mr;
    const double ph = options.height - mt - mb;
    auto sx = [&](double v) { return ml + (v - x_min) / (x_max - x_min) * pw; };
    auto sy = [&](double ber) { return mt + (y_hi - std::log10(ber)) / (y_hi - y_lo) * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width
        << "\" height=\"" << options.height << "\" viewBox=\"0 0 " << options.width << " "
        << options.height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << ml + pw / 2 << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\""
        << " text-anchor=\"middle\">" << escape_xml(options.title) << "</text>\n";

    // decade gridlines and y tick labels
    for (int d = static_cast<int>(y_lo); d <= static_cast<int>(y_hi); ++d) {
        const double y = sy(std::pow(10.0, d));
        svg << "<line x1=\"" << ml << "\" y1=\"" << fmt(y) << "\" x2=\"" << ml + pw << "\" y2=\""
            << fmt(y) << "\" stroke=\"#dddddd\"/>\n";
        svg << "<text x=\"" << ml - 8 << "\" y=\"" << fmt(y + 4)
            << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">1e" << d
            << "</text>\n";
    }
    // x ticks on whole dB steps sized to the range
    const double span = x_max - x_min;
    double step = 1.0;
    while (span / step > 10.0) step *= 2.0;
    for (double v = std::ceil(x_min / step) * step; v <= x_max + 1e-9; v += step) {
        const double x = sx(v);
        svg << "<line x1=\"" << fmt(x) << "\" y1=\"" << mt + ph << "\" x2=\"" << fmt(x)
            << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"#444444\"/>\n";
        svg << "<text x=\"" << fmt(x) << "\" y=\"" << mt + ph + 20
            << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" << fmt(v)
            << "</text>\n";
    }
    svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << fmt(pw) << "\" height=\""
        << fmt(ph) << "\" fill=\"none\" stroke=\"#444444\"/>\n";
    svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << options.height - 8
        << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">symbol SNR"
           " (dB)</text>\n";
    svg << "<text x=\"16\" y=\"" << mt + ph / 2
        << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\""
        << " transform=\"rotate(-90 16 " << mt + ph / 2 << ")\">BER</text>\n";

    for (std::size_t i = 0; i < curves.size(); ++i) {
        const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
        std::ostringstream pts;
        for (const auto& p : curves[i].points) pts << fmt(sx(p.snr_db)) << ',' << fmt(sy(p.ber)) << ' ';
        svg << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.8\"/>\n";
        for (const auto& p : curves[i].points)
            svg << "<circle cx=\"" << fmt(sx(p.snr_db)) << "\" cy=\"" << fmt(sy(p.ber))
                << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        const double ly = mt + 16 + 18.0 * static_cast<double>(i);
        svg << "<line x1=\"" << ml + pw - 190 << "\" y1=\"" << fmt(ly - 4) << "\" x2=\""
            << ml + pw - 166 << "\" y2=\"" << fmt(ly - 4) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << ml + pw - 160 << "\" y=\"" << fmt(ly)
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape_xml(curves[i].label)
            << "</text>\n";
    }
    if (curves.empty())
        svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << mt + ph / 2
            << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">no plottable"
               " rows</text>\n";
    svg << "</svg>\n";

    std::ofstream out(out_svg);
    if (!out) throw std::runtime_error("cannot open '" + out_svg + "' for writing");
    out << svg.str();
    out.flush();
    if (!out) throw std::runtime_error("failed writing '" + out_svg + "'");
    return static_cast<int>(curves.size());
}

}  // namespace mdsmod
